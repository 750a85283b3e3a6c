//! Text syntax for bracket monomials and their linear combinations:
//! `3/2*[[E2,E1],E1] - [E2,E1]`, `(1+2*i)*[E1,F1]`, `i*[E1,F1]`.

use std::fmt::Write;

use super::tree::Tree;
use crate::error::{Error, Result};
use crate::exact_arith::{GaussianRational, Rational};

/// Naming scheme for the degree −1 generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// `X1 … Xk`
    Generic(usize),
    /// `E1 … En, F1 … Fn`; with `antiholomorphic_first` the F's take the first
    /// `n` generator slots.
    Cr { n: usize, antiholomorphic_first: bool },
}

impl Alphabet {
    pub fn size(&self) -> usize {
        match *self {
            Alphabet::Generic(k) => k,
            Alphabet::Cr { n, .. } => 2 * n,
        }
    }

    /// Name of the 0-based generator slot `g`.
    pub fn name(&self, g: usize) -> String {
        match *self {
            Alphabet::Generic(_) => format!("X{}", g + 1),
            Alphabet::Cr {
                n,
                antiholomorphic_first,
            } => {
                let (first, second) = if antiholomorphic_first { ('F', 'E') } else { ('E', 'F') };
                if g < n {
                    format!("{first}{}", g + 1)
                } else {
                    format!("{second}{}", g - n + 1)
                }
            }
        }
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        let mut chars = name.chars();
        let head = chars.next()?;
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
            return None;
        }
        let idx: usize = digits.parse().ok()?;
        match *self {
            Alphabet::Generic(k) => (head == 'X' && idx <= k).then(|| idx - 1),
            Alphabet::Cr {
                n,
                antiholomorphic_first,
            } => {
                if idx > n {
                    return None;
                }
                let first = if antiholomorphic_first { 'F' } else { 'E' };
                match head {
                    'E' | 'F' if head == first => Some(idx - 1),
                    'E' | 'F' => Some(n + idx - 1),
                    _ => None,
                }
            }
        }
    }

    pub fn format_tree(&self, t: &Tree) -> String {
        let mut s = String::new();
        self.write_tree(t, &mut s);
        s
    }

    fn write_tree(&self, t: &Tree, out: &mut String) {
        match t {
            Tree::Leaf(g) => out.push_str(&self.name(*g)),
            Tree::Node(l, r) => {
                out.push('[');
                self.write_tree(l, out);
                out.push(',');
                self.write_tree(r, out);
                out.push(']');
            }
        }
    }

    pub fn parse_tree(&self, text: &str) -> Result<Tree> {
        let mut p = Parser::new(text, *self);
        let t = p.tree()?;
        p.end()?;
        Ok(t)
    }

    /// Parses a signed sum of coefficient-weighted bracket monomials.
    pub fn parse_sum(&self, text: &str) -> Result<Vec<(GaussianRational, Tree)>> {
        let mut p = Parser::new(text, *self);
        let s = p.sum()?;
        p.end()?;
        Ok(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    alphabet: Alphabet,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, alphabet: Alphabet) -> Self {
        Parser { src, pos: 0, alphabet }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected `{c}`")),
        }
    }

    fn tree(&mut self) -> Result<Tree> {
        if self.eat('[') {
            let l = self.tree()?;
            self.expect(',')?;
            let r = self.tree()?;
            self.expect(']')?;
            return Ok(Tree::node(l, r));
        }
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_alphanumeric() {
                self.pos += 1;
            } else {
                break;
            }
        }
        let name = &self.src[start..self.pos];
        if name.is_empty() {
            self.pos = start;
            return self.err("expected a generator or `[`");
        }
        match self.alphabet.lookup(name) {
            Some(g) => Ok(Tree::Leaf(g)),
            None => {
                self.pos = start;
                self.err(format!("unknown generator `{name}`"))
            }
        }
    }

    fn unsigned_rational(&mut self) -> Result<Rational> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            while matches!(p.peek_raw(), Some(c) if c.is_ascii_digit()) {
                p.pos += 1;
            }
        };
        digits(self);
        if self.peek_raw() == Some('/') {
            self.pos += 1;
            digits(self);
        }
        let text = &self.src[start..self.pos];
        text.parse().or_else(|_| {
            self.pos = start;
            self.err(format!("malformed number `{text}`"))
        })
    }

    /// A single coefficient factor: number, `i`, or a parenthesized complex.
    fn factor(&mut self) -> Result<GaussianRational> {
        match self.peek() {
            Some('i') => {
                self.pos += 1;
                Ok(GaussianRational::i())
            }
            Some('(') => {
                self.pos += 1;
                let mut acc = GaussianRational::zero();
                let mut first = true;
                loop {
                    let neg = if self.eat('-') {
                        true
                    } else {
                        let plus = self.eat('+');
                        if !plus && !first {
                            break;
                        }
                        false
                    };
                    first = false;
                    let mut v = GaussianRational::one();
                    loop {
                        v = &v * &self.factor()?;
                        if !self.eat('*') {
                            break;
                        }
                    }
                    acc = if neg { &acc - &v } else { &acc + &v };
                }
                self.expect(')')?;
                Ok(acc)
            }
            Some(c) if c.is_ascii_digit() => Ok(GaussianRational::real(self.unsigned_rational()?)),
            _ => self.err("expected a coefficient"),
        }
    }

    fn term(&mut self) -> Result<(GaussianRational, Tree)> {
        let mut coeff = GaussianRational::one();
        loop {
            match self.peek() {
                Some('[') => return Ok((coeff, self.tree()?)),
                Some(c) if c == 'i' || c == '(' || c.is_ascii_digit() => {
                    coeff = &coeff * &self.factor()?;
                    self.expect('*')?;
                }
                Some(_) => return Ok((coeff, self.tree()?)),
                None => return self.err("expected a term"),
            }
        }
    }

    fn sum(&mut self) -> Result<Vec<(GaussianRational, Tree)>> {
        let mut out = Vec::new();
        // the printed form of the zero element
        if self.src[self.pos..].trim() == "0" {
            self.pos = self.src.len();
            return Ok(out);
        }
        let mut first = true;
        loop {
            let neg = if self.eat('-') {
                true
            } else if self.eat('+') || first {
                false
            } else if self.peek().is_none() {
                break;
            } else {
                return self.err("expected `+` or `-`");
            };
            first = false;
            let (c, t) = self.term()?;
            out.push((if neg { -c } else { c }, t));
            if self.peek().is_none() {
                break;
            }
        }
        Ok(out)
    }
}

/// Formats `(coefficient, label)` pairs as a signed sum, `0` when empty.
pub fn format_terms(terms: impl IntoIterator<Item = (GaussianRational, String)>) -> String {
    let mut out = String::new();
    for (k, (c, label)) in terms.into_iter().enumerate() {
        let negative = (c.im.is_zero() && c.re.is_negative()) || (c.re.is_zero() && c.im.is_negative());
        let mag = if negative { -c } else { c };
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if mag.is_one() {
        } else if mag.im.is_zero() || mag.re.is_zero() {
            let _ = write!(out, "{mag}*");
        } else {
            let _ = write!(out, "({mag})*");
        }
        out.push_str(&label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CR1: Alphabet = Alphabet::Cr {
        n: 1,
        antiholomorphic_first: false,
    };

    #[test]
    fn names_round_trip() {
        let a = Alphabet::Cr {
            n: 2,
            antiholomorphic_first: false,
        };
        for g in 0..4 {
            assert_eq!(a.lookup(&a.name(g)), Some(g));
        }
        assert_eq!(a.name(2), "F1");
        let b = Alphabet::Cr {
            n: 2,
            antiholomorphic_first: true,
        };
        assert_eq!(b.name(0), "F1");
        assert_eq!(b.lookup("E2"), Some(3));
        assert_eq!(Alphabet::Generic(3).lookup("X3"), Some(2));
        assert_eq!(Alphabet::Generic(3).lookup("X4"), None);
        assert_eq!(Alphabet::Generic(3).lookup("X01"), None);
    }

    #[test]
    fn parses_signed_sums() {
        let a = Alphabet::Generic(2);
        let s = a.parse_sum("3/2*[[X2,X1],X1] - [X2,X1]").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].0, GaussianRational::ratio(3, 2));
        assert_eq!(a.format_tree(&s[0].1), "[[X2,X1],X1]");
        assert_eq!(s[1].0, GaussianRational::from_int(-1));
        let s = CR1.parse_sum("[E1,[E1,[E1,F1]]] + [F1,[F1,[E1,F1]]]").unwrap();
        assert_eq!(s.len(), 2);
        let s = CR1.parse_sum("(1+2*i)*[E1,F1] - i*[F1,E1] + 2*i*E1").unwrap();
        assert_eq!(s[0].0, "1+2*i".parse().unwrap());
        assert_eq!(s[1].0, -GaussianRational::i());
        assert_eq!(s[2].0, "2*i".parse().unwrap());
        assert_eq!(s[2].1, Tree::Leaf(0));
    }

    #[test]
    fn reports_error_positions() {
        match CR1.parse_sum("[E1,G1]") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(CR1.parse_sum("[E1,F1").is_err());
        assert!(CR1.parse_sum("[E1,F1] [E1,F1]").is_err());
        assert!(CR1.parse_sum("").is_err());
        assert!(CR1.parse_sum("1/0*E1").is_err());
    }

    #[test]
    fn format_round_trip() {
        let text = "3/2*[[X2,X1],X1] - [X2,X1] + (1-1/3*i)*X1 - 2*i*X2";
        let a = Alphabet::Generic(2);
        let parsed = a.parse_sum(text).unwrap();
        let printed = format_terms(parsed.iter().map(|(c, t)| (c.clone(), a.format_tree(t))));
        assert_eq!(printed, text);
        assert_eq!(format_terms(std::iter::empty()), "0");
    }
}
