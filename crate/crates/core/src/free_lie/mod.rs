//! Hall bases of free nilpotent Lie algebras and the rewriting of arbitrary
//! bracket trees into them.

mod element;
mod graded;
mod quotient;
mod text;
mod tree;

use std::collections::HashMap;
use std::rc::Rc;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

pub use element::AlgebraElement;
pub use graded::GradedAlgebra;
pub use quotient::Quotient;
pub use text::{format_terms, Alphabet};
pub use tree::Tree;

use crate::error::{Error, Result};
use crate::exact_arith::GaussianRational;

/// Refuse to build Hall bases with more elements than this unless overridden.
pub const DEFAULT_BASIS_CAP: usize = 20_000;

/// A basis element of the Hall basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallMonomial {
    tree: Tree,
    degree: usize,
    btype: Vec<u32>,
    hall_index: usize,
    parts: Option<(usize, usize)>,
}

impl HallMonomial {
    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn btype(&self) -> &[u32] {
        &self.btype
    }

    /// Position in the Hall order (global, degree-major).
    pub fn hall_index(&self) -> usize {
        self.hall_index
    }

    /// Hall indices of the two factors, `None` for a generator.
    pub fn parts(&self) -> Option<(usize, usize)> {
        self.parts
    }
}

/// The free Lie algebra on `generators` letters truncated at `depth`, with its
/// Hall basis.
///
/// Order: degree-major; inside a degree, lexicographic on (degree of the left
/// factor, Hall index of the left factor, Hall index of the right factor).
#[derive(Debug)]
pub struct FreeLieAlgebra {
    alphabet: Alphabet,
    depth: usize,
    basis: Vec<HallMonomial>,
    offsets: Vec<usize>,
    pair_index: HashMap<(usize, usize), usize>,
    graded: OnceLock<GradedAlgebra>,
}

/// `(1/d) Σ_{e|d} μ(e) k^{d/e}`, the dimension of the degree-`d` part of the
/// free Lie algebra on `k` letters.
pub fn witt_dimension(generators: usize, degree: usize) -> u128 {
    assert!(generators >= 1 && degree >= 1);
    let k = BigInt::from(generators);
    let mut sum = BigInt::zero();
    for e in (1..=degree).filter(|e| degree.is_multiple_of(*e)) {
        let m = mobius(e);
        if m != 0 {
            sum += BigInt::from(m) * num_traits::pow(k.clone(), degree / e);
        }
    }
    (sum / BigInt::from(degree)).to_u128().unwrap_or(u128::MAX)
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

impl FreeLieAlgebra {
    /// Hall basis on generic generators `X1 … Xk`.
    pub fn hall_basis(generators: usize, depth: usize) -> Result<Self> {
        Self::with_alphabet(Alphabet::Generic(generators), depth, DEFAULT_BASIS_CAP)
    }

    pub fn with_alphabet(alphabet: Alphabet, depth: usize, cap: usize) -> Result<Self> {
        let k = alphabet.size();
        if k == 0 || depth == 0 {
            return Err(Error::InvalidInput(
                "need at least one generator and depth at least 1".into(),
            ));
        }
        let predicted = (1..=depth).fold(0u128, |acc, d| acc.saturating_add(witt_dimension(k, d)));
        if predicted > cap as u128 {
            return Err(Error::ResourceCap { predicted, cap });
        }
        let mut basis: Vec<HallMonomial> = (0..k)
            .map(|g| {
                let tree = Tree::Leaf(g);
                HallMonomial {
                    btype: tree.btype(k),
                    tree,
                    degree: 1,
                    hall_index: g,
                    parts: None,
                }
            })
            .collect();
        let mut offsets = vec![0, k];
        let mut pair_index = HashMap::new();
        for d in 2..=depth {
            for dl in 1..d {
                let dr = d - dl;
                for u in offsets[dl - 1]..offsets[dl] {
                    for v in offsets[dr - 1]..offsets[dr] {
                        if v >= u {
                            continue;
                        }
                        if let Some((_, u2)) = basis[u].parts {
                            if u2 > v {
                                continue;
                            }
                        }
                        let index = basis.len();
                        let btype = basis[u]
                            .btype
                            .iter()
                            .zip(&basis[v].btype)
                            .map(|(a, b)| a + b)
                            .collect();
                        basis.push(HallMonomial {
                            tree: Tree::node(basis[u].tree.clone(), basis[v].tree.clone()),
                            degree: d,
                            btype,
                            hall_index: index,
                            parts: Some((u, v)),
                        });
                        pair_index.insert((u, v), index);
                    }
                }
            }
            offsets.push(basis.len());
        }
        Ok(FreeLieAlgebra {
            alphabet,
            depth,
            basis,
            offsets,
            pair_index,
            graded: OnceLock::new(),
        })
    }

    pub fn generators(&self) -> usize {
        self.alphabet.size()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn basis(&self) -> &[HallMonomial] {
        &self.basis
    }

    pub fn monomial(&self, i: usize) -> &HallMonomial {
        &self.basis[i]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn range(&self, d: usize) -> std::ops::Range<usize> {
        self.offsets[d - 1]..self.offsets[d]
    }

    /// Hall index of `[u, v]` when that pair is itself a Hall monomial.
    pub fn hall_pair(&self, u: usize, v: usize) -> Option<usize> {
        self.pair_index.get(&(u, v)).copied()
    }

    /// The algebra with its complete structure-constant table, computed on
    /// first use by rewriting every pairwise bracket of basis elements.
    pub fn graded(&self) -> &GradedAlgebra {
        self.graded.get_or_init(|| {
            let mut rw = Rewriter {
                alg: self,
                memo: HashMap::new(),
            };
            let mut upper = Vec::new();
            let n = self.basis.len();
            for a in 0..n {
                for b in 0..a {
                    if self.basis[a].degree + self.basis[b].degree > self.depth {
                        continue;
                    }
                    let v = rw.bracket(a, b);
                    if !v.is_zero() {
                        upper.push(((b, a), v.neg()));
                    }
                }
            }
            let labels = self
                .basis
                .iter()
                .map(|m| self.alphabet.format_tree(&m.tree))
                .collect();
            let btypes = self.basis.iter().map(|m| m.btype.clone()).collect();
            GradedAlgebra::new(&self.dims(), labels, btypes, upper)
                .expect("rewritten brackets are homogeneous")
        })
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.graded().bracket(x, y)
    }

    /// Expansion of a formal bracket tree in the Hall basis; trees deeper than
    /// the depth give zero.
    pub fn hall_rewrite(&self, t: &Tree) -> AlgebraElement {
        match t {
            Tree::Leaf(g) => {
                assert!(*g < self.generators(), "generator slot out of range");
                AlgebraElement::basis(*g)
            }
            Tree::Node(l, r) => {
                if t.degree() > self.depth {
                    return AlgebraElement::zero();
                }
                self.bracket(&self.hall_rewrite(l), &self.hall_rewrite(r))
            }
        }
    }

    pub fn rewrite_sum(&self, terms: &[(GaussianRational, Tree)]) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (c, t) in terms {
            out.add_scaled(c, &self.hall_rewrite(t));
        }
        out
    }

    pub fn parse_element(&self, text: &str) -> Result<AlgebraElement> {
        Ok(self.rewrite_sum(&self.alphabet.parse_sum(text)?))
    }

    pub fn format_element(&self, x: &AlgebraElement) -> String {
        format_terms(
            x.iter()
                .map(|(i, c)| (c.clone(), self.alphabet.format_tree(&self.basis[i].tree))),
        )
    }
}

/// Memoized Hall rewriting of brackets of two basis elements.
struct Rewriter<'a> {
    alg: &'a FreeLieAlgebra,
    memo: HashMap<(usize, usize), Rc<AlgebraElement>>,
}

impl Rewriter<'_> {
    fn bracket(&mut self, a: usize, b: usize) -> Rc<AlgebraElement> {
        let basis = &self.alg.basis;
        if a == b || basis[a].degree + basis[b].degree > self.alg.depth {
            return Rc::new(AlgebraElement::zero());
        }
        if a < b {
            return Rc::new(self.bracket(b, a).neg());
        }
        if let Some(v) = self.memo.get(&(a, b)) {
            return v.clone();
        }
        let v = match basis[a].parts {
            None => AlgebraElement::basis(self.alg.pair_index[&(a, b)]),
            Some((_, a2)) if a2 <= b => AlgebraElement::basis(self.alg.pair_index[&(a, b)]),
            Some((a1, a2)) => {
                // [[a1,a2],b] = [[a1,b],a2] − [[a2,b],a1]
                let mut out = AlgebraElement::zero();
                let x = self.bracket(a1, b);
                for (u, c) in x.iter() {
                    let t = self.bracket(u, a2);
                    out.add_scaled(c, &t);
                }
                let y = self.bracket(a2, b);
                let minus = GaussianRational::from_int(-1);
                for (u, c) in y.iter() {
                    let t = self.bracket(u, a1);
                    out.add_scaled(&(&minus * c), &t);
                }
                out
            }
        };
        let v = Rc::new(v);
        self.memo.insert((a, b), v.clone());
        v
    }
}

impl HallMonomial {
    /// `true` for generators; otherwise checks the Hall conditions against the
    /// containing algebra.
    pub fn satisfies_hall_conditions(&self, alg: &FreeLieAlgebra) -> bool {
        match self.parts {
            None => true,
            Some((u, v)) => {
                v < u
                    && match alg.basis[u].parts {
                        None => true,
                        Some((_, u2)) => u2 <= v,
                    }
            }
        }
    }
}
