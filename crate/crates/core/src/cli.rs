//! Command-line front end: run configuration, report assembly and output.
//!
//! Config files hold whitespace-separated `key=value` tokens. Values are bare
//! words, quoted strings, or `[ "..", ".." ]` string lists; `#` starts a
//! comment.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cr_universal::{btype_label, build_universal_cr, UniversalCR};
use crate::error::{Error, Result};
use crate::free_lie::{witt_dimension, Alphabet, FreeLieAlgebra, DEFAULT_BASIS_CAP};
use crate::prolongation::{prolong_until_zero, DegreeShiftMap, ProlongationResult, Tower};
use crate::symbol::{build_symbol, CRSymbol};
use crate::verify::{verify_symbol, CheckStatus, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Hall,
    Universal,
    Symbol,
    Prolong,
    Verify,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Hall => "hall",
            Command::Universal => "universal",
            Command::Symbol => "symbol",
            Command::Prolong => "prolong",
            Command::Verify => "verify",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "hall" => Command::Hall,
            "universal" => Command::Universal,
            "symbol" => Command::Symbol,
            "prolong" => Command::Prolong,
            "verify" => Command::Verify,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub n: Option<usize>,
    pub mu: Option<usize>,
    pub ideal: Vec<String>,
    pub max_level: usize,
    pub basis_cap: usize,
    pub emit_bases: bool,
    /// `None` is standard output.
    pub output: Option<String>,
    /// Only used by `hall`.
    pub generators: Option<usize>,
    pub depth: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            n: None,
            mu: None,
            ideal: Vec::new(),
            max_level: 4,
            basis_cap: DEFAULT_BASIS_CAP,
            emit_bases: false,
            output: None,
            generators: None,
            depth: None,
        }
    }
}

fn config_err(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        message: message.into(),
    }
}

enum RawValue {
    Word(String),
    List(Vec<String>),
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    /// Spaces and tabs only; a value never continues on the next line.
    fn skip_inline(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.bump();
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn quoted(&mut self) -> Result<String> {
        let start = self.pos;
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None => {
                    return Err(Error::Parse {
                        position: start,
                        message: "unterminated string".into(),
                    })
                }
                Some('"') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some(c @ ('"' | '\\')) => out.push(c),
                    _ => return Err(self.err("bad escape")),
                },
                Some(c) => out.push(c),
            }
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '#' {
                break;
            }
            self.bump();
        }
        self.text[start..self.pos].to_string()
    }

    fn value(&mut self) -> Result<RawValue> {
        match self.peek() {
            Some('"') => Ok(RawValue::Word(self.quoted()?)),
            Some('[') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.peek() {
                        Some(']') => {
                            self.bump();
                            return Ok(RawValue::List(items));
                        }
                        Some('"') => {
                            items.push(self.quoted()?);
                            self.skip_blank();
                            match self.peek() {
                                Some(',') => {
                                    self.bump();
                                }
                                Some(']') => {}
                                _ => return Err(self.err("expected ',' or ']'")),
                            }
                        }
                        _ => return Err(self.err("expected a quoted string or ']'")),
                    }
                }
            }
            Some(c) if !c.is_whitespace() => Ok(RawValue::Word(self.word())),
            _ => Err(self.err("missing value")),
        }
    }
}

fn parse_count(key: &str, v: RawValue) -> Result<usize> {
    match v {
        RawValue::Word(w) => w
            .parse()
            .map_err(|_| config_err(key, format!("expected a non-negative integer, got {w:?}"))),
        RawValue::List(_) => Err(config_err(key, "expected a number, got a list")),
    }
}

/// Parses a config file. Ideal expressions are checked against the monomial
/// syntax once `n` is known.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut lx = Lexer { text, pos: 0 };
    loop {
        lx.skip_blank();
        if lx.peek().is_none() {
            break;
        }
        let key_start = lx.pos;
        while let Some(c) = lx.peek() {
            if c == '=' || c.is_whitespace() {
                break;
            }
            lx.bump();
        }
        let key = text[key_start..lx.pos].to_string();
        lx.skip_inline();
        if lx.peek() != Some('=') {
            return Err(Error::Parse {
                position: key_start,
                message: format!("expected key=value, got {key:?}"),
            });
        }
        lx.bump();
        lx.skip_inline();
        let value = lx.value()?;
        match key.as_str() {
            "command" => {
                let RawValue::Word(w) = value else {
                    return Err(config_err(&key, "expected a word"));
                };
                cfg.command =
                    Some(Command::parse(&w).ok_or_else(|| config_err(&key, format!("unknown command {w:?}")))?);
            }
            "n" => cfg.n = Some(parse_count(&key, value)?),
            "mu" => cfg.mu = Some(parse_count(&key, value)?),
            "max_level" => cfg.max_level = parse_count(&key, value)?,
            "basis_cap" => cfg.basis_cap = parse_count(&key, value)?,
            "generators" => cfg.generators = Some(parse_count(&key, value)?),
            "depth" => cfg.depth = Some(parse_count(&key, value)?),
            "ideal" => {
                cfg.ideal = match value {
                    RawValue::List(items) => items,
                    RawValue::Word(w) => vec![w],
                }
            }
            "emit_bases" => {
                cfg.emit_bases = match value {
                    RawValue::Word(w) if w == "true" => true,
                    RawValue::Word(w) if w == "false" => false,
                    _ => return Err(config_err(&key, "expected true or false")),
                }
            }
            "output" => {
                let RawValue::Word(w) = value else {
                    return Err(config_err(&key, "expected a path"));
                };
                cfg.output = (w != "-").then_some(w);
            }
            _ => return Err(config_err(&key, "unknown key")),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    /// Range checks and ideal syntax.
    pub fn validate(&self) -> Result<()> {
        if matches!(self.n, Some(0)) {
            return Err(config_err("n", "n out of range"));
        }
        if matches!(self.mu, Some(m) if m < 2) {
            return Err(config_err("mu", "mu out of range"));
        }
        if self.max_level == 0 {
            return Err(config_err("max_level", "max_level out of range"));
        }
        if let Some(n) = self.n {
            let alphabet = Alphabet::Cr {
                n,
                antiholomorphic_first: false,
            };
            for (k, expr) in self.ideal.iter().enumerate() {
                alphabet.parse_sum(expr).map_err(|e| {
                    config_err("ideal", format!("expression {} ({expr:?}): {e}", k + 1))
                })?;
            }
        }
        Ok(())
    }

    /// Config text that parses back to `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(c) = self.command {
            let _ = writeln!(out, "command={}", c.name());
        }
        for (key, v) in [("n", self.n), ("mu", self.mu), ("generators", self.generators), ("depth", self.depth)] {
            if let Some(v) = v {
                let _ = writeln!(out, "{key}={v}");
            }
        }
        let quoted: Vec<String> = self
            .ideal
            .iter()
            .map(|s| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"")))
            .collect();
        let _ = writeln!(out, "ideal=[{}]", quoted.join(", "));
        let _ = writeln!(out, "max_level={}", self.max_level);
        let _ = writeln!(out, "basis_cap={}", self.basis_cap);
        let _ = writeln!(out, "emit_bases={}", self.emit_bases);
        if let Some(o) = &self.output {
            let _ = writeln!(out, "output=\"{}\"", o.replace('\\', "\\\\").replace('"', "\\\""));
        }
        out
    }

    fn require_n_mu(&self) -> Result<(usize, usize)> {
        let n = self.n.ok_or_else(|| config_err("n", "missing"))?;
        let mu = self.mu.ok_or_else(|| config_err("mu", "missing"))?;
        Ok((n, mu))
    }

    fn build_symbol(&self) -> Result<CRSymbol> {
        let (n, mu) = self.require_n_mu()?;
        build_symbol(build_universal_cr(n, mu, self.basis_cap)?, &self.ideal)
    }
}

// ---------------------------------------------------------------- reports

/// Compact JSON with `": "` and `", "` separators.
struct Spaced;

impl serde_json::ser::Formatter for Spaced {
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

/// Machine form of a report: one line, keys sorted.
pub fn to_machine(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Spaced);
    v.serialize(&mut ser).expect("serializing a JSON value cannot fail");
    String::from_utf8(buf).expect("JSON output is UTF-8")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

/// A report in both renderings.
pub struct Report {
    pub machine: Value,
    pub human: String,
    pub failed: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => to_machine(&self.machine),
            Format::Human => self.human.clone(),
        }
    }
}

fn dims_line(label: &str, dims: &[usize]) -> String {
    let cells: Vec<String> = dims.iter().map(usize::to_string).collect();
    format!("{label:<22}{}\n", cells.join("  "))
}

pub fn hall_report(generators: usize, depth: usize, cap: usize, emit_bases: bool) -> Result<Report> {
    if generators == 0 || depth == 0 {
        return Err(config_err("generators", "generators and depth must be positive"));
    }
    let free = FreeLieAlgebra::with_alphabet(Alphabet::Generic(generators), depth, cap)?;
    let dims = free.dims();
    let witt: Vec<u128> = (1..=depth).map(|d| witt_dimension(generators, d)).collect();
    let mut human = format!("free Lie algebra on {generators} generators, depth {depth}\n");
    human += "degree  dim  witt\n";
    for d in 1..=depth {
        let _ = writeln!(human, "{:>6}  {:>3}  {:>4}", -(d as i64), dims[d - 1], witt[d - 1]);
    }
    let mut machine = json!({
        "command": "hall",
        "generators": generators,
        "depth": depth,
        "dims": dims,
        "witt": witt.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    });
    if emit_bases {
        let alphabet = free.alphabet();
        let basis: Vec<String> = free.basis().iter().map(|h| alphabet.format_tree(h.tree())).collect();
        human += "basis\n";
        for b in &basis {
            let _ = writeln!(human, "  {b}");
        }
        machine["basis"] = json!(basis);
    }
    let failed = dims.iter().zip(&witt).any(|(a, b)| *a as u128 != *b);
    Ok(Report { machine, human, failed })
}

fn blocks_value(u: &UniversalCR) -> (Value, String) {
    let n = u.n();
    let mut map = Map::new();
    let mut human = String::from("B-type blocks\n");
    for k in 1..=u.depth() {
        let blocks = u.type_blocks(k);
        let _ = writeln!(human, "  degree {}:", -(k as i64));
        let list: Vec<Value> = blocks
            .iter()
            .map(|(t, d)| {
                let label = btype_label(t, n);
                let _ = writeln!(human, "    {label:<24}{d}");
                json!([label, d])
            })
            .collect();
        map.insert(format!("{k:02}"), Value::Array(list));
    }
    (Value::Object(map), human)
}

pub fn universal_report(n: usize, mu: usize, cap: usize) -> Result<Report> {
    if n == 0 {
        return Err(config_err("n", "n out of range"));
    }
    if mu < 2 {
        return Err(config_err("mu", "mu out of range"));
    }
    let u = build_universal_cr(n, mu, cap)?;
    let dims = u.dims();
    let free_dims = u.free().dims();
    let ideal: Vec<usize> = (1..=mu).map(|d| u.ideal_dim(d)).collect();
    let (blocks, blocks_human) = blocks_value(&u);
    let checks = [
        ("ideal_bases", u.check_ideal_bases()),
        ("ideal_btype_homogeneous", u.check_ideal_btype_homogeneous()),
        (
            "integrability",
            if u.check_integrability() { Ok(()) } else { Err("[m10, m10] != 0".to_string()) },
        ),
    ];
    let failed = checks.iter().any(|(_, r)| r.is_err());
    let mut human = format!("universal CR algebra, n = {n}, depth {mu}\n");
    human += &dims_line("free dims", &free_dims);
    human += &dims_line("ideal dims", &ideal);
    human += &dims_line("dims", &dims);
    human += &blocks_human;
    let mut check_map = Map::new();
    for (name, r) in &checks {
        let _ = writeln!(human, "{name}: {}", if r.is_ok() { "pass" } else { "fail" });
        check_map.insert(name.to_string(), status_value(&CheckStatus::from_result(r.clone())));
    }
    let machine = json!({
        "command": "universal",
        "n": n,
        "mu": mu,
        "free_dims": free_dims,
        "ideal_dims": ideal,
        "dims": dims,
        "btype_blocks": blocks,
        "checks": Value::Object(check_map),
    });
    Ok(Report { machine, human, failed })
}

pub fn symbol_report(cfg: &RunConfig) -> Result<Report> {
    let s = cfg.build_symbol()?;
    let real = s.real_form()?;
    let checks = [
        ("fundamental", s.check_fundamental()),
        ("integrable", s.check_integrability()),
        ("totally_nondegenerate", s.check_totally_nondegenerate()),
        ("jacobi", s.algebra().check_jacobi().is_ok()),
    ];
    let failed = checks.iter().any(|(_, ok)| !ok);
    let (blocks, blocks_human) = blocks_value(s.universal());
    let mut human = format!("CR symbol, n = {}, depth {}\n", s.n(), s.mu());
    for g in s.ideal_text() {
        let _ = writeln!(human, "ideal generator: {g}");
    }
    human += &dims_line("complex dims", &s.dims());
    human += &dims_line("real form dims", &real.dims());
    human += &blocks_human;
    let mut check_map = Map::new();
    for (name, ok) in checks {
        let _ = writeln!(human, "{name}: {}", if ok { "pass" } else { "fail" });
        check_map.insert(name.to_string(), json!({ "status": if ok { "pass" } else { "fail" } }));
    }
    let mut machine = json!({
        "command": "symbol",
        "n": s.n(),
        "mu": s.mu(),
        "ideal": s.ideal_text(),
        "dims": s.dims(),
        "real_dims": real.dims(),
        "universal_btype_blocks": blocks,
        "checks": Value::Object(check_map),
    });
    if cfg.emit_bases {
        let m = s.algebra();
        let labels: Vec<&str> = (0..m.total_dim()).map(|i| m.label(i)).collect();
        machine["basis"] = json!(labels);
        human += "basis\n";
        for l in labels {
            let _ = writeln!(human, "  {l}");
        }
    }
    Ok(Report { machine, human, failed })
}

/// `E1 -> v; …` on degree −1, which determines the map.
fn format_map(s: &CRSymbol, tower: &Tower<'_>, x: &DegreeShiftMap) -> String {
    let m = s.algebra();
    m.range(1)
        .map(|w| {
            let t = x.shift() as i64 - 1;
            format!("{} -> {}", m.label(w), tower.format_value(t, x.image(w)))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn bases_value(s: &CRSymbol, r: &ProlongationResult) -> (Value, String) {
    let mut map = Map::new();
    let mut human = String::new();
    for (l, level) in r.levels.iter().enumerate() {
        let tower = Tower::new(s, &r.levels[..l]);
        let texts: Vec<String> = level.real_basis().iter().map(|x| format_map(s, &tower, x)).collect();
        let _ = writeln!(human, "real basis of g{l}:");
        for t in &texts {
            let _ = writeln!(human, "  {t}");
        }
        map.insert(format!("g{l}"), json!(texts));
    }
    (Value::Object(map), human)
}

fn opt(v: Option<usize>) -> Value {
    v.map_or(Value::Null, |x| json!(x))
}

pub fn prolong_report(cfg: &RunConfig) -> Result<Report> {
    let s = cfg.build_symbol()?;
    let r = prolong_until_zero(&s, cfg.max_level)?;
    let mut human = format!("prolongation, n = {}, depth {}\n", s.n(), s.mu());
    human += &dims_line("m dims", &s.dims());
    human += &dims_line("complex level dims", &r.complex_dims());
    human += &dims_line("real level dims", &r.real_dims());
    let _ = writeln!(
        human,
        "stabilized at: {}",
        r.stabilized_at.map_or("not within max_level".to_string(), |l| l.to_string())
    );
    let mut machine = json!({
        "command": "prolong",
        "n": s.n(),
        "mu": s.mu(),
        "ideal": s.ideal_text(),
        "max_level": cfg.max_level,
        "m_dims": s.dims(),
        "g_dims_complex": r.complex_dims(),
        "g_dims_real": r.real_dims(),
        "stabilized_at": opt(r.stabilized_at),
        "zero_recheck": r.zero_recheck.map_or(Value::Null, Value::Bool),
    });
    if cfg.emit_bases {
        let (b, h) = bases_value(&s, &r);
        machine["bases"] = b;
        human += &h;
    }
    let failed = r.zero_recheck == Some(false);
    Ok(Report { machine, human, failed })
}

fn status_value(s: &CheckStatus) -> Value {
    match s {
        CheckStatus::Fail(w) => json!({ "status": "fail", "witness": w }),
        other => json!({ "status": other.label() }),
    }
}

pub fn verification_report(v: &VerificationReport, bases: Option<(Value, String)>) -> Report {
    let mut checks = Map::new();
    let mut human = format!("verification, n = {}, depth {}\n", v.n, v.mu);
    for g in &v.ideal {
        let _ = writeln!(human, "ideal generator: {g}");
    }
    human += &dims_line("m dims", &v.m_dims);
    human += &dims_line("complex level dims", &v.complex_dims);
    human += &dims_line("real level dims", &v.real_dims);
    let _ = writeln!(human, "dim g1 (real): {}", v.g1_real_dim());
    let _ = writeln!(human, "theorem status: {}", v.theorem_status.label());
    for c in &v.checks {
        checks.insert(c.name.clone(), status_value(&c.status));
        match &c.status {
            CheckStatus::Fail(w) => {
                let _ = writeln!(human, "  FAIL    {}: {w}", c.name);
            }
            st => {
                let _ = writeln!(human, "  {:<8}{}", st.label(), c.name);
            }
        }
    }
    let mut machine = json!({
        "command": "verify",
        "n": v.n,
        "mu": v.mu,
        "ideal": v.ideal,
        "m_dims": v.m_dims,
        "g_dims_complex": v.complex_dims,
        "g_dims_real": v.real_dims,
        "g0_real_dim": v.real_dims.first().copied().unwrap_or(0),
        "g1_real_dim": v.g1_real_dim(),
        "stabilized_at": opt(v.stabilized_at),
        "theorem_status": v.theorem_status.label(),
        "checks": Value::Object(checks),
    });
    if let Some((b, h)) = bases {
        machine["bases"] = b;
        human += &h;
    }
    Report {
        machine,
        human,
        failed: !v.all_pass(),
    }
}

pub fn verify_config(cfg: &RunConfig) -> Result<Report> {
    let s = cfg.build_symbol()?;
    let r = prolong_until_zero(&s, cfg.max_level)?;
    let v = verify_symbol(&s, &r);
    let bases = cfg.emit_bases.then(|| bases_value(&s, &r));
    Ok(verification_report(&v, bases))
}

// ---------------------------------------------------------------- binary

#[derive(Parser, Debug)]
#[command(name = "tanaka", version, about = "Hall bases, CR symbols and their Tanaka prolongations, in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Args, Debug, Default)]
pub struct Overrides {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub mu: Option<usize>,
    /// Ideal generator in monomial syntax; repeatable, replaces the file's list.
    #[arg(long)]
    pub ideal: Vec<String>,
    #[arg(long)]
    pub basis_cap: Option<usize>,
    #[arg(long)]
    pub emit_bases: bool,
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Sub {
    /// Hall basis of a free Lie algebra.
    Hall {
        #[arg(long)]
        generators: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_BASIS_CAP)]
        basis_cap: usize,
        #[arg(long)]
        emit_bases: bool,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Universal fundamental CR algebra.
    Universal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mu: usize,
        #[arg(long, default_value_t = DEFAULT_BASIS_CAP)]
        basis_cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Build and check a CR symbol.
    Symbol {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Prolong a symbol until it vanishes.
    Prolong {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        max_level: Option<usize>,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Run every check on one or more instances.
    Verify {
        #[arg(long)]
        config: Vec<PathBuf>,
        #[arg(long)]
        max_level: Option<usize>,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Machine)]
        format: Format,
    },
}

fn load(path: Option<&PathBuf>, o: &Overrides, max_level: Option<usize>) -> Result<RunConfig> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| config_err("config", format!("{}: {e}", p.display())))?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    if o.n.is_some() {
        cfg.n = o.n;
    }
    if o.mu.is_some() {
        cfg.mu = o.mu;
    }
    if !o.ideal.is_empty() {
        cfg.ideal = o.ideal.clone();
    }
    if let Some(c) = o.basis_cap {
        cfg.basis_cap = c;
    }
    if let Some(l) = max_level {
        cfg.max_level = l;
    }
    cfg.emit_bases |= o.emit_bases;
    if o.output.is_some() {
        cfg.output = o.output.clone().filter(|p| p != "-");
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_out(output: Option<&str>, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| config_err("output", format!("{p}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Sub::Hall { generators, depth, basis_cap, emit_bases, format } => {
            let r = hall_report(generators, depth, basis_cap, emit_bases)?;
            write_out(None, &r.render(format))?;
            Ok(!r.failed)
        }
        Sub::Universal { n, mu, basis_cap, format } => {
            let r = universal_report(n, mu, basis_cap)?;
            write_out(None, &r.render(format))?;
            Ok(!r.failed)
        }
        Sub::Symbol { config, overrides, format } => {
            let cfg = load(config.as_ref(), &overrides, None)?;
            let r = symbol_report(&cfg)?;
            write_out(cfg.output.as_deref(), &r.render(format))?;
            Ok(!r.failed)
        }
        Sub::Prolong { config, max_level, overrides, format } => {
            let cfg = load(config.as_ref(), &overrides, max_level)?;
            let r = prolong_report(&cfg)?;
            write_out(cfg.output.as_deref(), &r.render(format))?;
            Ok(!r.failed)
        }
        Sub::Verify { config, max_level, overrides, jobs, format } => {
            let configs: Vec<RunConfig> = if config.is_empty() {
                vec![load(None, &overrides, max_level)?]
            } else {
                config
                    .iter()
                    .map(|p| load(Some(p), &overrides, max_level))
                    .collect::<Result<_>>()?
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| config_err("jobs", e.to_string()))?;
            let reports: Vec<Result<Report>> = pool.install(|| configs.par_iter().map(verify_config).collect());
            let mut ok = true;
            let mut text = String::new();
            for r in reports {
                let r = r?;
                ok &= !r.failed;
                text += &r.render(format);
                if !text.ends_with('\n') {
                    text.push('\n');
                }
            }
            write_out(configs[0].output.as_deref(), &text)?;
            Ok(ok)
        }
    }
}

/// Runs the binary and returns its exit code: 0 when every check passes, 1
/// when one fails, 2 on configuration or resource errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_examples() {
        let c = parse_config("command=verify n=1 mu=4").unwrap();
        assert_eq!(c.command, Some(Command::Verify));
        assert_eq!((c.n, c.mu), (Some(1), Some(4)));
        assert!(c.ideal.is_empty());
        assert_eq!(c.max_level, 4);
        let c = parse_config("n=1 mu=4 ideal=[\"[E1,[E1,[E1,F1]]] + [F1,[F1,[E1,F1]]]\"] # comment").unwrap();
        let spaced = parse_config("n = 1\nmu = 4\nideal = [ \"[E1,[E1,[E1,F1]]] + [F1,[F1,[E1,F1]]]\" ]\n").unwrap();
        assert_eq!(spaced, c);
        assert_eq!(c.ideal.len(), 1);
        let e = parse_config("mu=1").unwrap_err();
        assert!(e.to_string().contains("mu out of range"), "{e}");
        assert!(matches!(parse_config("colour=red"), Err(Error::Config { key, .. }) if key == "colour"));
        let e = parse_config("n=1 ideal=[\"[E1,F2]\"]").unwrap_err();
        assert!(e.to_string().contains("position"), "{e}");
    }

    #[test]
    fn config_round_trip() {
        let c = RunConfig {
            command: Some(Command::Prolong),
            n: Some(2),
            mu: Some(4),
            ideal: vec!["[E1,[E1,[E1,F1]]] + [F1,[F1,[E1,F1]]]".into()],
            max_level: 3,
            basis_cap: 500,
            emit_bases: true,
            output: Some("out \"x\".txt".into()),
            generators: None,
            depth: None,
        };
        assert_eq!(parse_config(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn machine_format() {
        let v = json!({"b": [1, 2], "a": "x"});
        assert_eq!(to_machine(&v), r#"{"a": "x", "b": [1, 2]}"#);
        let r = hall_report(1, 3, DEFAULT_BASIS_CAP, false).unwrap();
        assert_eq!(r.machine["dims"], json!([1, 0, 0]));
    }
}
