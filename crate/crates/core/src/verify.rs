//! Checks of the vanishing theorem and of the first-order identities used in
//! its proof, run on concrete symbols.
//!
//! For `L` of degree 1 the notation is `L_X = [L, X]`, `L_{X|Y} = [[L, X], Y]`
//! and `X^r·Y = (ad X)^r Y`. Every checker reads `L` through [`FirstOrder`], so
//! that corrupted data can be fed to it as a negative control.

use crate::cr_universal::build_universal_cr;
use crate::error::Result;
use crate::exact_arith::{GaussianRational, Rational, SparseMatrix};
use crate::free_lie::AlgebraElement;
use crate::prolongation::{
    determined_by_degree_one, grading_derivation, prolong_until_zero, DegreeShiftMap,
    ProlongationResult, Tower,
};
use crate::symbol::{build_symbol, CRSymbol};

type G = GaussianRational;

/// Access to a degree-1 map through the two derived quantities the identities
/// use.
pub trait FirstOrder {
    /// `L(X)` for `X` with no degree-1 component.
    fn value(&self, x: &AlgebraElement) -> AlgebraElement;
    /// `L_{X|Y}`.
    fn double(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement;
}

/// An element of `ĝ¹`, evaluated through the lower levels of the tower.
pub struct Genuine<'a> {
    tower: Tower<'a>,
    map: &'a DegreeShiftMap,
}

impl<'a> Genuine<'a> {
    /// `result` must contain level 0.
    pub fn new(symbol: &'a CRSymbol, result: &'a ProlongationResult, map: &'a DegreeShiftMap) -> Self {
        Genuine {
            tower: Tower::new(symbol, &result.levels[..1]),
            map,
        }
    }
}

fn element_at(s: &CRSymbol, d: usize, coords: &[(usize, G)]) -> AlgebraElement {
    let start = s.algebra().range(d).start;
    coords.iter().map(|(k, c)| (start + k, c.clone())).collect()
}

impl FirstOrder for Genuine<'_> {
    fn value(&self, x: &AlgebraElement) -> AlgebraElement {
        let s = self.tower.symbol();
        let m = s.algebra();
        let mut out = AlgebraElement::zero();
        for d in 2..=m.depth() {
            let comp = m.component(x, d);
            if !comp.is_zero() {
                out = out.add(&element_at(s, d - 1, &self.tower.apply(self.map, &comp)));
            }
        }
        out
    }

    fn double(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let s = self.tower.symbol();
        let m = s.algebra();
        let mut out = AlgebraElement::zero();
        for d in 1..=m.depth() {
            let xd = m.component(x, d);
            if xd.is_zero() {
                continue;
            }
            let lx = self.tower.apply(self.map, &xd);
            for e in 1..=m.depth() + 1 - d {
                let ye = m.component(y, e);
                if ye.is_zero() {
                    continue;
                }
                let v = self.tower.act_element(1 - d as i64, &lx, &ye);
                out = out.add(&element_at(s, d + e - 1, &v));
            }
        }
        out
    }
}

/// `inner` with `L_{e_a|e_b}` shifted by `delta` (extended bilinearly).
pub struct Perturbed<'a> {
    pub inner: &'a dyn FirstOrder,
    pub a: usize,
    pub b: usize,
    pub delta: AlgebraElement,
}

impl FirstOrder for Perturbed<'_> {
    fn value(&self, x: &AlgebraElement) -> AlgebraElement {
        self.inner.value(x)
    }

    fn double(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let c = &x.coeff(self.a) * &y.coeff(self.b);
        self.inner.double(x, y).add(&self.delta.scale(&c))
    }
}

/// Synthetic data with `L(X) = 0` and prescribed `L_{E|·}`-type values on
/// degree −1; everything else zero.
struct Prescribed {
    table: Vec<((usize, usize), AlgebraElement)>,
}

impl FirstOrder for Prescribed {
    fn value(&self, _x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::zero()
    }

    fn double(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for ((a, b), v) in &self.table {
            let c = &x.coeff(*a) * &y.coeff(*b);
            if !c.is_zero() {
                out = out.add(&v.scale(&c));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    /// Nothing to test (e.g. `𝔤¹ = 0`).
    Vacuous,
    Fail(String),
}

impl CheckStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Vacuous => "vacuous",
            CheckStatus::Fail(_) => "fail",
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, CheckStatus::Fail(_))
    }

    pub(crate) fn from_result(r: std::result::Result<(), String>) -> Self {
        match r {
            Ok(()) => CheckStatus::Pass,
            Err(w) => CheckStatus::Fail(w),
        }
    }

    /// Combines per-element outcomes: any failure wins, all vacuous stays
    /// vacuous.
    fn merge(items: impl IntoIterator<Item = CheckStatus>) -> Self {
        let mut out = CheckStatus::Vacuous;
        for s in items {
            match s {
                CheckStatus::Fail(_) => return s,
                CheckStatus::Pass => out = CheckStatus::Pass,
                CheckStatus::Vacuous => {}
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremStatus {
    Pass,
    Fail,
    /// Depth below 4.
    OutsideHypotheses,
}

impl TheoremStatus {
    pub fn label(&self) -> &'static str {
        match self {
            TheoremStatus::Pass => "pass",
            TheoremStatus::Fail => "fail",
            TheoremStatus::OutsideHypotheses => "outside_hypotheses",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub n: usize,
    pub mu: usize,
    pub ideal: Vec<String>,
    pub m_dims: Vec<usize>,
    pub complex_dims: Vec<usize>,
    pub real_dims: Vec<usize>,
    pub stabilized_at: Option<usize>,
    pub theorem_status: TheoremStatus,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn g1_real_dim(&self) -> usize {
        self.real_dims.get(1).copied().unwrap_or(0)
    }

    pub fn all_pass(&self) -> bool {
        !self.checks.iter().any(|c| c.status.is_fail())
    }

    pub fn check(&self, name: &str) -> Option<&CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.status)
    }
}

fn ad_pow(s: &CRSymbol, e: &AlgebraElement, r: usize, w: &AlgebraElement) -> AlgebraElement {
    let mut x = w.clone();
    for _ in 0..r {
        if x.is_zero() {
            break;
        }
        x = s.bracket(e, &x);
    }
    x
}

fn int(k: i64) -> G {
    G::from_int(k)
}

fn holomorphic(s: &CRSymbol) -> Vec<AlgebraElement> {
    (0..s.n()).map(AlgebraElement::basis).collect()
}

fn antiholomorphic(s: &CRSymbol) -> Vec<AlgebraElement> {
    (s.n()..2 * s.n()).map(AlgebraElement::basis).collect()
}

/// `L_{E^r·W}` against the expansion through `L_{E|W}`, `L_{W|E}` and
/// `L_{E|E}`; `r = 1` is the plain Jacobi form.
pub fn check_bracket_identities(
    s: &CRSymbol,
    l: &dyn FirstOrder,
    e: &AlgebraElement,
    w: &AlgebraElement,
    r: usize,
) -> CheckStatus {
    assert!(r >= 1);
    let lhs = l.value(&ad_pow(s, e, r, w));
    let lew = l.double(e, w);
    let lwe = l.double(w, e);
    let rhs = if r == 1 {
        lew.sub(&lwe)
    } else {
        let first = ad_pow(s, e, r - 1, &lew.scale(&int(r as i64)).sub(&lwe));
        let lee = l.double(e, e);
        let second = ad_pow(s, e, r - 2, &s.bracket(&lee, w));
        first.add(&second.scale(&int((r * (r - 1) / 2) as i64)))
    };
    if lhs == rhs {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail(format!(
            "E = {}, W = {}, r = {r}: lhs {} != rhs {}",
            s.format_element(e),
            s.format_element(w),
            s.format_element(&lhs),
            s.format_element(&rhs)
        ))
    }
}

/// All holomorphic basis vectors `E`, all basis vectors `W`, `1 ≤ r ≤ μ+1`.
pub fn check_bracket_identities_all(s: &CRSymbol, l: &dyn FirstOrder) -> CheckStatus {
    let total = s.algebra().total_dim();
    for e in holomorphic(s) {
        for w in 0..total {
            for r in 1..=s.mu() + 1 {
                let st = check_bracket_identities(s, l, &e, &AlgebraElement::basis(w), r);
                if st.is_fail() {
                    return st;
                }
            }
        }
    }
    CheckStatus::Pass
}

/// `L_{E|E} = λ^{(E)} E` on the holomorphic basis and
/// `L_{E|E'} = ½α(E')E + ½α(E)E'` on all pairs. Returns `α` on success.
pub fn check_lemma_quadratic(s: &CRSymbol, l: &dyn FirstOrder) -> (CheckStatus, Option<Vec<G>>) {
    let hol = holomorphic(s);
    let mut alpha = Vec::with_capacity(hol.len());
    for (i, e) in hol.iter().enumerate() {
        let v = l.double(e, e);
        let lambda = v.coeff(i);
        if v != e.scale(&lambda) {
            return (
                CheckStatus::Fail(format!(
                    "L_{{E|E}} = {} is not a multiple of E = {}",
                    s.format_element(&v),
                    s.format_element(e)
                )),
                None,
            );
        }
        alpha.push(lambda);
    }
    let half = G::real(Rational::new(1, 2));
    for (i, e) in hol.iter().enumerate() {
        for (j, f) in hol.iter().enumerate() {
            let lhs = l.double(e, f);
            let rhs = e
                .scale(&(&half * &alpha[j]))
                .add(&f.scale(&(&half * &alpha[i])));
            if lhs != rhs {
                return (
                    CheckStatus::Fail(format!(
                        "E = {}, E' = {}: L_{{E|E'}} = {} but expected {}",
                        s.format_element(e),
                        s.format_element(f),
                        s.format_element(&lhs),
                        s.format_element(&rhs)
                    )),
                    None,
                );
            }
        }
    }
    (CheckStatus::Pass, Some(alpha))
}

/// The two admissible eigenvalues `−α(E)(μ−1)/2` and `−α(E)(μ−2)/2`.
pub fn candidate_eigenvalues(mu: usize, alpha_e: &G) -> [G; 2] {
    let c = |k: i64| -(alpha_e * &G::real(Rational::new(k, 2)));
    [c(mu as i64 - 1), c(mu as i64 - 2)]
}

/// Matrix of `ad_{L_E}` on `𝔪^{01}` in the basis `F1..Fn`, or a witness if
/// some image leaves `𝔪^{01}`.
fn ad_le_on_antiholomorphic(
    s: &CRSymbol,
    l: &dyn FirstOrder,
    e: &AlgebraElement,
) -> std::result::Result<SparseMatrix, String> {
    let n = s.n();
    let mut entries = Vec::new();
    for (k, f) in antiholomorphic(s).iter().enumerate() {
        let v = l.double(e, f);
        for (idx, c) in v.iter() {
            if !(n..2 * n).contains(&idx) {
                return Err(format!(
                    "L_{{E|F}} = {} leaves the antiholomorphic part (E = {}, F = {})",
                    s.format_element(&v),
                    s.format_element(e),
                    s.format_element(f)
                ));
            }
            entries.push((idx - n, k, c.clone()));
        }
    }
    SparseMatrix::from_triplets(n, n, entries).map_err(|e| e.to_string())
}

fn shifted(a: &SparseMatrix, c: &G) -> SparseMatrix {
    let n = a.rows();
    let mut d = vec![vec![G::zero(); n]; n];
    for (r, col, v) in a.entries() {
        d[r][col] = v.clone();
    }
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = &row[i] - c;
    }
    SparseMatrix::from_dense(&d)
}

/// `ad_{L_E}` restricted to `𝔪^{01}` is diagonalisable with eigenvalues among
/// the two candidates, and vanishes when `α(E) = 0`. Returns the eigenvalues
/// that occur.
pub fn check_eigenstructure(
    s: &CRSymbol,
    l: &dyn FirstOrder,
    e: &AlgebraElement,
    alpha_e: &G,
) -> (CheckStatus, Vec<G>) {
    let a = match ad_le_on_antiholomorphic(s, l, e) {
        Ok(a) => a,
        Err(w) => return (CheckStatus::Fail(w), Vec::new()),
    };
    let n = s.n();
    if alpha_e.is_zero() {
        if a.nnz() == 0 {
            return (CheckStatus::Pass, vec![G::zero()]);
        }
        return (
            CheckStatus::Fail(format!(
                "α(E) = 0 but ad L_E is nonzero on the antiholomorphic part (E = {})",
                s.format_element(e)
            )),
            Vec::new(),
        );
    }
    let [c1, c2] = candidate_eigenvalues(s.mu(), alpha_e);
    let product = shifted(&a, &c1).mul(&shifted(&a, &c2));
    let eigen: Vec<G> = [c1.clone(), c2.clone()]
        .into_iter()
        .filter(|c| shifted(&a, c).rank() < n)
        .collect();
    if product.nnz() != 0 {
        return (
            CheckStatus::Fail(format!(
                "(A - ({c1}))(A - ({c2})) != 0 for A = ad L_E on the antiholomorphic part, E = {}",
                s.format_element(e)
            )),
            eigen,
        );
    }
    (CheckStatus::Pass, eigen)
}

/// `L_{E^r·(Ē·(E·Ē))} = r(4ρ+r+1)/2 · E^{r−1}·(Ē·(E·Ē)) + (2ρ+1) · E^{r+1}·Ē`
/// for `0 ≤ r ≤ μ+1`, under the normalisation `L_{E|E} = E`,
/// `L_{Ē|Ē} = Ē`, `L_{E|Ē} = ρĒ`, `L_{Ē|E} = ρE` with `ρ` real. Vacuous
/// when the normalisation does not hold.
pub fn check_claim_identity(s: &CRSymbol, l: &dyn FirstOrder, e: &AlgebraElement) -> CheckStatus {
    let eb = s.conjugate(e);
    if l.double(e, e) != *e || l.double(&eb, &eb) != eb {
        return CheckStatus::Vacuous;
    }
    let leb = l.double(e, &eb);
    let Some(rho) = proportionality(&leb, &eb) else {
        return CheckStatus::Vacuous;
    };
    if !rho.is_real() || l.double(&eb, e) != e.scale(&rho) {
        return CheckStatus::Vacuous;
    }
    let core = s.bracket(&eb, &s.bracket(e, &eb));
    for r in 0..=s.mu() + 1 {
        let lhs = l.value(&ad_pow(s, e, r, &core));
        let ri = r as i64;
        let coeff_a = &(&(&int(4) * &rho) + &int(ri + 1)) * &G::real(Rational::new(ri, 2));
        let coeff_b = &(&int(2) * &rho) + &int(1);
        let mut rhs = ad_pow(s, e, r + 1, &eb).scale(&coeff_b);
        if r >= 1 {
            rhs = rhs.add(&ad_pow(s, e, r - 1, &core).scale(&coeff_a));
        }
        if lhs != rhs {
            return CheckStatus::Fail(format!(
                "r = {r}, ρ = {rho}, E = {}: lhs {} != rhs {}",
                s.format_element(e),
                s.format_element(&lhs),
                s.format_element(&rhs)
            ));
        }
    }
    CheckStatus::Pass
}

/// `c` with `x = c·y`, for nonzero `y`.
fn proportionality(x: &AlgebraElement, y: &AlgebraElement) -> Option<G> {
    let (k, c) = y.iter().next()?;
    let ratio = &x.coeff(k) / c;
    (*x == y.scale(&ratio)).then_some(ratio)
}

/// Candidate normalised `E` for the claim: conjugates of eigenvectors of
/// `ad_{L_{E₀}}` on `𝔪^{01}`, rescaled so that `α(E) = 1`.
fn claim_directions(s: &CRSymbol, l: &dyn FirstOrder, alpha: &[G]) -> Vec<AlgebraElement> {
    let n = s.n();
    let Some(i0) = alpha.iter().position(|a| !a.is_zero()) else {
        return Vec::new();
    };
    let e0 = AlgebraElement::basis(i0);
    let Ok(a) = ad_le_on_antiholomorphic(s, l, &e0) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for c in candidate_eigenvalues(s.mu(), &alpha[i0]) {
        for v in shifted(&a, &c).kernel_basis() {
            let fbar: AlgebraElement = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (n + k, x.clone()))
                .collect();
            let e = s.conjugate(&fbar);
            let ae = e
                .iter()
                .fold(G::zero(), |acc, (k, x)| &acc + &(x * &alpha[k]));
            if !ae.is_zero() {
                out.push(e.scale(&ae.inv()));
            }
        }
    }
    out
}

/// All first-order checks on one element.
pub struct ElementChecks {
    pub bracket_identities: CheckStatus,
    pub quadratic: CheckStatus,
    pub eigenstructure: CheckStatus,
    pub claim: CheckStatus,
}

pub fn check_element(s: &CRSymbol, l: &dyn FirstOrder) -> ElementChecks {
    let bracket_identities = check_bracket_identities_all(s, l);
    let (quadratic, alpha) = check_lemma_quadratic(s, l);
    let (eigenstructure, claim) = match alpha {
        None => (CheckStatus::Fail("no α: quadratic lemma failed".into()), CheckStatus::Vacuous),
        Some(alpha) => {
            let eig = CheckStatus::merge(
                holomorphic(s)
                    .iter()
                    .zip(&alpha)
                    .map(|(e, a)| check_eigenstructure(s, l, e, a).0),
            );
            let claim = CheckStatus::merge(
                claim_directions(s, l, &alpha)
                    .iter()
                    .map(|e| check_claim_identity(s, l, e)),
            );
            (eig, claim)
        }
    };
    ElementChecks {
        bracket_identities,
        quadratic,
        eigenstructure,
        claim,
    }
}

/// Runs each checker on deliberately wrong data; the control passes when the
/// checker fails.
pub fn negative_controls(s: &CRSymbol, base: &dyn FirstOrder) -> Vec<Check> {
    let n = s.n();
    let e1 = AlgebraElement::basis(0);
    let f1 = AlgebraElement::basis(n);
    let control = |name: &str, caught: bool, what: &str| Check {
        name: format!("negative_control.{name}"),
        status: if caught {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail(format!("checker accepted {what}"))
        },
    };
    let mut out = Vec::new();

    let bad = Perturbed { inner: base, a: 0, b: n, delta: f1.clone() };
    out.push(control(
        "bracket_identities",
        check_bracket_identities(s, &bad, &e1, &f1, 1).is_fail(),
        "L_{E1|F1} shifted by F1",
    ));

    let bad = Perturbed { inner: base, a: 0, b: 0, delta: f1.clone() };
    out.push(control(
        "quadratic",
        check_lemma_quadratic(s, &bad).0.is_fail(),
        "L_{E1|E1} shifted by F1",
    ));

    let alpha_e1 = match check_lemma_quadratic(s, base) {
        (_, Some(a)) => a[0].clone(),
        _ => G::zero(),
    };
    // a shift that moves an eigenvalue off both candidates
    let [c1, c2] = candidate_eigenvalues(s.mu(), &alpha_e1);
    let mut kappa = G::real(Rational::new(7, 11));
    while [&c1, &c2].iter().any(|c| {
        let d = *c + &kappa;
        d == c1 || d == c2
    }) {
        kappa = &kappa + &G::one();
    }
    let bad = Perturbed { inner: base, a: 0, b: n, delta: f1.scale(&kappa) };
    out.push(control(
        "eigenstructure",
        check_eigenstructure(s, &bad, &e1, &alpha_e1).0.is_fail(),
        "L_{E1|F1} shifted off the admissible eigenvalues",
    ));

    // normalised data with L(X) = 0 and 2ρ+1 ≠ 0 cannot satisfy the claim
    let [r1, r2] = candidate_eigenvalues(s.mu(), &G::one());
    let rho = if (&(&int(2) * &r1) + &int(1)).is_zero() { r2 } else { r1 };
    let synthetic = Prescribed {
        table: vec![
            ((0, 0), e1.clone()),
            ((n, n), f1.clone()),
            ((0, n), f1.scale(&rho)),
            ((n, 0), e1.scale(&rho)),
        ],
    };
    out.push(control(
        "claim",
        check_claim_identity(s, &synthetic, &e1).is_fail(),
        "normalised data with vanishing values",
    ));
    out
}

/// The zero map, for instances without first-order elements.
struct Zero;

impl FirstOrder for Zero {
    fn value(&self, _x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::zero()
    }
    fn double(&self, _x: &AlgebraElement, _y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::zero()
    }
}

fn check(name: &str, status: CheckStatus) -> Check {
    Check {
        name: name.to_string(),
        status,
    }
}

fn bool_check(name: &str, ok: bool, witness: &str) -> Check {
    check(
        name,
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail(witness.to_string())
        },
    )
}

/// Builds the symbol, prolongs it and runs every check.
pub fn verify_main_theorem(
    n: usize,
    mu: usize,
    ideal: &[String],
    max_level: usize,
    basis_cap: usize,
) -> Result<VerificationReport> {
    let universal = build_universal_cr(n, mu, basis_cap)?;
    let symbol = build_symbol(universal, ideal)?;
    let result = prolong_until_zero(&symbol, max_level)?;
    Ok(verify_symbol(&symbol, &result))
}

/// Checks on an already built symbol and its prolongation.
pub fn verify_symbol(s: &CRSymbol, result: &ProlongationResult) -> VerificationReport {
    let n = s.n();
    let mu = s.mu();
    let m = s.algebra();
    let mut checks = vec![
        bool_check("symbol.fundamental", s.check_fundamental(), "not generated in degree -1"),
        bool_check("symbol.integrable", s.check_integrability(), "[m10, m10] != 0"),
        bool_check(
            "symbol.totally_nondegenerate",
            s.check_totally_nondegenerate(),
            "intermediate degrees differ from the universal algebra",
        ),
        check(
            "symbol.jacobi",
            CheckStatus::from_result(m.check_antisymmetry().and_then(|_| m.check_jacobi())),
        ),
        check(
            "universal.ideal_bases",
            CheckStatus::from_result(s.universal().check_ideal_bases()),
        ),
    ];

    let defg1 = result.levels.iter().enumerate().try_for_each(|(l, level)| {
        let tower = Tower::new(s, &result.levels[..l]);
        for (k, x) in level.basis().iter().chain(level.real_basis()).enumerate() {
            if let Some((y, z, r)) = tower.first_violation(x) {
                return Err(format!(
                    "level {l} map {k}: Y = {}, Z = {}, residual {}",
                    m.label(y),
                    m.label(z),
                    tower.format_value(l as i64 - (m.degree_of(y) + m.degree_of(z)) as i64, &r)
                ));
            }
        }
        Ok(())
    });
    checks.push(check("prolongation.defg1", CheckStatus::from_result(defg1)));
    checks.push(bool_check(
        "prolongation.determined_by_degree_one",
        result.levels.iter().all(|lv| determined_by_degree_one(s, lv)),
        "two basis maps agree on degree -1",
    ));
    let reality = result.levels.iter().enumerate().all(|(l, level)| {
        let tower = Tower::new(s, &result.levels[..l]);
        level.real_basis().iter().all(|x| &tower.conjugate_map(x) == x)
    });
    checks.push(bool_check("prolongation.reality", reality, "real basis map not fixed by conjugation"));
    checks.push(check(
        "prolongation.zero_persists",
        match result.zero_recheck {
            Some(true) => CheckStatus::Pass,
            Some(false) => CheckStatus::Fail("level after the first zero level is nonzero".into()),
            None => CheckStatus::Vacuous,
        },
    ));
    let g0 = &result.levels[0];
    checks.push(bool_check(
        "g0.grading_derivation",
        g0.coordinates(&grading_derivation(s)).is_some(),
        "grading derivation missing from g0",
    ));
    checks.push(bool_check(
        "g0.dimension_bound",
        g0.real_dim() <= 2 * n * n,
        &format!("dim g0 = {} > 2n^2", g0.real_dim()),
    ));

    let g1 = result.levels.get(1).map(|l| l.real_dim()).unwrap_or(0);
    let theorem_status = if mu < 4 {
        TheoremStatus::OutsideHypotheses
    } else if g1 == 0 {
        TheoremStatus::Pass
    } else {
        TheoremStatus::Fail
    };
    if mu >= 4 {
        checks.push(bool_check(
            "theorem.g1_vanishes",
            g1 == 0,
            &format!("IMPLEMENTATION ERROR: dim g1 = {g1} for depth {mu}"),
        ));
    }
    if n == 1 && mu == 2 && s.lowest_ideal().is_empty() {
        checks.push(bool_check("control.heisenberg_g1_nonzero", g1 > 0, "dim g1 = 0"));
    }

    // first-order identities
    let (complex, real): (Vec<&DegreeShiftMap>, Vec<&DegreeShiftMap>) = match result.levels.get(1) {
        Some(l1) => (l1.basis().iter().collect(), l1.real_basis().iter().collect()),
        None => (Vec::new(), Vec::new()),
    };
    let bracket = CheckStatus::merge(
        complex
            .iter()
            .chain(&real)
            .map(|x| check_bracket_identities_all(s, &Genuine::new(s, result, x))),
    );
    checks.push(check("lemma.bracket_identities", bracket));
    let per_real: Vec<ElementChecks> = real
        .iter()
        .map(|x| check_element(s, &Genuine::new(s, result, x)))
        .collect();
    checks.push(check(
        "lemma.quadratic",
        CheckStatus::merge(per_real.iter().map(|c| c.quadratic.clone())),
    ));
    checks.push(check(
        "lemma.eigenstructure",
        CheckStatus::merge(per_real.iter().map(|c| c.eigenstructure.clone())),
    ));
    checks.push(check(
        "lemma.claim",
        CheckStatus::merge(per_real.iter().map(|c| c.claim.clone())),
    ));

    let base: Box<dyn FirstOrder + '_> = match real.first() {
        Some(x) => Box::new(Genuine::new(s, result, x)),
        None => Box::new(Zero),
    };
    checks.extend(negative_controls(s, base.as_ref()));

    VerificationReport {
        n,
        mu,
        ideal: s.ideal_text().to_vec(),
        m_dims: s.dims(),
        complex_dims: result.complex_dims(),
        real_dims: result.real_dims(),
        stabilized_at: result.stabilized_at,
        theorem_status,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_lie::DEFAULT_BASIS_CAP;

    fn run(n: usize, mu: usize) -> VerificationReport {
        verify_main_theorem(n, mu, &[], 4, DEFAULT_BASIS_CAP).unwrap()
    }

    #[test]
    fn heisenberg_report() {
        let r = run(1, 2);
        for c in &r.checks {
            assert!(!c.status.is_fail(), "{}: {:?}", c.name, c.status);
        }
        assert_eq!(r.real_dims, vec![2, 2, 1, 0]);
        assert_eq!(r.theorem_status, TheoremStatus::OutsideHypotheses);
        assert_eq!(r.check("lemma.bracket_identities"), Some(&CheckStatus::Pass));
        assert_eq!(r.check("lemma.claim"), Some(&CheckStatus::Pass));
    }

    #[test]
    fn depth_four_report() {
        let r = run(1, 4);
        assert!(r.all_pass(), "{:?}", r.checks);
        assert_eq!(r.theorem_status, TheoremStatus::Pass);
        assert_eq!(r.check("lemma.quadratic"), Some(&CheckStatus::Vacuous));
        assert_eq!(r.check("negative_control.claim"), Some(&CheckStatus::Pass));
    }

    #[test]
    fn candidates_for_depth_four() {
        let [a, b] = candidate_eigenvalues(4, &G::one());
        assert_eq!(a, G::real(Rational::new(-3, 2)));
        assert_eq!(b, G::from_int(-1));
    }
}
