//! Tanaka prolongation of a CR symbol.
//!
//! Level `ℓ` consists of degree-`ℓ` maps `X` sending `𝔪^{−p}` into
//! `g̃^{ℓ−p}`, where `g̃^t = 𝔪^t` for `t ≤ −1` and `g̃^t` is the level-`t`
//! space already computed for `t ≥ 0`, subject to
//! `[X(Y), Z] + [Y, X(Z)] = X([Y, Z])`. Brackets with an element `A` of a
//! non-negative level act through the stored map: `[A, Z] = A(Z)`.
//!
//! Values in `g̃^t` are sparse coordinate vectors, in the local basis of
//! `𝔪^{t}` for negative `t` and in the stored level basis otherwise.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact_arith::{
    dense_to_sparse, rank_of, solve_semilinear_fixed_points, AntilinearInvolution, Echelon,
    GaussianRational, SparseMatrix, SparseVec,
};
use crate::free_lie::{format_terms, AlgebraElement, GradedAlgebra};
use crate::symbol::CRSymbol;

/// A map of degree `shift`; `images[w]` are the coordinates of the image of
/// basis vector `w` of `𝔪^ℂ`, in `g̃^{shift − deg w}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeShiftMap {
    shift: usize,
    images: Vec<SparseVec>,
}

impl DegreeShiftMap {
    pub fn zero(shift: usize, basis_len: usize) -> Self {
        DegreeShiftMap {
            shift,
            images: vec![Vec::new(); basis_len],
        }
    }

    pub fn new(shift: usize, images: Vec<SparseVec>) -> Self {
        DegreeShiftMap { shift, images }
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn image(&self, w: usize) -> &SparseVec {
        &self.images[w]
    }

    pub fn images(&self) -> &[SparseVec] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Vec::is_empty)
    }

    pub fn scale(&self, c: &GaussianRational) -> DegreeShiftMap {
        DegreeShiftMap {
            shift: self.shift,
            images: self
                .images
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|(k, x)| (*k, x * c))
                        .filter(|(_, x)| !x.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &DegreeShiftMap) -> DegreeShiftMap {
        assert_eq!(self.shift, other.shift);
        DegreeShiftMap {
            shift: self.shift,
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| add_sparse(a, b, &GaussianRational::one()))
                .collect(),
        }
    }

    /// Replaces the image of every basis vector.
    pub fn with_image(mut self, w: usize, v: SparseVec) -> DegreeShiftMap {
        self.images[w] = v;
        self
    }
}

/// `a + c·b` on sparse vectors.
pub fn add_sparse(a: &SparseVec, b: &SparseVec, c: &GaussianRational) -> SparseVec {
    let mut acc: BTreeMap<usize, GaussianRational> = a.iter().cloned().collect();
    for (k, x) in b {
        *acc.entry(*k).or_default() += &(c * x);
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// One computed level `ĝ^ℓ` with its complex basis, the antilinear involution
/// induced by conjugation, and a real basis of its fixed points.
#[derive(Clone, Debug)]
pub struct Level {
    shift: usize,
    basis: Vec<DegreeShiftMap>,
    readout: Vec<(usize, GaussianRational)>,
    offsets: Vec<usize>,
    involution: AntilinearInvolution,
    real_basis: Vec<DegreeShiftMap>,
    used_all_pairs: bool,
}

impl Level {
    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn complex_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn real_dim(&self) -> usize {
        self.real_basis.len()
    }

    pub fn basis(&self) -> &[DegreeShiftMap] {
        &self.basis
    }

    pub fn real_basis(&self) -> &[DegreeShiftMap] {
        &self.real_basis
    }

    pub fn involution(&self) -> &AntilinearInvolution {
        &self.involution
    }

    /// Whether the degree −1 constraint rows missed something and the full
    /// all-pairs system had to be solved.
    pub fn used_all_pairs(&self) -> bool {
        self.used_all_pairs
    }

    fn flatten(&self, x: &DegreeShiftMap) -> SparseVec {
        flatten(&self.offsets, x)
    }

    /// Coordinates of a map of this level in the stored basis, or `None` if
    /// it does not lie in the span.
    pub fn coordinates(&self, x: &DegreeShiftMap) -> Option<Vec<GaussianRational>> {
        let flat = self.flatten(x);
        let dense = to_dense(&flat, *self.offsets.last().unwrap());
        let coords: Vec<GaussianRational> = self
            .readout
            .iter()
            .map(|(f, s)| &dense[*f] / s)
            .collect();
        let back = self.combine(&coords);
        (back == *x).then_some(coords)
    }

    /// `Σ c_k · basis_k`
    pub fn combine(&self, coords: &[GaussianRational]) -> DegreeShiftMap {
        let mut out = DegreeShiftMap::zero(self.shift, self.offsets.len() - 1);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c));
            }
        }
        out
    }
}

fn flatten(offsets: &[usize], x: &DegreeShiftMap) -> SparseVec {
    x.images
        .iter()
        .enumerate()
        .flat_map(|(w, v)| v.iter().map(move |(k, c)| (offsets[w] + k, c.clone())))
        .collect()
}

fn to_dense(v: &SparseVec, n: usize) -> Vec<GaussianRational> {
    let mut d = vec![GaussianRational::zero(); n];
    for (k, c) in v {
        d[*k] = c.clone();
    }
    d
}

/// The symbol together with the levels computed so far; evaluates brackets
/// between `𝔪` and `g̃^t`.
pub struct Tower<'a> {
    symbol: &'a CRSymbol,
    levels: &'a [Level],
}

impl<'a> Tower<'a> {
    pub fn new(symbol: &'a CRSymbol, levels: &'a [Level]) -> Self {
        Tower { symbol, levels }
    }

    pub fn symbol(&self) -> &CRSymbol {
        self.symbol
    }

    pub fn levels(&self) -> &[Level] {
        self.levels
    }

    fn m(&self) -> &GradedAlgebra {
        self.symbol.algebra()
    }

    /// Dimension of `g̃^t`; zero below `−μ`.
    pub fn dim(&self, t: i64) -> usize {
        if t < 0 {
            self.m().dim((-t) as usize)
        } else {
            self.levels[t as usize].complex_dim()
        }
    }

    /// `[b_c, e_w]` for the `c`-th basis vector `b_c` of `g̃^t`, as coordinates
    /// in `g̃^{t − deg w}`.
    pub fn act_basis(&self, t: i64, c: usize, w: usize) -> SparseVec {
        if t < 0 {
            let m = self.m();
            let d = (-t) as usize;
            let g = m.range(d).start + c;
            match m.bracket_basis(g, w) {
                Some(v) => m.local_sparse(v, d + m.degree_of(w)),
                None => Vec::new(),
            }
        } else {
            self.levels[t as usize].basis[c].images[w].clone()
        }
    }

    /// `[v, e_w]` for `v ∈ g̃^t`.
    pub fn act(&self, t: i64, v: &SparseVec, w: usize) -> SparseVec {
        let mut acc: BTreeMap<usize, GaussianRational> = BTreeMap::new();
        for (c, x) in v {
            for (k, a) in self.act_basis(t, *c, w) {
                *acc.entry(k).or_default() += &(x * &a);
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    /// `[v, y]` for `v ∈ g̃^t` and an arbitrary homogeneous `y ∈ 𝔪`.
    pub fn act_element(&self, t: i64, v: &SparseVec, y: &AlgebraElement) -> SparseVec {
        let mut out = Vec::new();
        for (w, c) in y.iter() {
            out = add_sparse(&out, &self.act(t, v, w), c);
        }
        out
    }

    /// Conjugate of a value in `g̃^t`.
    pub fn conj_value(&self, t: i64, v: &SparseVec) -> SparseVec {
        let n = self.dim(t);
        let dense = to_dense(v, n);
        let image = if t < 0 {
            self.symbol.conj_involution((-t) as usize).apply(&dense)
        } else {
            self.levels[t as usize].involution.apply(&dense)
        };
        dense_to_sparse(&image)
    }

    /// `X(y)` for a homogeneous `y ∈ 𝔪`.
    pub fn apply(&self, x: &DegreeShiftMap, y: &AlgebraElement) -> SparseVec {
        let mut out = Vec::new();
        for (w, c) in y.iter() {
            out = add_sparse(&out, &x.images[w], c);
        }
        out
    }

    /// `[X(e_y), e_z] + [e_y, X(e_z)] − X([e_y, e_z])` in `g̃^{ℓ − deg y − deg z}`.
    pub fn residual(&self, x: &DegreeShiftMap, y: usize, z: usize) -> SparseVec {
        let m = self.m();
        let l = x.shift as i64;
        let (dy, dz) = (m.degree_of(y) as i64, m.degree_of(z) as i64);
        if l - dy - dz < -(m.depth() as i64) {
            return Vec::new();
        }
        let first = self.act(l - dy, &x.images[y], z);
        let second = self.act(l - dz, &x.images[z], y);
        let mut r = add_sparse(&first, &second, &GaussianRational::from_int(-1));
        if let Some(br) = m.bracket_basis(y, z) {
            r = add_sparse(&r, &self.apply(x, br), &GaussianRational::from_int(-1));
        }
        r
    }

    /// First pair `(y, z)`, `y < z`, on which the defining identity fails,
    /// with the nonzero residual.
    pub fn first_violation(&self, x: &DegreeShiftMap) -> Option<(usize, usize, SparseVec)> {
        let n = self.m().total_dim();
        for y in 0..n {
            for z in y + 1..n {
                let r = self.residual(x, y, z);
                if !r.is_empty() {
                    return Some((y, z, r));
                }
            }
        }
        None
    }

    /// The conjugated map `W ↦ conj(X(conj W))`.
    pub fn conjugate_map(&self, x: &DegreeShiftMap) -> DegreeShiftMap {
        let m = self.m();
        let l = x.shift as i64;
        let images = (0..m.total_dim())
            .map(|w| {
                let cw = self.symbol.conjugate(&AlgebraElement::basis(w));
                let v = self.apply(x, &cw);
                self.conj_value(l - m.degree_of(w) as i64, &v)
            })
            .collect();
        DegreeShiftMap {
            shift: x.shift,
            images,
        }
    }

    /// Text form of a value in `g̃^t`.
    pub fn format_value(&self, t: i64, v: &SparseVec) -> String {
        if t < 0 {
            let m = self.m();
            let start = m.range((-t) as usize).start;
            let x: AlgebraElement = v.iter().map(|(k, c)| (start + k, c.clone())).collect();
            m.format_element(&x)
        } else {
            format_terms(v.iter().map(|(k, c)| (c.clone(), format!("g{t}_{}", k + 1))))
        }
    }

    fn offsets(&self, shift: usize) -> Vec<usize> {
        let m = self.m();
        let mut offsets = vec![0];
        for w in 0..m.total_dim() {
            let t = shift as i64 - m.degree_of(w) as i64;
            offsets.push(offsets.last().unwrap() + self.dim(t));
        }
        offsets
    }

    /// Constraint rows of the pair `(y, z)` over the flattened unknowns.
    fn constraint_rows(&self, shift: usize, offsets: &[usize], y: usize, z: usize) -> Vec<SparseVec> {
        let m = self.m();
        let l = shift as i64;
        let (dy, dz) = (m.degree_of(y) as i64, m.degree_of(z) as i64);
        if l - dy - dz < -(m.depth() as i64) {
            return Vec::new();
        }
        let mut rows: BTreeMap<usize, BTreeMap<usize, GaussianRational>> = BTreeMap::new();
        let mut push = |target: usize, unknown: usize, c: GaussianRational| {
            *rows.entry(target).or_default().entry(unknown).or_default() += &c;
        };
        // [X(e_y), e_z]
        for c in 0..self.dim(l - dy) {
            for (k, a) in self.act_basis(l - dy, c, z) {
                push(k, offsets[y] + c, a);
            }
        }
        // [e_y, X(e_z)] = −[X(e_z), e_y]
        for c in 0..self.dim(l - dz) {
            for (k, a) in self.act_basis(l - dz, c, y) {
                push(k, offsets[z] + c, -a);
            }
        }
        // −X([e_y, e_z])
        if let Some(br) = m.bracket_basis(y, z) {
            for (w, a) in br.iter() {
                for c in 0..offsets[w + 1] - offsets[w] {
                    push(c, offsets[w] + c, -a);
                }
            }
        }
        rows.into_values()
            .map(|r| r.into_iter().filter(|(_, x)| !x.is_zero()).collect::<SparseVec>())
            .filter(|r| !r.is_empty())
            .collect()
    }

    fn unflatten(&self, shift: usize, offsets: &[usize], x: &[GaussianRational]) -> DegreeShiftMap {
        let images = offsets
            .windows(2)
            .map(|w| dense_to_sparse(&x[w[0]..w[1]]))
            .collect();
        DegreeShiftMap { shift, images }
    }

    /// Solves for the next level on top of the stored ones. Level 0 also
    /// requires `𝔪^{10}` and `𝔪^{01}` to be preserved.
    pub fn compute_level(&self) -> Result<Level> {
        let shift = self.levels.len();
        let m = self.m();
        let n = self.symbol.n();
        let offsets = self.offsets(shift);
        let unknowns = *offsets.last().unwrap();
        let total = m.total_dim();
        let mut ech = Echelon::new(unknowns);
        if shift == 0 {
            for (g, off) in offsets.iter().enumerate().take(2 * n) {
                let forbidden = if g < n { n..2 * n } else { 0..n };
                for c in forbidden {
                    ech.insert(&[(off + c, GaussianRational::one())]);
                }
            }
        }
        for y in m.range(1) {
            for z in 0..total {
                if z != y {
                    for row in self.constraint_rows(shift, &offsets, y, z) {
                        ech.insert(&row);
                    }
                }
            }
        }
        let mut kernel = ech.kernel_with_free_columns();
        let mut used_all_pairs = false;
        let verified = kernel
            .iter()
            .all(|(_, v)| self.first_violation(&self.unflatten(shift, &offsets, v)).is_none());
        if !verified {
            used_all_pairs = true;
            for y in 0..total {
                for z in y + 1..total {
                    for row in self.constraint_rows(shift, &offsets, y, z) {
                        ech.insert(&row);
                    }
                }
            }
            kernel = ech.kernel_with_free_columns();
        }
        let readout = kernel.iter().map(|(f, v)| (*f, v[*f].clone())).collect();
        let basis: Vec<DegreeShiftMap> = kernel
            .iter()
            .map(|(_, v)| self.unflatten(shift, &offsets, v))
            .collect();
        let mut level = Level {
            shift,
            basis,
            readout,
            offsets,
            involution: AntilinearInvolution::conjugation(0),
            real_basis: Vec::new(),
            used_all_pairs,
        };
        let (inv, real) = reality_restrict(self, &level)?;
        level.involution = inv;
        level.real_basis = real;
        Ok(level)
    }
}

/// Fixed points of `X ↦ conj ∘ X ∘ conj` on a complex level, via
/// realification of its coordinate space.
pub fn reality_restrict(
    tower: &Tower<'_>,
    level: &Level,
) -> Result<(AntilinearInvolution, Vec<DegreeShiftMap>)> {
    let dim = level.complex_dim();
    let mut entries = Vec::new();
    for (k, x) in level.basis.iter().enumerate() {
        let tx = tower.conjugate_map(x);
        let coords = level.coordinates(&tx).ok_or_else(|| {
            Error::Internal(format!(
                "level {} is not stable under conjugation",
                level.shift
            ))
        })?;
        entries.extend(
            coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(r, c)| (r, k, c)),
        );
    }
    let t = SparseMatrix::from_triplets(dim, dim, entries)?;
    let inv = AntilinearInvolution::new(t)?;
    let fixed = solve_semilinear_fixed_points(&SparseMatrix::zero(0, dim), &inv)?;
    let real = fixed.iter().map(|c| level.combine(c)).collect();
    Ok((inv, real))
}

/// `(𝔤⁰)^ℂ` and its real form.
pub fn compute_g0(symbol: &CRSymbol) -> Result<Level> {
    Tower::new(symbol, &[]).compute_level()
}

/// `ĝ^ℓ` for `ℓ = lower.len()`.
pub fn compute_next_level(symbol: &CRSymbol, lower: &[Level]) -> Result<Level> {
    if lower.is_empty() {
        return Err(Error::InvalidInput("level 0 must be computed first".into()));
    }
    Tower::new(symbol, lower).compute_level()
}

#[derive(Clone, Debug)]
pub struct ProlongationResult {
    pub levels: Vec<Level>,
    /// First level whose real part is zero, if reached within the limit.
    pub stabilized_at: Option<usize>,
    /// Whether the level after the first zero one was recomputed and was zero.
    pub zero_recheck: Option<bool>,
}

impl ProlongationResult {
    pub fn complex_dims(&self) -> Vec<usize> {
        self.levels.iter().map(Level::complex_dim).collect()
    }

    pub fn real_dims(&self) -> Vec<usize> {
        self.levels.iter().map(Level::real_dim).collect()
    }

    pub fn g1_real_dim(&self) -> Option<usize> {
        self.levels.get(1).map(Level::real_dim)
    }
}

/// Computes levels `0, 1, …` until a level vanishes or `max_level` is passed.
/// After the first zero level one more level is computed as a check.
pub fn prolong_until_zero(symbol: &CRSymbol, max_level: usize) -> Result<ProlongationResult> {
    if max_level == 0 {
        return Err(Error::InvalidInput("max_level must be at least 1".into()));
    }
    let mut levels = vec![compute_g0(symbol)?];
    let mut stabilized_at = None;
    while levels.len() <= max_level {
        let next = compute_next_level(symbol, &levels)?;
        let zero = next.real_dim() == 0;
        levels.push(next);
        if zero {
            stabilized_at = Some(levels.len() - 1);
            break;
        }
    }
    let zero_recheck = match stabilized_at {
        Some(_) => Some(compute_next_level(symbol, &levels)?.complex_dim() == 0),
        None => None,
    };
    Ok(ProlongationResult {
        levels,
        stabilized_at,
        zero_recheck,
    })
}

/// Two maps of a level agreeing on `𝔪^{−1}` coincide: the restrictions of the
/// basis to degree −1 stay independent.
pub fn determined_by_degree_one(symbol: &CRSymbol, level: &Level) -> bool {
    let m = symbol.algebra();
    let g = m.range(1);
    let restricted: Vec<SparseVec> = level
        .basis
        .iter()
        .map(|x| {
            let mut offs = vec![0];
            for w in g.clone() {
                offs.push(offs.last().unwrap() + level.offsets[w + 1] - level.offsets[w]);
            }
            g.clone()
                .flat_map(|w| {
                    let o = offs[w - g.start];
                    x.images[w].iter().map(move |(k, c)| (o + k, c.clone()))
                })
                .collect()
        })
        .collect();
    let width = level.offsets[g.end] - level.offsets[g.start];
    rank_of(width, &restricted) == level.complex_dim()
}

/// The derivation multiplying `𝔪^{−k}` by `k`.
pub fn grading_derivation(symbol: &CRSymbol) -> DegreeShiftMap {
    let m = symbol.algebra();
    let images = (0..m.total_dim())
        .map(|w| {
            let d = m.degree_of(w);
            vec![(w - m.range(d).start, GaussianRational::from_int(d as i64))]
        })
        .collect();
    DegreeShiftMap::new(0, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cr_universal::build_universal_cr;
    use crate::free_lie::DEFAULT_BASIS_CAP;
    use crate::symbol::build_symbol;

    fn sym(n: usize, mu: usize) -> CRSymbol {
        build_symbol(build_universal_cr(n, mu, DEFAULT_BASIS_CAP).unwrap(), &[]).unwrap()
    }

    #[test]
    fn heisenberg_levels() {
        let s = sym(1, 2);
        let r = prolong_until_zero(&s, 4).unwrap();
        assert_eq!(r.real_dims(), vec![2, 2, 1, 0]);
        assert_eq!(r.complex_dims(), vec![2, 2, 1, 0]);
        assert_eq!(r.stabilized_at, Some(3));
        assert_eq!(r.zero_recheck, Some(true));
        let tower = Tower::new(&s, &r.levels);
        for (l, level) in r.levels.iter().enumerate() {
            let t = Tower::new(&s, &r.levels[..l]);
            for x in level.basis().iter().chain(level.real_basis()) {
                assert!(t.first_violation(x).is_none());
            }
            for x in level.real_basis() {
                assert_eq!(&t.conjugate_map(x), x);
            }
            assert!(determined_by_degree_one(&s, level));
        }
        let _ = tower;
    }

    #[test]
    fn g0_contains_grading() {
        for (n, mu) in [(1, 2), (1, 4)] {
            let s = sym(n, mu);
            let g0 = compute_g0(&s).unwrap();
            assert_eq!(g0.real_dim(), 2);
            assert!(g0.coordinates(&grading_derivation(&s)).is_some());
        }
    }

    #[test]
    fn depth_four_has_no_first_prolongation() {
        let s = sym(1, 4);
        let r = prolong_until_zero(&s, 4).unwrap();
        assert_eq!(r.real_dims(), vec![2, 0]);
        assert_eq!(r.stabilized_at, Some(1));
    }
}
