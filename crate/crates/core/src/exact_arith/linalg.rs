//! Sparse exact linear algebra over `ℚ(i)`.
//!
//! Elimination is fraction-free: every row is cleared of denominators and kept
//! as a primitive vector of Gaussian integers. Eliminating a column from a row
//! `w` with pivot row `p` computes `a·w − b·p` (with `a` the pivot of `p` and `b`
//! the entry of `w`), then divides out the integer content of the result.
//! Rationals only reappear when a reduced vector or a kernel vector is read out.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::scalar::{GaussianRational, Rational};
use crate::error::{Error, Result};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, GaussianRational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussInt {
                re: &self.re * &o.re,
                im: BigInt::zero(),
            };
        }
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn to_rational(&self) -> GaussianRational {
        GaussianRational::new(
            Rational::new(self.re.clone(), 1),
            Rational::new(self.im.clone(), 1),
        )
    }
}

type IntRow = Vec<(usize, GaussInt)>;

/// Clears denominators; returns the integer row and the common multiplier `d`
/// such that `row = d · v`.
fn to_int_row(v: &[(usize, GaussianRational)]) -> (IntRow, BigInt) {
    let mut d = BigInt::one();
    for (_, x) in v {
        d = d.lcm(x.re.denom());
        d = d.lcm(x.im.denom());
    }
    let row = v
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| {
            let re = x.re.numer() * (&d / x.re.denom());
            let im = x.im.numer() * (&d / x.im.denom());
            (*c, GaussInt { re, im })
        })
        .collect();
    (row, d)
}

/// Divides the row by the gcd of all its integer components; returns that gcd.
fn make_primitive(row: &mut IntRow) -> BigInt {
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(&x.re);
        g = g.gcd(&x.im);
        if g.is_one() {
            return g;
        }
    }
    if g.is_zero() || g.is_one() {
        return BigInt::one();
    }
    for (_, x) in row.iter_mut() {
        x.re = &x.re / &g;
        x.im = &x.im / &g;
    }
    g
}

/// `a·w − b·p` on sorted sparse rows.
fn combine(a: &GaussInt, w: &IntRow, b: &GaussInt, p: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(w.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < w.len() || j < p.len() {
        let take_w = j >= p.len() || (i < w.len() && w[i].0 < p[j].0);
        let take_p = i >= w.len() || (j < p.len() && p[j].0 < w[i].0);
        let (col, val) = if take_w {
            let r = (w[i].0, a.mul(&w[i].1));
            i += 1;
            r
        } else if take_p {
            let bp = b.mul(&p[j].1);
            let r = (
                p[j].0,
                GaussInt {
                    re: -bp.re,
                    im: -bp.im,
                },
            );
            j += 1;
            r
        } else {
            let x = a.mul(&w[i].1);
            let y = b.mul(&p[j].1);
            let r = (
                w[i].0,
                GaussInt {
                    re: x.re - y.re,
                    im: x.im - y.im,
                },
            );
            i += 1;
            j += 1;
            r
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    out
}

fn entry_at(row: &IntRow, col: usize) -> Option<&GaussInt> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|k| &row[k].1)
}

/// Incrementally built row-echelon form of a set of vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<IntRow>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.is_pivot(c)).collect()
    }

    /// Adds `v` to the spanning set. Returns `true` when the rank grew.
    pub fn insert(&mut self, v: &[(usize, GaussianRational)]) -> bool {
        let (mut w, _) = to_int_row(v);
        debug_assert!(w.iter().all(|(c, _)| *c < self.cols));
        make_primitive(&mut w);
        loop {
            let Some((lead, _)) = w.first() else {
                return false;
            };
            let lead = *lead;
            match self.pivot_row[lead] {
                Some(r) => {
                    let p = &self.rows[r];
                    let a = p[0].1.clone();
                    let b = w[0].1.clone();
                    w = combine(&a, &w, &b, p);
                    make_primitive(&mut w);
                }
                None => {
                    self.pivot_row[lead] = Some(self.rows.len());
                    self.rows.push(w);
                    return true;
                }
            }
        }
    }

    /// Unique representative of `v` modulo the row space whose support avoids
    /// every pivot column.
    pub fn reduce(&self, v: &[(usize, GaussianRational)]) -> SparseVec {
        let (mut w, d) = to_int_row(v);
        let mut scale = GaussianRational::real(Rational::new(d, 1));
        let mut from = 0usize;
        loop {
            let hit = w
                .iter()
                .find(|(c, _)| *c >= from && self.pivot_row[*c].is_some())
                .map(|(c, x)| (*c, x.clone()));
            let Some((col, b)) = hit else { break };
            let p = &self.rows[self.pivot_row[col].unwrap()];
            let a = p[0].1.clone();
            w = combine(&a, &w, &b, p);
            scale = &scale * &a.to_rational();
            let g = make_primitive(&mut w);
            if !g.is_one() {
                scale = scale.scale(&Rational::new(1, g));
            }
            from = col + 1;
        }
        let inv = scale.inv();
        w.into_iter()
            .map(|(c, x)| (c, &x.to_rational() * &inv))
            .collect()
    }

    pub fn contains(&self, v: &[(usize, GaussianRational)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Rows sorted by pivot and reduced so that each pivot column is zero in
    /// every other row.
    fn reduced_rows(&self) -> Vec<IntRow> {
        let mut rows: Vec<IntRow> = self.rows.clone();
        rows.sort_by_key(|r| r[0].0);
        for i in (0..rows.len()).rev() {
            let (pc, a) = (rows[i][0].0, rows[i][0].1.clone());
            let (head, tail) = rows.split_at_mut(i);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                if let Some(b) = entry_at(row, pc).cloned() {
                    let mut nr = combine(&a, row, &b, pivot_row);
                    make_primitive(&mut nr);
                    *row = nr;
                }
            }
        }
        rows
    }

    /// Raw kernel vectors: for each free column `f`, the solution with `x_f = 1`
    /// and every other free coordinate zero. Returned with their free column.
    fn raw_kernel(&self) -> Vec<(usize, Vec<GaussianRational>)> {
        let rows = self.reduced_rows();
        let pivots: Vec<(usize, GaussianRational)> =
            rows.iter().map(|r| (r[0].0, r[0].1.to_rational())).collect();
        (0..self.cols)
            .filter(|&f| !self.is_pivot(f))
            .map(|f| {
                let mut x = vec![GaussianRational::zero(); self.cols];
                x[f] = GaussianRational::one();
                for (row, (pc, a)) in rows.iter().zip(&pivots) {
                    if let Some(e) = entry_at(row, f) {
                        x[*pc] = -(&e.to_rational() / a);
                    }
                }
                (f, x)
            })
            .collect()
    }

    /// Basis of `{x : r·x = 0 for every row r}`, each vector scaled so that its
    /// first nonzero coordinate is 1, ordered by free column.
    pub fn kernel_basis(&self) -> Vec<Vec<GaussianRational>> {
        self.raw_kernel()
            .into_iter()
            .map(|(_, x)| canonicalize(x))
            .collect()
    }

    /// Kernel basis together with the free column that identifies each vector.
    pub fn kernel_with_free_columns(&self) -> Vec<(usize, Vec<GaussianRational>)> {
        self.raw_kernel()
            .into_iter()
            .map(|(f, x)| (f, canonicalize(x)))
            .collect()
    }
}

/// Scales `x` so that its first nonzero coordinate equals 1.
pub fn canonicalize(mut x: Vec<GaussianRational>) -> Vec<GaussianRational> {
    if let Some(lead) = x.iter().find(|v| !v.is_zero()).cloned() {
        if !lead.is_one() {
            let inv = lead.inv();
            for v in x.iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
    }
    x
}

pub fn dense_to_sparse(x: &[GaussianRational]) -> SparseVec {
    x.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

/// Rank of a family of sparse vectors living in a space of dimension `cols`.
pub fn rank_of<'a, I>(cols: usize, vectors: I) -> usize
where
    I: IntoIterator<Item = &'a SparseVec>,
{
    let mut ech = Echelon::new(cols);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// A sparse matrix over the Gaussian rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for (i, row) in m.data.iter_mut().enumerate() {
            row.push((i, GaussianRational::one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets. Zero values are
    /// dropped; repeated positions and out-of-range indices are rejected.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, GaussianRational)>,
    {
        let mut map: BTreeMap<(usize, usize), GaussianRational> = BTreeMap::new();
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::InvalidInput(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            if map.insert((r, c), v).is_some() {
                return Err(Error::InvalidInput(format!("duplicate entry at ({r}, {c})")));
            }
        }
        let mut m = Self::zero(rows, cols);
        for ((r, c), v) in map {
            if !v.is_zero() {
                m.data[r].push((c, v));
            }
        }
        Ok(m)
    }

    pub fn from_dense(rows: &[Vec<GaussianRational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        SparseMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| dense_to_sparse(r)).collect(),
        }
    }

    /// Builds a matrix directly from sparse rows (sorted, zero-free).
    pub fn from_rows(cols: usize, data: Vec<SparseVec>) -> Self {
        debug_assert!(data.iter().all(|r| r.iter().all(|(c, v)| *c < cols && !v.is_zero())));
        SparseMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> GaussianRational {
        self.data[r]
            .binary_search_by_key(&c, |(k, _)| *k)
            .map(|k| self.data[r][k].1.clone())
            .unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GaussianRational)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn mul_vec(&self, x: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                let mut acc = GaussianRational::zero();
                for (c, v) in row {
                    if !x[*c].is_zero() {
                        acc += &(v * &x[*c]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, GaussianRational> = BTreeMap::new();
                for (k, a) in row {
                    for (c, b) in &other.data[*k] {
                        *acc.entry(*c).or_default() += &(a * b);
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(c, v)| (*c, v.conj())).collect())
                .collect(),
        }
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.cols);
        for row in &self.data {
            e.insert(row);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<GaussianRational>> {
        self.echelon().kernel_basis()
    }

    /// One solution of `self · x = b` (free coordinates set to zero), if any.
    pub fn solve(&self, b: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        assert_eq!(b.len(), self.rows);
        let n = self.cols;
        let mut e = Echelon::new(n + 1);
        for (row, rhs) in self.data.iter().zip(b) {
            let mut r = row.clone();
            if !rhs.is_zero() {
                r.push((n, -rhs));
            }
            e.insert(&r);
        }
        if e.is_pivot(n) {
            return None;
        }
        e.raw_kernel()
            .into_iter()
            .find(|(f, _)| *f == n)
            .map(|(_, mut x)| {
                x.truncate(n);
                x
            })
    }
}

/// An antilinear map `v ↦ T·v̄` on `ℂ^n` that squares to the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntilinearInvolution {
    matrix: SparseMatrix,
}

impl AntilinearInvolution {
    /// Validates `T · T̄ = I`.
    pub fn new(matrix: SparseMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::NotInvolution);
        }
        if matrix.mul(&matrix.conj()) != SparseMatrix::identity(matrix.rows()) {
            return Err(Error::NotInvolution);
        }
        Ok(AntilinearInvolution { matrix })
    }

    /// `e_j ↦ sign_j · e_{perm[j]}` followed by conjugation of coordinates.
    pub fn from_permutation(perm: &[usize], signs: &[GaussianRational]) -> Result<Self> {
        if perm.len() != signs.len() {
            return Err(Error::InvalidInput("permutation and sign lengths differ".into()));
        }
        let n = perm.len();
        let m = SparseMatrix::from_triplets(
            n,
            n,
            perm.iter()
                .zip(signs)
                .enumerate()
                .map(|(j, (&p, s))| (p, j, s.clone())),
        )
        .map_err(|_| Error::NotInvolution)?;
        Self::new(m)
    }

    /// Plain complex conjugation of coordinates.
    pub fn conjugation(n: usize) -> Self {
        AntilinearInvolution {
            matrix: SparseMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        let bar: Vec<GaussianRational> = v.iter().map(GaussianRational::conj).collect();
        self.matrix.mul_vec(&bar)
    }
}

/// Basis (over ℝ) of `{v : m·v = 0, σ(v) = v}`. Each complex unknown is split
/// into real and imaginary parts so both conditions become one rational system.
pub fn solve_semilinear_fixed_points(
    m: &SparseMatrix,
    sigma: &AntilinearInvolution,
) -> Result<Vec<Vec<GaussianRational>>> {
    let n = m.cols();
    if sigma.dim() != n {
        return Err(Error::InvalidInput(format!(
            "involution acts on dimension {} but the matrix has {n} columns",
            sigma.dim()
        )));
    }
    let re = |z: &GaussianRational| GaussianRational::real(z.re.clone());
    let im = |z: &GaussianRational| GaussianRational::real(z.im.clone());
    // unknown j ↦ Re v_j, unknown n + j ↦ Im v_j
    let mut ech = Echelon::new(2 * n);
    for row in (0..m.rows()).map(|r| m.row(r)) {
        let mut real_part: BTreeMap<usize, GaussianRational> = BTreeMap::new();
        let mut imag_part: BTreeMap<usize, GaussianRational> = BTreeMap::new();
        for (c, z) in row {
            *real_part.entry(*c).or_default() += &re(z);
            *real_part.entry(n + c).or_default() -= &im(z);
            *imag_part.entry(*c).or_default() += &im(z);
            *imag_part.entry(n + c).or_default() += &re(z);
        }
        ech.insert(&strip(real_part));
        ech.insert(&strip(imag_part));
    }
    let t = sigma.matrix();
    for r in 0..n {
        // Re: Tr·a + Ti·b − a = 0 ; Im: Ti·a − Tr·b − b = 0
        let mut real_part: BTreeMap<usize, GaussianRational> = BTreeMap::new();
        let mut imag_part: BTreeMap<usize, GaussianRational> = BTreeMap::new();
        for (c, z) in t.row(r) {
            *real_part.entry(*c).or_default() += &re(z);
            *real_part.entry(n + c).or_default() += &im(z);
            *imag_part.entry(*c).or_default() += &im(z);
            *imag_part.entry(n + c).or_default() -= &re(z);
        }
        *real_part.entry(r).or_default() -= &GaussianRational::one();
        *imag_part.entry(n + r).or_default() -= &GaussianRational::one();
        ech.insert(&strip(real_part));
        ech.insert(&strip(imag_part));
    }
    Ok(ech
        .kernel_basis()
        .into_iter()
        .map(|x| {
            (0..n)
                .map(|j| GaussianRational::new(x[j].re.clone(), x[n + j].re.clone()))
                .collect()
        })
        .collect())
}

fn strip(map: BTreeMap<usize, GaussianRational>) -> SparseVec {
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Whether `v` is fixed by `sigma`.
pub fn is_fixed(sigma: &AntilinearInvolution, v: &[GaussianRational]) -> bool {
    sigma.apply(v) == v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64) -> GaussianRational {
        GaussianRational::from_int(p)
    }

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rank_examples() {
        assert_eq!(SparseMatrix::zero(3, 3).rank(), 0);
        assert_eq!(SparseMatrix::identity(3).rank(), 3);
        assert_eq!(dense(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(SparseMatrix::identity(2).kernel_basis().is_empty());
        let k = SparseMatrix::zero(2, 3).kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, q((i == j) as i64));
            }
        }
        assert_eq!(dense(&[&[1, 1]]).kernel_basis(), vec![vec![q(1), q(-1)]]);
    }

    #[test]
    fn reduce_avoids_pivots_and_is_unique() {
        let m = dense(&[&[1, 2, 3], &[0, 1, 1]]);
        let e = m.echelon();
        let v = dense_to_sparse(&[q(2), q(5), q(7)]);
        let r = e.reduce(&v);
        assert!(r.iter().all(|(c, _)| !e.is_pivot(*c)));
        // v - 2·row0 - 1·row1 = (0, 0, 0) → in span
        assert!(r.is_empty());
        let w = dense_to_sparse(&[q(0), q(0), q(1)]);
        assert_eq!(e.reduce(&w), vec![(2, q(1))]);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = dense(&[&[1, 1], &[1, -1]]);
        let x = m.solve(&[q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let s = dense(&[&[1, 2], &[2, 4]]);
        assert!(s.solve(&[q(1), q(3)]).is_none());
        assert!(s.solve(&[q(1), q(2)]).is_some());
    }

    #[test]
    fn gaussian_entries() {
        let i = GaussianRational::i();
        let m = SparseMatrix::from_dense(&[vec![q(1), i.clone()], vec![i.clone(), q(-1)]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(GaussianRational::is_zero));
    }

    #[test]
    fn fixed_points_examples() {
        // ℂ¹ with conjugation: the real axis
        let fixed =
            solve_semilinear_fixed_points(&SparseMatrix::zero(0, 1), &AntilinearInvolution::conjugation(1))
                .unwrap();
        assert_eq!(fixed, vec![vec![q(1)]]);
        let none = solve_semilinear_fixed_points(
            &SparseMatrix::identity(1),
            &AntilinearInvolution::conjugation(1),
        )
        .unwrap();
        assert!(none.is_empty());
        // swap with conjugation on ℂ²: v = (z, z̄), two real dimensions
        let swap = AntilinearInvolution::from_permutation(&[1, 0], &[q(1), q(1)]).unwrap();
        let fixed = solve_semilinear_fixed_points(&SparseMatrix::zero(0, 2), &swap).unwrap();
        assert_eq!(fixed.len(), 2);
        for v in &fixed {
            assert!(is_fixed(&swap, v));
        }
    }

    #[test]
    fn non_involution_rejected() {
        assert_eq!(
            AntilinearInvolution::new(dense(&[&[2]])),
            Err(Error::NotInvolution)
        );
        // e_0 → e_1, e_1 → e_1 is not a permutation involution
        assert!(AntilinearInvolution::from_permutation(&[1, 1], &[q(1), q(1)]).is_err());
        // i·conj squares to identity: (i·conj)² v = i·conj(i·v̄) = i·(−i)·v = v
        let i_conj = SparseMatrix::from_dense(&[vec![GaussianRational::i()]]);
        assert!(AntilinearInvolution::new(i_conj).is_ok());
    }
}
