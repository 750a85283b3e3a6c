//! Totally nondegenerate CR symbols `𝔪^ℂ = 𝔘_J / 𝔦^{−μ}` with their
//! conjugation and real form.

use std::collections::BTreeMap;

use crate::cr_universal::{integrable, UniversalCR};
use crate::error::{Error, Result};
use crate::exact_arith::{
    AntilinearInvolution, Echelon, GaussianRational, Rational, SparseMatrix, SparseVec,
};
use crate::free_lie::{AlgebraElement, GradedAlgebra, Quotient};

#[derive(Debug)]
pub struct CRSymbol {
    universal: UniversalCR,
    ideal_text: Vec<String>,
    lowest_ideal: Vec<AlgebraElement>,
    quotient: Quotient,
    conj_images: Vec<AlgebraElement>,
    conj: Vec<AntilinearInvolution>,
}

/// Builds `𝔘_J / 𝔦^{−μ}` where `𝔦^{−μ}` is spanned by the given degree `−μ`
/// expressions (monomial text syntax over `E1…En, F1…Fn`).
pub fn build_symbol(universal: UniversalCR, ideal: &[String]) -> Result<CRSymbol> {
    let mu = universal.depth();
    let alphabet = universal.alphabet();
    let mut gens = Vec::with_capacity(ideal.len());
    for text in ideal {
        let terms = alphabet.parse_sum(text)?;
        if terms.iter().any(|(_, t)| t.degree() != mu) {
            return Err(Error::IdealNotLowestDegree);
        }
        let mut x = AlgebraElement::zero();
        for (c, t) in &terms {
            x.add_scaled(c, &universal.project_tree(t));
        }
        gens.push(x);
    }
    let u = universal.algebra();
    let mut span = Echelon::new(u.dim(mu));
    for g in &gens {
        span.insert(&u.local_sparse(g, mu));
    }
    for g in &gens {
        if !span.contains(&u.local_sparse(&universal.conjugate(g), mu)) {
            return Err(Error::IdealNotReal);
        }
    }
    if span.rank() == u.dim(mu) {
        return Err(Error::DepthCollapse);
    }
    let mut ideal_layers = vec![Vec::new(); mu];
    ideal_layers[mu - 1] = gens.clone();
    let quotient = Quotient::new(u, &ideal_layers, &[])?;
    let m = quotient.algebra();
    let conj_images: Vec<AlgebraElement> = (0..m.total_dim())
        .map(|k| {
            let lifted = quotient.lift(&AlgebraElement::basis(k));
            quotient.project(u, &universal.conjugate(&lifted))
        })
        .collect();
    let mut conj = Vec::with_capacity(mu);
    for d in 1..=mu {
        let r = m.range(d);
        let entries = r.clone().flat_map(|c| {
            m.local_sparse(&conj_images[c], d)
                .into_iter()
                .map(move |(row, v)| (row, c - r.start, v))
        });
        let t = SparseMatrix::from_triplets(r.len(), r.len(), entries)?;
        conj.push(AntilinearInvolution::new(t)?);
    }
    Ok(CRSymbol {
        universal,
        ideal_text: ideal.to_vec(),
        lowest_ideal: gens,
        quotient,
        conj_images,
        conj,
    })
}

impl CRSymbol {
    pub fn n(&self) -> usize {
        self.universal.n()
    }

    pub fn mu(&self) -> usize {
        self.universal.depth()
    }

    pub fn universal(&self) -> &UniversalCR {
        &self.universal
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        self.quotient.algebra()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.algebra().dims()
    }

    pub fn ideal_text(&self) -> &[String] {
        &self.ideal_text
    }

    /// Ideal generators as elements of `𝔘_J^{−μ}`.
    pub fn lowest_ideal(&self) -> &[AlgebraElement] {
        &self.lowest_ideal
    }

    /// Projection `𝔘_J → 𝔪^ℂ`.
    pub fn project(&self, x: &AlgebraElement) -> AlgebraElement {
        self.quotient.project(self.universal.algebra(), x)
    }

    pub fn parse_element(&self, text: &str) -> Result<AlgebraElement> {
        Ok(self.project(&self.universal.parse_element(text)?))
    }

    pub fn format_element(&self, x: &AlgebraElement) -> String {
        self.algebra().format_element(x)
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.algebra().bracket(x, y)
    }

    /// The antilinear involution exchanging `E_i` and `F_i`.
    pub fn conjugate(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (k, c) in x.iter() {
            out.add_scaled(&c.conj(), &self.conj_images[k]);
        }
        out
    }

    /// Matrix of the conjugation on degree `−d`, as `v ↦ T·v̄`.
    pub fn conj_involution(&self, d: usize) -> &AntilinearInvolution {
        &self.conj[d - 1]
    }

    pub fn check_fundamental(&self) -> bool {
        self.algebra().is_fundamental()
    }

    pub fn check_integrability(&self) -> bool {
        integrable(self.algebra(), self.n())
    }

    /// Intermediate degrees keep the full dimension of `𝔘_J`.
    pub fn check_totally_nondegenerate(&self) -> bool {
        let u = self.universal.dims();
        let m = self.dims();
        (0..self.mu() - 1).all(|k| u[k] == m[k])
    }

    /// `dim ker(ad_{x0} : 𝔪^{−k} → 𝔪^{−k−1})` for `k = 1 … μ−1`.
    pub fn levi_kernel_profile(&self, x0: &AlgebraElement) -> Result<Vec<usize>> {
        (1..self.mu()).map(|k| self.levi_kernel_dim(x0, k)).collect()
    }

    /// `dim ker(ad_{x0})` on `𝔪^{−k}`; for `k = μ` everything maps to zero.
    pub fn levi_kernel_dim(&self, x0: &AlgebraElement, k: usize) -> Result<usize> {
        let m = self.algebra();
        if x0.is_zero() || m.degree_of_element(x0) != Some(1) {
            return Err(Error::InvalidInput("x0 must be a nonzero element of degree −1".into()));
        }
        if k == 0 || k > self.mu() {
            return Err(Error::InvalidInput(format!("degree {k} outside 1..={}", self.mu())));
        }
        let dim = m.dim(k);
        if k == self.mu() {
            return Ok(dim);
        }
        let mut cols: Vec<(usize, usize, GaussianRational)> = Vec::new();
        for (c, e) in m.range(k).enumerate() {
            let img = m.bracket(x0, &AlgebraElement::basis(e));
            cols.extend(m.local_sparse(&img, k + 1).into_iter().map(|(r, v)| (r, c, v)));
        }
        let a = SparseMatrix::from_triplets(m.dim(k + 1), dim, cols)?;
        Ok(dim - a.rank())
    }

    /// Real form: per degree, fixed vectors `v + conj(v)` and `i(v − conj(v))`
    /// chosen greedily over the basis, each scaled by a positive rational so
    /// its first nonzero coordinate has unit real (or imaginary) part.
    pub fn real_form(&self) -> Result<RealForm> {
        let m = self.algebra();
        let i = GaussianRational::i();
        let mut basis = Vec::new();
        let mut offsets = vec![0];
        for d in 1..=self.mu() {
            let mut ech = Echelon::new(m.dim(d));
            for e in m.range(d) {
                if ech.rank() == m.dim(d) {
                    break;
                }
                let v = AlgebraElement::basis(e);
                let cv = self.conjugate(&v);
                for cand in [v.add(&cv), v.sub(&cv).scale(&i)] {
                    if cand.is_zero() {
                        continue;
                    }
                    let cand = normalize_positive(&cand);
                    if ech.insert(&m.local_sparse(&cand, d)) {
                        basis.push(cand);
                    }
                }
            }
            if ech.rank() != m.dim(d) {
                return Err(Error::Internal(format!("real form of degree {d} is incomplete")));
            }
            offsets.push(basis.len());
        }
        let mut structure = BTreeMap::new();
        for a in 0..basis.len() {
            for b in a + 1..basis.len() {
                let br = m.bracket(&basis[a], &basis[b]);
                if br.is_zero() {
                    continue;
                }
                let d = m.degree_of_element(&br).expect("homogeneous bracket");
                let cols: Vec<SparseVec> = (offsets[d - 1]..offsets[d])
                    .map(|k| m.local_sparse(&basis[k], d))
                    .collect();
                let mat = SparseMatrix::from_triplets(
                    m.dim(d),
                    cols.len(),
                    cols.iter()
                        .enumerate()
                        .flat_map(|(c, v)| v.iter().map(move |(r, x)| (*r, c, x.clone()))),
                )?;
                let coords = mat
                    .solve(&m.local_coords(&br, d))
                    .ok_or_else(|| Error::Internal("real bracket outside the real span".into()))?;
                let mut row = Vec::new();
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_real() {
                        return Err(Error::Internal("non-real structure constant in the real form".into()));
                    }
                    if !c.is_zero() {
                        row.push((offsets[d - 1] + k, c.re));
                    }
                }
                structure.insert((a, b), row);
            }
        }
        Ok(RealForm {
            basis,
            offsets,
            structure,
        })
    }
}

fn normalize_positive(x: &AlgebraElement) -> AlgebraElement {
    let (_, lead) = x.iter().next().expect("nonzero");
    let s = if lead.re.is_zero() { lead.im.abs() } else { lead.re.abs() };
    x.scale(&GaussianRational::real(s.recip()))
}

/// Basis of the conjugation-fixed real form with rational structure constants.
#[derive(Clone, Debug)]
pub struct RealForm {
    basis: Vec<AlgebraElement>,
    offsets: Vec<usize>,
    structure: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

impl RealForm {
    pub fn dims(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.basis.len()
    }

    /// Real basis vectors in complex coordinates of `𝔪^ℂ`.
    pub fn basis(&self) -> &[AlgebraElement] {
        &self.basis
    }

    pub fn degree_basis(&self, d: usize) -> &[AlgebraElement] {
        &self.basis[self.offsets[d - 1]..self.offsets[d]]
    }

    /// `[r_a, r_b] = Σ c_k r_k` for `a < b`, nonzero brackets only.
    pub fn structure_constants(&self) -> &BTreeMap<(usize, usize), Vec<(usize, Rational)>> {
        &self.structure
    }

    /// Rebuilds the complex bracket of two real basis vectors from the real
    /// structure constants.
    pub fn complexified_bracket(&self, a: usize, b: usize) -> AlgebraElement {
        let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
        let mut out = AlgebraElement::zero();
        if let Some(row) = self.structure.get(&(lo, hi)) {
            for (k, c) in row {
                out.add_scaled(&GaussianRational::real(c.clone()), &self.basis[*k]);
            }
        }
        out.scale(&GaussianRational::from_int(sign))
    }
}
