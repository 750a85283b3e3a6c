//! The universal fundamental CR algebra `𝔘_J = 𝔘_{V^ℂ}/(𝔦₁₀ + 𝔦₀₁)`.
//!
//! Generators are ordered `E1 … En, F1 … Fn` (holomorphic first). The ideal
//! `𝔦₁₀` generated by `[V¹⁰, V¹⁰]` is spanned by the Hall monomials that contain
//! a bracket of two holomorphic generators. `𝔦₀₁` is obtained from the same
//! index set in the antiholomorphic-first Hall basis, translated back through
//! the change of basis between the two Hall bases.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact_arith::{rank_of, SparseVec};
use crate::free_lie::{AlgebraElement, Alphabet, FreeLieAlgebra, GradedAlgebra, Quotient, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adapted {
    HolomorphicFirst,
    AntiholomorphicFirst,
}

/// Hall basis for the generator order that puts the selected half first,
/// together with the Hall monomials that lie in the ideal generated by
/// brackets of two generators of that half (global indices, per degree).
pub fn adapted_hall_basis(
    n: usize,
    depth: usize,
    which: Adapted,
    cap: usize,
) -> Result<(FreeLieAlgebra, Vec<Vec<usize>>)> {
    let alphabet = Alphabet::Cr {
        n,
        antiholomorphic_first: which == Adapted::AntiholomorphicFirst,
    };
    let free = FreeLieAlgebra::with_alphabet(alphabet, depth, cap)?;
    let members = ideal_members(&free, n);
    Ok((free, members))
}

/// Hall monomials containing a degree-2 sub-bracket whose leaves both lie in
/// the first `n` generator slots.
fn ideal_members(free: &FreeLieAlgebra, n: usize) -> Vec<Vec<usize>> {
    let mut member = vec![false; free.basis().len()];
    for (i, m) in free.basis().iter().enumerate() {
        if let Some((u, v)) = m.parts() {
            member[i] = member[u] || member[v] || (m.degree() == 2 && u < n && v < n);
        }
    }
    (1..=free.depth())
        .map(|d| free.range(d).filter(|&i| member[i]).collect())
        .collect()
}

/// Swaps `E_i ↔ F_i` on generator slots.
pub fn swap_slot(n: usize) -> impl Fn(usize) -> usize {
    move |g| if g < n { g + n } else { g - n }
}

/// Spanning sets, per degree and in local coordinates, of the ideal generated
/// by brackets of two generators among the slots `half`, built by iterating
/// `𝔦^{k+1} = span{[x, g] : x generator, g ∈ 𝔦^k}` from degree 2.
pub fn generated_ideal_layers(free: &FreeLieAlgebra, half: std::ops::Range<usize>) -> Vec<Vec<SparseVec>> {
    let g = free.graded();
    let mut out = vec![Vec::new(); free.depth()];
    let mut layer: Vec<AlgebraElement> = Vec::new();
    for i in half.clone() {
        for j in half.clone() {
            if i < j {
                layer.push(g.bracket(&AlgebraElement::basis(i), &AlgebraElement::basis(j)));
            }
        }
    }
    for d in 2..=free.depth() {
        out[d - 1] = layer.iter().map(|v| g.local_sparse(v, d)).collect();
        layer = layer
            .iter()
            .flat_map(|v| g.range(1).map(move |x| g.bracket(&AlgebraElement::basis(x), v)))
            .filter(|v| !v.is_zero())
            .collect();
    }
    out
}

pub fn generated_ideal_dims(free: &FreeLieAlgebra, half: std::ops::Range<usize>) -> Vec<usize> {
    let g = free.graded();
    generated_ideal_layers(free, half)
        .iter()
        .enumerate()
        .map(|(k, vs)| rank_of(g.dim(k + 1), vs))
        .collect()
}

/// `𝔘_J` on `n` holomorphic generators, truncated at `depth`.
#[derive(Debug)]
pub struct UniversalCR {
    n: usize,
    depth: usize,
    free: FreeLieAlgebra,
    free_anti: FreeLieAlgebra,
    members10: Vec<Vec<usize>>,
    members01_anti: Vec<Vec<usize>>,
    /// image of each antiholomorphic-first Hall monomial in the
    /// holomorphic-first Hall basis; this is also the matrix of `E_i ↔ F_i`
    change_of_basis: Vec<AlgebraElement>,
    ideal01: Vec<Vec<AlgebraElement>>,
    quotient: Quotient,
    conj_images: Vec<AlgebraElement>,
}

pub fn build_universal_cr(n: usize, depth: usize, cap: usize) -> Result<UniversalCR> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if depth < 2 {
        return Err(Error::InvalidInput("depth must be at least 2".into()));
    }
    let (free, members10) = adapted_hall_basis(n, depth, Adapted::HolomorphicFirst, cap)?;
    let (free_anti, members01_anti) = adapted_hall_basis(n, depth, Adapted::AntiholomorphicFirst, cap)?;
    let swap = swap_slot(n);
    // slot g of the antiholomorphic-first alphabet names the same generator as
    // slot swap(g) of the holomorphic-first one
    let change_of_basis: Vec<AlgebraElement> = free_anti
        .basis()
        .iter()
        .map(|m| free.hall_rewrite(&m.tree().map_leaves(&swap)))
        .collect();
    let ideal01: Vec<Vec<AlgebraElement>> = members01_anti
        .iter()
        .map(|ms| ms.iter().map(|&m| change_of_basis[m].clone()).collect())
        .collect();
    let g = free.graded();
    let ideal: Vec<Vec<AlgebraElement>> = members10
        .iter()
        .zip(&ideal01)
        .map(|(m10, i01)| {
            m10.iter()
                .map(|&m| AlgebraElement::basis(m))
                .chain(i01.iter().cloned())
                .collect()
        })
        .collect();
    let quotient = Quotient::new(g, &ideal, &members10)?;
    let q = quotient.algebra();
    let conj_images = (0..q.total_dim())
        .map(|k| {
            let lifted = quotient.representatives()[k];
            quotient.project(g, &change_of_basis[lifted])
        })
        .collect();
    Ok(UniversalCR {
        n,
        depth,
        free,
        free_anti,
        members10,
        members01_anti,
        change_of_basis,
        ideal01,
        quotient,
        conj_images,
    })
}

/// `"(2,1|0,1)"`: holomorphic counts, then antiholomorphic counts.
pub fn btype_label(btype: &[u32], n: usize) -> String {
    let join = |s: &[u32]| s.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    format!("({}|{})", join(&btype[..n]), join(&btype[n..]))
}

impl UniversalCR {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn free(&self) -> &FreeLieAlgebra {
        &self.free
    }

    pub fn free_antiholomorphic_first(&self) -> &FreeLieAlgebra {
        &self.free_anti
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        self.quotient.algebra()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.algebra().dims()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.free.alphabet()
    }

    /// Hall monomials (holomorphic-first basis) spanning `𝔦₁₀`, per degree.
    pub fn ideal10_members(&self) -> &[Vec<usize>] {
        &self.members10
    }

    /// `𝔦₀₁` spanning set, expressed in the holomorphic-first basis.
    pub fn ideal01_basis(&self) -> &[Vec<AlgebraElement>] {
        &self.ideal01
    }

    /// Hall monomials of the antiholomorphic-first basis spanning `𝔦₀₁`.
    pub fn ideal01_members_antiholomorphic_first(&self) -> &[Vec<usize>] {
        &self.members01_anti
    }

    /// Antiholomorphic-first Hall monomial `m` in the holomorphic-first basis.
    pub fn change_of_basis(&self, m: usize) -> &AlgebraElement {
        &self.change_of_basis[m]
    }

    pub fn ideal_dim(&self, d: usize) -> usize {
        self.quotient.ideal_dim(d)
    }

    /// Projection `𝔘_{V^ℂ} → 𝔘_J`.
    pub fn project(&self, x: &AlgebraElement) -> AlgebraElement {
        self.quotient.project(self.free.graded(), x)
    }

    pub fn lift(&self, x: &AlgebraElement) -> AlgebraElement {
        self.quotient.lift(x)
    }

    pub fn project_tree(&self, t: &Tree) -> AlgebraElement {
        self.project(&self.free.hall_rewrite(t))
    }

    pub fn parse_element(&self, text: &str) -> Result<AlgebraElement> {
        Ok(self.project(&self.free.parse_element(text)?))
    }

    /// The antilinear involution induced by `E_i ↔ F_i`.
    pub fn conjugate(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (k, c) in x.iter() {
            out.add_scaled(&c.conj(), &self.conj_images[k]);
        }
        out
    }

    /// `(B-type, block dimension)` in degree `-k`, B-types in decreasing
    /// lexicographic order.
    pub fn type_blocks(&self, k: usize) -> Vec<(Vec<u32>, usize)> {
        let a = self.algebra();
        let mut blocks: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for i in a.range(k) {
            *blocks.entry(a.btype(i).unwrap().to_vec()).or_default() += 1;
        }
        blocks.into_iter().rev().collect()
    }

    /// Whether the images of `trees` in `𝔘_J` are linearly independent.
    /// Distinct B-types and nonzero images certify it directly; otherwise the
    /// verdict comes from an exact rank computation.
    pub fn independent_by_type(&self, trees: &[Tree]) -> bool {
        let images: Vec<AlgebraElement> = trees.iter().map(|t| self.project_tree(t)).collect();
        let mut types: Vec<Vec<u32>> = trees.iter().map(|t| t.btype(2 * self.n)).collect();
        types.sort();
        types.dedup();
        if types.len() == trees.len() && images.iter().all(|v| !v.is_zero()) {
            return true;
        }
        let vecs: Vec<SparseVec> = images.iter().map(AlgebraElement::to_sparse).collect();
        rank_of(self.algebra().total_dim(), &vecs) == trees.len()
    }

    /// Compares the Hall sub-bases of both ideals, and the quotient, against
    /// the ideals generated from degree 2 by repeated bracketing.
    pub fn check_ideal_bases(&self) -> std::result::Result<(), String> {
        let g = self.free.graded();
        let gen10 = generated_ideal_layers(&self.free, 0..self.n);
        let gen01 = generated_ideal_layers(&self.free, self.n..2 * self.n);
        for d in 1..=self.depth {
            let dim = g.dim(d);
            let r10 = rank_of(dim, &gen10[d - 1]);
            let r01 = rank_of(dim, &gen01[d - 1]);
            let m10: Vec<SparseVec> = self.members10[d - 1]
                .iter()
                .map(|&m| g.local_sparse(&AlgebraElement::basis(m), d))
                .collect();
            let m01: Vec<SparseVec> = self.ideal01[d - 1].iter().map(|v| g.local_sparse(v, d)).collect();
            for (name, members, generated, r) in
                [("𝔦₁₀", &m10, &gen10[d - 1], r10), ("𝔦₀₁", &m01, &gen01[d - 1], r01)]
            {
                if members.len() != r || rank_of(dim, members) != r {
                    return Err(format!(
                        "degree {d}: {} Hall elements for {name} but the generated ideal has dimension {r}",
                        members.len()
                    ));
                }
                if rank_of(dim, members.iter().chain(generated.iter())) != r {
                    return Err(format!("degree {d}: Hall elements do not span {name}"));
                }
            }
            if r10 != r01 {
                return Err(format!("degree {d}: dim 𝔦₁₀ = {r10} but dim 𝔦₀₁ = {r01}"));
            }
            let sum = rank_of(dim, gen10[d - 1].iter().chain(gen01[d - 1].iter()));
            if self.ideal_dim(d) != sum || self.algebra().dim(d) != dim - sum {
                return Err(format!("degree {d}: quotient dimension is not dim 𝔘 − dim(𝔦₁₀ + 𝔦₀₁)"));
            }
        }
        Ok(())
    }

    /// Every ideal basis vector has a single B-type, so the ideal is the direct
    /// sum of its B-type components.
    pub fn check_ideal_btype_homogeneous(&self) -> std::result::Result<(), String> {
        for v in self.ideal01.iter().flatten() {
            let mut types = v.indices().map(|i| self.free.monomial(i).btype());
            if let Some(first) = types.next() {
                if types.any(|t| t != first) {
                    return Err(format!(
                        "ideal vector {} mixes B-types",
                        self.free.format_element(v)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Brackets of two holomorphic (resp. antiholomorphic) generators vanish.
    pub fn check_integrability(&self) -> bool {
        integrable(self.algebra(), self.n)
    }
}

/// `[𝔪^{10}, 𝔪^{10}] = 0` and `[𝔪^{01}, 𝔪^{01}] = 0` on the generators of an
/// algebra whose degree −1 basis is `E1 … En, F1 … Fn`.
pub fn integrable(a: &GradedAlgebra, n: usize) -> bool {
    (0..2 * n).all(|i| {
        (0..2 * n)
            .filter(|&j| (i < n) == (j < n))
            .all(|j| a.bracket_basis(i, j).is_none())
    })
}
