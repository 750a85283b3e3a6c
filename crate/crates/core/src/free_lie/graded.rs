use std::collections::HashMap;

use super::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::exact_arith::{rank_of, GaussianRational};

/// A negatively graded nilpotent Lie algebra `𝔤^{-1} ⊕ … ⊕ 𝔤^{-depth}` with an
/// ordered basis per degree and a sparse structure-constant table.
///
/// Basis indices are global and degree-major: the degree `-d` block occupies
/// `offsets[d-1]..offsets[d]`. The table stores both `(i, j)` and `(j, i)` for
/// every nonzero bracket with `i != j`.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    offsets: Vec<usize>,
    labels: Vec<String>,
    btypes: Vec<Vec<u32>>,
    table: HashMap<(usize, usize), AlgebraElement>,
}

impl GradedAlgebra {
    /// Builds an algebra from per-degree dimensions, basis labels, optional
    /// B-types and the brackets `[e_i, e_j]` for `i < j`. The table is checked
    /// for degree consistency; the other half is filled in by antisymmetry.
    pub fn new(
        dims: &[usize],
        labels: Vec<String>,
        btypes: Vec<Vec<u32>>,
        upper: impl IntoIterator<Item = ((usize, usize), AlgebraElement)>,
    ) -> Result<Self> {
        let mut offsets = vec![0];
        for d in dims {
            offsets.push(offsets.last().unwrap() + d);
        }
        let total = *offsets.last().unwrap();
        if labels.len() != total || (!btypes.is_empty() && btypes.len() != total) {
            return Err(Error::InvalidInput("label/B-type count does not match dimensions".into()));
        }
        let mut alg = GradedAlgebra {
            offsets,
            labels,
            btypes,
            table: HashMap::new(),
        };
        for ((i, j), v) in upper {
            if i >= j || j >= total {
                return Err(Error::InvalidInput(format!("bad bracket key ({i}, {j})")));
            }
            let d = alg.degree_of(i) + alg.degree_of(j);
            if v.indices().any(|k| k >= total || alg.degree_of(k) != d) {
                return Err(Error::InvalidInput(format!(
                    "bracket of {} and {} is not homogeneous of degree {d}",
                    alg.labels[i], alg.labels[j]
                )));
            }
            if !v.is_zero() {
                alg.table.insert((j, i), v.neg());
                alg.table.insert((i, j), v);
            }
        }
        Ok(alg)
    }

    pub fn depth(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Dimension of the degree `-d` component (`1 ≤ d ≤ depth`).
    pub fn dim(&self, d: usize) -> usize {
        if d == 0 || d > self.depth() {
            return 0;
        }
        self.offsets[d] - self.offsets[d - 1]
    }

    pub fn dims(&self) -> Vec<usize> {
        (1..=self.depth()).map(|d| self.dim(d)).collect()
    }

    pub fn total_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Global index range of the degree `-d` component.
    pub fn range(&self, d: usize) -> std::ops::Range<usize> {
        if d == 0 || d > self.depth() {
            return 0..0;
        }
        self.offsets[d - 1]..self.offsets[d]
    }

    /// `d` such that basis element `i` lies in degree `-d`.
    pub fn degree_of(&self, i: usize) -> usize {
        self.offsets.partition_point(|&o| o <= i)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn btype(&self, i: usize) -> Option<&[u32]> {
        self.btypes.get(i).map(Vec::as_slice)
    }

    pub fn has_btypes(&self) -> bool {
        !self.btypes.is_empty()
    }

    pub fn structure_constants(&self) -> impl Iterator<Item = (&(usize, usize), &AlgebraElement)> {
        self.table.iter()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Option<&AlgebraElement> {
        self.table.get(&(i, j))
    }

    /// Degree of a homogeneous element, or `None` for zero / mixed elements.
    pub fn degree_of_element(&self, x: &AlgebraElement) -> Option<usize> {
        let mut ds = x.indices().map(|i| self.degree_of(i));
        let d = ds.next()?;
        ds.all(|e| e == d).then_some(d)
    }

    /// Bilinear bracket; components beyond the depth are already absent from
    /// the table.
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut r = AlgebraElement::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if let Some(v) = self.table.get(&(i, j)) {
                    r.add_scaled(&(a * b), v);
                }
            }
        }
        r
    }

    /// Component of `x` in degree `-d`.
    pub fn component(&self, x: &AlgebraElement, d: usize) -> AlgebraElement {
        let r = self.range(d);
        x.filter(|i| r.contains(&i))
    }

    /// Local coordinates (within degree `-d`) of a degree `-d` element.
    pub fn local_coords(&self, x: &AlgebraElement, d: usize) -> Vec<GaussianRational> {
        let r = self.range(d);
        let mut v = vec![GaussianRational::zero(); r.len()];
        for (i, c) in x.iter() {
            if r.contains(&i) {
                v[i - r.start] = c.clone();
            }
        }
        v
    }

    pub fn from_local_coords(&self, v: &[GaussianRational], d: usize) -> AlgebraElement {
        let start = self.range(d).start;
        v.iter()
            .enumerate()
            .map(|(k, c)| (start + k, c.clone()))
            .collect()
    }

    /// Checks `[e_i, e_j] = −[e_j, e_i]` over the stored table.
    pub fn check_antisymmetry(&self) -> std::result::Result<(), String> {
        for ((i, j), v) in &self.table {
            if i == j {
                return Err(format!("[{0}, {0}] = {1:?} is nonzero", self.labels[*i], v));
            }
            match self.table.get(&(*j, *i)) {
                Some(w) if w.neg() == *v => {}
                _ => {
                    return Err(format!(
                        "[{}, {}] is not minus [{}, {}]",
                        self.labels[*i], self.labels[*j], self.labels[*j], self.labels[*i]
                    ))
                }
            }
        }
        Ok(())
    }

    /// Checks the Jacobi identity on every triple of distinct basis elements
    /// whose degrees sum to at most the depth (all others vanish trivially).
    pub fn check_jacobi(&self) -> std::result::Result<(), String> {
        let depth = self.depth();
        let n = self.total_dim();
        for a in 0..n {
            let da = self.degree_of(a);
            for b in a + 1..n {
                let db = self.degree_of(b);
                if da + db >= depth {
                    continue;
                }
                let ab = AlgebraElement::basis(a);
                let bb = AlgebraElement::basis(b);
                let ab_b = self.bracket(&ab, &bb);
                for c in b + 1..n {
                    if da + db + self.degree_of(c) > depth {
                        break;
                    }
                    let cb = AlgebraElement::basis(c);
                    let mut s = self.bracket(&ab_b, &cb);
                    s = s.add(&self.bracket(&self.bracket(&bb, &cb), &ab));
                    s = s.add(&self.bracket(&self.bracket(&cb, &ab), &bb));
                    if !s.is_zero() {
                        return Err(format!(
                            "Jacobi fails on ({}, {}, {}): cyclic sum {:?}",
                            self.labels[a], self.labels[b], self.labels[c], s
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// `[𝔤^{-i}, 𝔤^{-1}] = 𝔤^{-i-1}` for every `1 ≤ i < depth`, by exact rank.
    pub fn is_fundamental(&self) -> bool {
        (1..self.depth()).all(|i| {
            let images: Vec<_> = self
                .range(i)
                .flat_map(|x| self.range(1).map(move |g| (x, g)))
                .filter_map(|(x, g)| self.table.get(&(x, g)))
                .map(|v| self.local_sparse(v, i + 1))
                .collect();
            rank_of(self.dim(i + 1), &images) == self.dim(i + 1)
        })
    }

    /// Sparse local coordinates in degree `-d`.
    pub fn local_sparse(&self, x: &AlgebraElement, d: usize) -> Vec<(usize, GaussianRational)> {
        let r = self.range(d);
        x.iter()
            .filter(|(i, _)| r.contains(i))
            .map(|(i, c)| (i - r.start, c.clone()))
            .collect()
    }

    /// The quotient by all components of degree below `-depth`.
    pub fn truncate(&self, depth: usize) -> GradedAlgebra {
        let depth = depth.min(self.depth());
        let total = self.offsets[depth];
        let table = self
            .table
            .iter()
            .filter(|((i, j), _)| *i < total && *j < total)
            .map(|(k, v)| (*k, v.filter(|t| t < total)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        GradedAlgebra {
            offsets: self.offsets[..=depth].to_vec(),
            labels: self.labels[..total].to_vec(),
            btypes: if self.btypes.is_empty() {
                Vec::new()
            } else {
                self.btypes[..total].to_vec()
            },
            table,
        }
    }

    /// Text form `c1*label1 + c2*label2 …` of an element.
    pub fn format_element(&self, x: &AlgebraElement) -> String {
        super::text::format_terms(x.iter().map(|(i, c)| (c.clone(), self.labels[i].clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg() -> GradedAlgebra {
        GradedAlgebra::new(
            &[2, 1],
            vec!["X".into(), "Y".into(), "Z".into()],
            Vec::new(),
            [((0, 1), AlgebraElement::basis(2))],
        )
        .unwrap()
    }

    #[test]
    fn degrees_and_ranges() {
        let h = heisenberg();
        assert_eq!(h.dims(), vec![2, 1]);
        assert_eq!(h.degree_of(0), 1);
        assert_eq!(h.degree_of(2), 2);
        assert_eq!(h.range(2), 2..3);
        assert!(h.is_fundamental());
        assert!(h.check_antisymmetry().is_ok());
        assert!(h.check_jacobi().is_ok());
        let t = h.truncate(1);
        assert_eq!(t.dims(), vec![2]);
        assert_eq!(t.structure_constants().count(), 0);
    }

    #[test]
    fn rejects_inhomogeneous_bracket() {
        let r = GradedAlgebra::new(
            &[2, 1],
            vec!["X".into(), "Y".into(), "Z".into()],
            Vec::new(),
            [((0, 1), AlgebraElement::basis(1))],
        );
        assert!(r.is_err());
    }

    #[test]
    fn degree_three_vector_outside_brackets_is_not_fundamental() {
        // X, Y in degree 1; Z = [X,Y]; W in degree 3 with no bracket reaching it
        let a = GradedAlgebra::new(
            &[2, 1, 1],
            vec!["X".into(), "Y".into(), "Z".into(), "W".into()],
            Vec::new(),
            [((0, 1), AlgebraElement::basis(2))],
        )
        .unwrap();
        assert!(!a.is_fundamental());
    }
}
