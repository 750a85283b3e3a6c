use std::collections::HashMap;

use super::element::AlgebraElement;
use super::graded::GradedAlgebra;
use crate::error::Result;
use crate::exact_arith::{Echelon, SparseVec};

/// Quotient of a graded algebra by a graded ideal given through spanning
/// vectors in each degree.
///
/// Representatives are the parent basis elements that are not pivots of the
/// ideal's echelon form. Columns listed in `priority` are eliminated first, so
/// ideal members that are themselves basis vectors never become
/// representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    algebra: GradedAlgebra,
    reps: Vec<usize>,
    rep_of: HashMap<usize, usize>,
    degrees: Vec<DegreeData>,
}

#[derive(Clone, Debug)]
struct DegreeData {
    start: usize,
    echelon: Echelon,
    /// local parent offset → echelon column
    column: Vec<usize>,
    /// echelon column → local parent offset
    parent: Vec<usize>,
}

impl Quotient {
    pub fn new(
        parent: &GradedAlgebra,
        ideal: &[Vec<AlgebraElement>],
        priority: &[Vec<usize>],
    ) -> Result<Self> {
        let depth = parent.depth();
        let mut degrees = Vec::with_capacity(depth);
        let mut reps = Vec::new();
        let mut dims = Vec::with_capacity(depth);
        for d in 1..=depth {
            let range = parent.range(d);
            let mut order: Vec<usize> = Vec::with_capacity(range.len());
            let mut seen = vec![false; range.len()];
            for &g in priority.get(d - 1).map(Vec::as_slice).unwrap_or(&[]) {
                let local = g - range.start;
                if !seen[local] {
                    seen[local] = true;
                    order.push(local);
                }
            }
            order.extend((0..range.len()).filter(|&l| !seen[l]));
            let mut column = vec![0; range.len()];
            for (c, &l) in order.iter().enumerate() {
                column[l] = c;
            }
            let mut data = DegreeData {
                start: range.start,
                echelon: Echelon::new(range.len()),
                column,
                parent: order,
            };
            for v in ideal.get(d - 1).map(Vec::as_slice).unwrap_or(&[]) {
                let cols = data.to_columns(v);
                data.echelon.insert(&cols);
            }
            let before = reps.len();
            reps.extend(
                range
                    .clone()
                    .filter(|&g| !data.echelon.is_pivot(data.column[g - range.start])),
            );
            dims.push(reps.len() - before);
            degrees.push(data);
        }
        let rep_of: HashMap<usize, usize> = reps.iter().enumerate().map(|(q, &g)| (g, q)).collect();
        let mut q = Quotient {
            algebra: GradedAlgebra::new(&[], Vec::new(), Vec::new(), [])?,
            reps,
            rep_of,
            degrees,
        };
        let labels = q.reps.iter().map(|&g| parent.label(g).to_string()).collect();
        let btypes = if parent.has_btypes() {
            q.reps.iter().map(|&g| parent.btype(g).unwrap().to_vec()).collect()
        } else {
            Vec::new()
        };
        let mut upper = Vec::new();
        for a in 0..q.reps.len() {
            for b in a + 1..q.reps.len() {
                if let Some(v) = parent.bracket_basis(q.reps[a], q.reps[b]) {
                    let p = q.project(parent, v);
                    if !p.is_zero() {
                        upper.push(((a, b), p));
                    }
                }
            }
        }
        q.algebra = GradedAlgebra::new(&dims, labels, btypes, upper)?;
        Ok(q)
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    /// Parent index of each quotient basis element.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    /// Dimension of the ideal in degree `-d`.
    pub fn ideal_dim(&self, d: usize) -> usize {
        self.degrees[d - 1].echelon.rank()
    }

    /// Image in the quotient of a parent element.
    pub fn project(&self, parent: &GradedAlgebra, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for d in 1..=self.degrees.len() {
            let comp = parent.component(x, d);
            if comp.is_zero() {
                continue;
            }
            let data = &self.degrees[d - 1];
            let reduced = data.echelon.reduce(&data.to_columns(&comp));
            for (c, v) in reduced {
                let g = data.start + data.parent[c];
                out.add_term(self.rep_of[&g], &v);
            }
        }
        out
    }

    /// The representative lift of a quotient element.
    pub fn lift(&self, q: &AlgebraElement) -> AlgebraElement {
        q.map_indices(|i| Some(self.reps[i]))
    }
}

impl DegreeData {
    fn to_columns(&self, v: &AlgebraElement) -> SparseVec {
        let mut cols: SparseVec = v
            .iter()
            .map(|(g, c)| (self.column[g - self.start], c.clone()))
            .collect();
        cols.sort_by_key(|(c, _)| *c);
        cols
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_lie::FreeLieAlgebra;

    #[test]
    fn quotient_by_top_degree_of_free_algebra() {
        let f = FreeLieAlgebra::hall_basis(2, 3).unwrap();
        let g = f.graded();
        let top: Vec<AlgebraElement> = g.range(3).map(AlgebraElement::basis).collect();
        let q = Quotient::new(g, &[vec![], vec![], top], &[]).unwrap();
        assert_eq!(q.algebra().dims(), vec![2, 1, 0]);
        assert_eq!(q.ideal_dim(3), 2);
        assert!(q.algebra().check_jacobi().is_ok());
    }

    #[test]
    fn priority_columns_are_eliminated_first() {
        let f = FreeLieAlgebra::hall_basis(2, 3).unwrap();
        let g = f.graded();
        let r = g.range(3);
        // ideal spanned by e_a + e_b in degree 3: without priority the first
        // column is the pivot, with priority the second one is
        let v = AlgebraElement::basis(r.start).add(&AlgebraElement::basis(r.start + 1));
        let plain = Quotient::new(g, &[vec![], vec![], vec![v.clone()]], &[]).unwrap();
        assert_eq!(plain.representatives().last(), Some(&(r.start + 1)));
        let pri = Quotient::new(g, &[vec![], vec![], vec![v.clone()]], &[vec![], vec![], vec![r.start + 1]])
            .unwrap();
        assert_eq!(pri.representatives().last(), Some(&r.start));
        assert!(pri.project(g, &v).is_zero());
        let e = AlgebraElement::basis(r.start + 1);
        assert_eq!(pri.project(g, &e), AlgebraElement::basis(3).neg());
    }
}
