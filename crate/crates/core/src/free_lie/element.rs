use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::exact_arith::{GaussianRational, SparseVec};

/// Sparse linear combination of graded basis elements, keyed by the global
/// basis index (indices are degree-major, so the degree is implied).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    terms: BTreeMap<usize, GaussianRational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(index: usize) -> Self {
        Self::term(index, GaussianRational::one())
    }

    pub fn term(index: usize, coeff: GaussianRational) -> Self {
        let mut e = Self::zero();
        e.add_term(index, &coeff);
        e
    }

    pub fn from_sparse(v: &[(usize, GaussianRational)]) -> Self {
        let mut e = Self::zero();
        for (i, c) in v {
            e.add_term(*i, c);
        }
        e
    }

    pub fn to_sparse(&self) -> SparseVec {
        self.terms.iter().map(|(i, c)| (*i, c.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, index: usize) -> GaussianRational {
        self.terms.get(&index).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &GaussianRational)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, index: usize, coeff: &GaussianRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            Entry::Vacant(v) => {
                v.insert(coeff.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · other`
    pub fn add_scaled(&mut self, c: &GaussianRational, other: &AlgebraElement) {
        if c.is_zero() {
            return;
        }
        for (i, v) in &other.terms {
            self.add_term(*i, &(c * v));
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut r = self.clone();
        r.add_scaled(&GaussianRational::one(), other);
        r
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut r = self.clone();
        r.add_scaled(&GaussianRational::from_int(-1), other);
        r
    }

    pub fn scale(&self, c: &GaussianRational) -> AlgebraElement {
        if c.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(i, v)| (*i, -v)).collect(),
        }
    }

    /// Coefficient-wise complex conjugate (no change of basis).
    pub fn conj_coeffs(&self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(i, v)| (*i, v.conj())).collect(),
        }
    }

    /// Keeps only the terms whose index satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(usize) -> bool) -> AlgebraElement {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| keep(**i))
                .map(|(i, v)| (*i, v.clone()))
                .collect(),
        }
    }

    /// Re-indexes terms through `f`; terms mapped to `None` are dropped.
    pub fn map_indices(&self, f: impl Fn(usize) -> Option<usize>) -> AlgebraElement {
        let mut r = Self::zero();
        for (i, v) in &self.terms {
            if let Some(j) = f(*i) {
                r.add_term(j, v);
            }
        }
        r
    }
}

impl FromIterator<(usize, GaussianRational)> for AlgebraElement {
    fn from_iter<T: IntoIterator<Item = (usize, GaussianRational)>>(iter: T) -> Self {
        let mut e = Self::zero();
        for (i, c) in iter {
            e.add_term(i, &c);
        }
        e
    }
}
