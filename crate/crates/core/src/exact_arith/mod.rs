//! Exact scalars over `ℚ(i)` and sparse linear algebra on top of them.

mod linalg;
mod scalar;

pub use linalg::{
    canonicalize, dense_to_sparse, is_fixed, rank_of, solve_semilinear_fixed_points,
    AntilinearInvolution, Echelon, SparseMatrix, SparseVec,
};
pub use scalar::{GaussianRational, Rational};
