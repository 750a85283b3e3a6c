//! Exact computation of Tanaka prolongations of totally nondegenerate CR
//! symbols, built on Hall bases of free nilpotent Lie algebras.

pub mod error;
pub mod exact_arith;
pub mod cli;
pub mod cr_universal;
pub mod free_lie;
pub mod prolongation;
pub mod symbol;
pub mod verify;

pub use error::{Error, Result};
