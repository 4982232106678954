//! Symbolic matrix products with real or non-negative spectra.
//!
//! A word such as `A B B^T A^T` denotes a product of matrix variables, some
//! of which may be constrained to be symmetric. The [`decider`] answers, in
//! quadratic time, whether every real evaluation of the word has only real
//! eigenvalues (or only real non-negative ones). When the answer is no, the
//! [`witness`] module produces small explicit matrices with a non-real
//! eigenvalue. The [`graphs`] and [`positivity`] modules reproduce the
//! homomorphism-density machinery behind the characterization: colored
//! cycles, rigid graph gadgets, transfer matrices and weighted
//! counterexample targets.

pub mod cycle;
pub mod decider;
pub mod error;
pub mod graphs;
pub mod linalg;
pub mod positivity;
pub mod scalar;
pub mod witness;
pub mod word;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use scalar::Scalar;

/// Real double-precision matrix.
pub type RealMatrix = Matrix<f64>;
/// Complex double-precision matrix.
pub type ComplexMatrix = Matrix<num_complex::Complex64>;
/// Exact rational matrix.
pub type ExactMatrix = Matrix<num_rational::BigRational>;
