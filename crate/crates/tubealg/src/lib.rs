//! Exact-arithmetic computational toolkit for the annular and tube algebras
//! of Temperley-Lieb-Jones categories and finite-group graded vector spaces.
//!
//! The core objects are rectangular Temperley-Lieb diagrams ([`tl`]), affine
//! annular diagrams and the centralizer corner algebras ([`annular`]),
//! induced lowest-weight modules with their contraction coefficients
//! ([`lowweight`]), numeric character spectra ([`spectrum`]), the tube
//! algebra of a finite group ([`gvec`]), and weight-zero annular states with
//! the approximation-property machinery ([`states`]).
//!
//! All structural computations are exact over rational Laurent polynomials;
//! floating point only enters in eigenvalue checks and limit evaluations.

pub mod error;
pub mod scalar;
pub mod annular;
pub mod tl;

pub use error::{Result, TubeError};
