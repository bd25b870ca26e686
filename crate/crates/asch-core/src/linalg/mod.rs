//! Arbitrary-precision rational matrix kernels: products, inverses,
//! characteristic polynomials, integer spectra and simultaneous eigenspace
//! refinement for commuting families.
//!
//! Only integral spectra are supported; a matrix with irrational (or merely
//! rational) eigenvalues is rejected with [`LinalgError::NonIntegralSpectrum`].

mod eigen;
mod poly;
mod rational;

pub use eigen::{
    char_poly, common_eigenbasis, integer_eigenvalues, kernel, rat_inverse, JointEigenvector,
    LinalgError,
};
pub use poly::IntPolynomial;
pub use rational::{format_rat, parse_rat, rat, rat_int, MatrixParseError, Rat, RationalMatrix};
