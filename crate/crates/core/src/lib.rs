//! Mixed discriminants: exact evaluation at small scale and quasi-polynomial
//! approximation of their logarithms inside zero-free regions.
//!
//! The approximation scheme is the same throughout. A univariate polynomial
//! `g` with no zeros in a disc of radius `β > 1` is expanded around 0, the
//! Taylor coefficients of `ln g` are recovered from those of `g`, and the
//! truncated series is evaluated at 1. The truncation error of degree `m` is
//! at most `deg g / (β^m (β - 1) (m + 1))`.
//!
//! * [`polydisc`]: `D(I + z_1 Q_1, ..., I + z_n Q_n)` with `‖Q_k‖ <= γ0`.
//! * [`stochastic`]: doubly stochastic tuples, scaling, `D(I + z Q_k)` for
//!   `|z| < α0 n / 4`, and the contracted core.
//! * [`minors`]: `Σ_S (det B_S)^m` for `‖B‖ < 1`.
//! * [`charpoly`]: mixed characteristic polynomials and the star product.
//! * [`exact`]: brute-force oracles for all of the above.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charpoly;
pub mod constants;
pub mod derivatives;
pub mod error;
pub mod exact;
pub mod gen;
pub mod limits;
pub mod matrix;
pub mod minors;
pub mod polydisc;
pub mod stochastic;
pub mod sum;
pub mod taylor;

mod subsets;
#[cfg(test)]
mod testutil;

pub use constants::{constants, StabilityConstants, GAMMA0};
pub use error::{Error, Result};
pub use limits::Limits;
pub use matrix::{ComplexMatrix, MatrixTuple, SquareMatrix, SymmetricMatrix};
pub use num_complex::Complex64;
pub use taylor::{ApproxResult, DerivativeSequence};
