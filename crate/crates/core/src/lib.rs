//! High-precision engine for the perturbed Gross–Witten–Wadia unitary
//! matrix model.
//!
//! The partition function `Z_{n,ν}(t)` equals the Toeplitz determinant
//! `det(I_{k-j-ν}(t))`. This crate evaluates that determinant and the
//! associated orthogonal-polynomial data at arbitrary precision, evaluates
//! the large-`n` asymptotic formulas in both phases, and compares the two.

pub mod asymptotics;
pub mod error;
pub mod precision;
pub mod special;
pub mod toeplitz;
pub mod verify;

pub use asymptotics::{Quantity, Regime};
pub use error::{GwwError, Result};
pub use precision::{
    with_precision, APComplex, APReal, Agreement, DecimalComplex, DecimalReal, Escalated, PrecisionContext,
};
pub use toeplitz::{log_det, LogDet, ModelParams, OrthoData, YSnapshot};
pub use verify::{run_suite, ComparisonReport, Suite};
