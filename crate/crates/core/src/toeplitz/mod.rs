//! Toeplitz determinants of the Bessel moments, the bi-orthogonal
//! polynomials they generate and the Riemann–Hilbert matrix `Y` at the origin.

pub mod logdet;
pub mod lu;
pub mod ortho;
pub mod params;
pub mod partition;
pub mod ysnap;

pub use logdet::{
    conditioning_bits, engine_context, log_det, log_det_cached, log_det_escalated, log_det_from_table,
    log_det_resilient, wrap_branch, LogDet, ResilientLogDet,
};
pub use lu::{cofactor_determinant, lu_pivoted, lu_unpivoted, CMatrix, PivotedLu, UnpivotedLu};
pub use ortho::{h_sequence, horner, op_coefficients, op_coefficients_cached, HSequence, OrthoData};
pub use params::ModelParams;
pub use partition::partition_direct;
pub use ysnap::{y_snapshot, y_snapshot_cached, y_snapshot_from, y_snapshot_pair, YSnapshot};
