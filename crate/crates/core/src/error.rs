use thiserror::Error;

/// Every failure the engine can report. Messages are stable because the CLI
/// maps variants onto exit codes and tests match on the wording.
#[derive(Debug, Error)]
pub enum GwwError {
    #[error(
        "precision escalation failed: best agreement {best_digits} digits after {doublings} doublings, needed {needed}"
    )]
    PrecisionEscalation {
        doublings: u32,
        best_digits: u32,
        needed: u32,
    },
    #[error("invalid precision context: {0}")]
    InvalidPrecision(String),
    #[error("gamma pole at z = {0}")]
    GammaPole(String),
    #[error("barnes path error: {0}")]
    BarnesPath(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("contour truncation too small: {0}")]
    ContourTruncation(String),
    #[error("determinant numerically zero at pivot {pivot} — escalate precision or report D=0")]
    SingularMatrix { pivot: usize },
    #[error("vanishing intermediate determinant D_{k}")]
    VanishingMinor { k: usize },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("regime guard: {0}")]
    RegimeGuard(String),
    #[error("point lies on a cut: {0}")]
    OnCut(String),
    #[error("hypothesis failure: {0}")]
    Hypothesis(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GwwError>;
