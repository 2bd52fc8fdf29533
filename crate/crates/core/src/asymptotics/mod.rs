//! Closed-form large-`n` predictions in both phases, evaluated exactly as
//! the asymptotic analysis states them, and the equilibrium-measure
//! machinery for `τ > 1`.

pub mod equilibrium;
pub mod sub;
pub mod sup;
pub mod theorems;

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{GwwError, Result};
use crate::precision::{abs_c, APComplex, APReal};

pub use equilibrium::{JumpReport, Side, SzegoReport};
pub use sub::{phi_sign_probe, sub_geometry, sub_y_predictions, SignProbe, SubGeometry};
pub use sup::{super_geometry, super_y_predictions, SuperGeometry};
pub use theorems::{
    dnu_logd_prediction, free_energy, free_energy_sub, free_energy_super, third_order_gap, thm1_prediction,
    thm2_prediction, FreeEnergy, GapReport,
};

/// Minimum distance from the critical point `τ = 1` for any comparison.
pub const CRITICAL_GAP: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `τ < 1`, ungapped phase.
    Sub,
    /// `τ > 1`, gapped phase with support on an arc.
    Super,
}

impl Regime {
    /// Regime of `τ`, refusing the window `|τ - 1| < 0.1`.
    pub fn classify(tau: f64) -> Result<Regime> {
        if !tau.is_finite() || tau <= 0.0 {
            return Err(GwwError::OutOfRange(format!("τ must be positive, got {tau}")));
        }
        if (tau - 1.0).abs() < CRITICAL_GAP - 1e-12 {
            return Err(GwwError::RegimeGuard(format!(
                "τ = {tau} lies within {CRITICAL_GAP} of the critical point τ = 1"
            )));
        }
        Ok(if tau < 1.0 { Regime::Sub } else { Regime::Super })
    }

    /// Checks the range where the printed formulas are evaluated.
    pub fn check_range(self, tau: f64) -> Result<()> {
        let ok = match self {
            Regime::Sub => tau > 0.05 && tau <= 0.9 + 1e-12,
            Regime::Super => (1.1 - 1e-12..=10.0).contains(&tau),
        };
        if ok {
            Ok(())
        } else {
            Err(GwwError::OutOfRange(format!("τ = {tau} outside the {self:?} range")))
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Sub => "sub",
            Regime::Super => "super",
        }
    }
}

/// Observable compared against a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    LogD,
    DnuLogD,
    Yminus1_11,
    /// `Y21'(0; n+1) / Y21(0; n+1)`.
    RatioY21Next,
    Y12,
    Y11,
    Y22,
    /// `Y11(0; n+1)`.
    Y11Next,
    /// `Y22(0; n+1)`.
    Y22Next,
}

impl Quantity {
    pub const Y_FIELDS: [Quantity; 5] = [
        Quantity::Yminus1_11,
        Quantity::RatioY21Next,
        Quantity::Y12,
        Quantity::Y11,
        Quantity::Y22,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::LogD => "logD",
            Quantity::DnuLogD => "dnu_logD",
            Quantity::Yminus1_11 => "Yminus1_11",
            Quantity::RatioY21Next => "ratio_Y21",
            Quantity::Y12 => "Y12_0",
            Quantity::Y11 => "Y11_0",
            Quantity::Y22 => "Y22_0",
            Quantity::Y11Next => "Y11_0_next",
            Quantity::Y22Next => "Y22_0_next",
        }
    }

    pub fn parse(s: &str) -> Result<Quantity> {
        let all = [
            Quantity::LogD,
            Quantity::DnuLogD,
            Quantity::Yminus1_11,
            Quantity::RatioY21Next,
            Quantity::Y12,
            Quantity::Y11,
            Quantity::Y22,
            Quantity::Y11Next,
            Quantity::Y22Next,
        ];
        all.into_iter()
            .find(|q| q.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| GwwError::Parse(format!("unknown quantity '{s}'")))
    }

    /// Error order attached to the prediction of this quantity.
    pub fn claimed_order(self, regime: Regime) -> ClaimedOrder {
        use Quantity::*;
        match (regime, self) {
            (_, LogD) | (_, DnuLogD) => ClaimedOrder::absolute(-1.0),
            (Regime::Sub, Yminus1_11 | RatioY21Next | Y12) => ClaimedOrder::absolute(-1.5),
            // O(n^{-ν-1}) against a leading term of size n^{-ν-1/2}
            (Regime::Sub, Y11 | Y22 | Y11Next | Y22Next) => ClaimedOrder::relative(-0.5),
            (Regime::Super, Yminus1_11 | RatioY21Next) => ClaimedOrder::absolute(-2.0),
            (Regime::Super, Y12 | Y11 | Y22 | Y11Next | Y22Next) => ClaimedOrder::relative(-2.0),
        }
    }
}

/// Exponent `p` in an error bound `O(n^p)`, measured either absolutely or
/// relative to the size of the prediction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimedOrder {
    pub exponent: f64,
    pub relative: bool,
}

impl ClaimedOrder {
    pub fn absolute(exponent: f64) -> Self {
        ClaimedOrder {
            exponent,
            relative: false,
        }
    }

    pub fn relative(exponent: f64) -> Self {
        ClaimedOrder {
            exponent,
            relative: true,
        }
    }
}

/// One exact-versus-predicted comparison.
#[derive(Clone, Debug)]
pub struct PredictionRow {
    pub n: usize,
    pub tau: APReal,
    pub nu: APComplex,
    pub quantity: Quantity,
    pub exact: APComplex,
    pub predicted: APComplex,
    pub residual: APReal,
    pub claimed_order: ClaimedOrder,
}

impl PredictionRow {
    /// Builds the row; `residual` is `|exact - predicted|`, divided by
    /// `|predicted|` for relative claims.
    pub fn new(
        n: usize,
        tau: &APReal,
        nu: &APComplex,
        quantity: Quantity,
        exact: APComplex,
        predicted: APComplex,
        claimed_order: ClaimedOrder,
    ) -> Self {
        let prec = exact.prec().0.max(predicted.prec().0);
        let mut diff = Complex::with_val(prec, &exact - &predicted);
        if quantity == Quantity::LogD {
            diff = crate::toeplitz::wrap_branch(&diff);
        }
        let mut residual = abs_c(&diff);
        if claimed_order.relative {
            let scale = abs_c(&predicted);
            if !scale.is_zero() {
                residual /= scale;
            }
        }
        PredictionRow {
            n,
            tau: tau.clone(),
            nu: nu.clone(),
            quantity,
            exact,
            predicted,
            residual: Float::with_val(prec, residual),
            claimed_order,
        }
    }
}

/// Predicted values of the Y-observables at size `n`.
#[derive(Clone, Debug)]
pub struct YPrediction {
    pub yminus1_11: APComplex,
    /// `Y21'(0; n+1) / Y21(0; n+1)`.
    pub ratio_y21_next: APComplex,
    pub y12: APComplex,
    pub y11: APComplex,
    pub y22: APComplex,
    pub y11_next: APComplex,
    pub y22_next: APComplex,
}

impl YPrediction {
    pub fn get(&self, q: Quantity) -> Option<&APComplex> {
        match q {
            Quantity::Yminus1_11 => Some(&self.yminus1_11),
            Quantity::RatioY21Next => Some(&self.ratio_y21_next),
            Quantity::Y12 => Some(&self.y12),
            Quantity::Y11 => Some(&self.y11),
            Quantity::Y22 => Some(&self.y22),
            Quantity::Y11Next => Some(&self.y11_next),
            Quantity::Y22Next => Some(&self.y22_next),
            Quantity::LogD | Quantity::DnuLogD => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_guard() {
        assert_eq!(Regime::classify(0.5).unwrap(), Regime::Sub);
        assert_eq!(Regime::classify(2.0).unwrap(), Regime::Super);
        assert!(matches!(Regime::classify(1.0), Err(GwwError::RegimeGuard(_))));
        assert!(matches!(Regime::classify(0.95), Err(GwwError::RegimeGuard(_))));
        assert_eq!(Regime::classify(0.9).unwrap(), Regime::Sub);
        assert_eq!(Regime::classify(1.1).unwrap(), Regime::Super);
    }

    #[test]
    fn quantity_names_round_trip() {
        for q in Quantity::Y_FIELDS {
            assert_eq!(Quantity::parse(q.name()).unwrap(), q);
        }
        assert!(Quantity::parse("nope").is_err());
    }
}
