use rayon::prelude::*;
use rug::{Complex, Float};

use crate::asymptotics::{
    dnu_logd_prediction, sub_y_predictions, super_y_predictions, thm1_prediction, thm2_prediction, ClaimedOrder,
    PredictionRow, Quantity, Regime, YPrediction,
};
use crate::error::{GwwError, Result};
use crate::precision::{abs_c, APComplex, APReal, PrecisionContext};
use crate::toeplitz::{log_det, wrap_branch, y_snapshot_pair, ModelParams, YSnapshot};

/// Smallest and largest `n` accepted by a study.
pub const N_RANGE: (usize, usize) = (8, 128);

/// Log-log RMS above which the smallest `n` is treated as pre-asymptotic.
pub const PRE_ASYMPTOTIC_RMS: f64 = 0.1;

/// A fitted order better than claimed by more than this is flagged.
pub const SUPERCONVERGENCE_MARGIN: f64 = 1.0;

/// Residuals of one quantity over a list of sizes and the fitted decay order.
#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub quantity: Quantity,
    pub regime: Regime,
    pub nu: APComplex,
    pub tau: APReal,
    pub rows: Vec<PredictionRow>,
    pub claimed_order: ClaimedOrder,
    /// Least-squares slope of `log residual` against `log n`; `None` when
    /// fewer than two sizes survive saturation.
    pub fitted_order: Option<f64>,
    /// RMS deviation of the fit in log-log coordinates.
    pub fit_rms: f64,
    /// Sizes that entered the final fit.
    pub fit_ns: Vec<usize>,
    /// Sizes whose residual is at working precision.
    pub saturated: Vec<usize>,
    /// Smallest size, when it was dropped as pre-asymptotic.
    pub pre_asymptotic: Option<usize>,
    /// Number of increases in the residual sequence.
    pub inversions: usize,
    pub superconvergent: bool,
    /// Allowed `|fitted - claimed|`.
    pub order_tolerance: f64,
}

impl ConvergenceStudy {
    pub fn monotone(&self) -> bool {
        self.inversions <= 1
    }

    pub fn order_ok(&self) -> bool {
        self.fitted_order
            .map(|f| (f - self.claimed_order.exponent).abs() <= self.order_tolerance)
            .unwrap_or(false)
    }

    pub fn passed(&self) -> bool {
        self.order_ok() && self.monotone() && !self.superconvergent
    }

    /// One-line human summary.
    pub fn verdict(&self) -> String {
        let fitted = self
            .fitted_order
            .map(|f| format!("{f:.3}"))
            .unwrap_or_else(|| "n/a".into());
        let mut s = format!(
            "{} [{}]: fitted order {} vs claimed {}{} ± {}",
            self.quantity.name(),
            self.regime.name(),
            fitted,
            self.claimed_order.exponent,
            if self.claimed_order.relative { " (relative)" } else { "" },
            self.order_tolerance
        );
        if !self.monotone() {
            s.push_str(&format!("; {} inversions", self.inversions));
        }
        if self.superconvergent {
            s.push_str("; superconvergence — check test wiring");
        }
        if !self.saturated.is_empty() {
            s.push_str(&format!("; saturated at n = {:?}", self.saturated));
        }
        if let Some(n) = self.pre_asymptotic {
            s.push_str(&format!("; n = {n} excluded as pre-asymptotic"));
        }
        s
    }
}

/// Tolerance on the fitted order used when none is given.
pub fn default_order_tolerance(q: Quantity) -> f64 {
    match q {
        Quantity::LogD | Quantity::DnuLogD => 0.35,
        _ => 0.5,
    }
}

/// Least-squares line through `(x, y)`; returns slope and RMS deviation.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rms = (x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - icpt - slope * a).powi(2))
        .sum::<f64>()
        / n as f64)
        .sqrt();
    Some((slope, rms))
}

fn validate(regime: Regime, tau: &APReal, n_list: &[usize]) -> Result<()> {
    let found = Regime::classify(tau.to_f64())?;
    if found != regime {
        return Err(GwwError::OutOfRange(format!(
            "τ = {} belongs to the {} regime, not {}",
            tau.to_f64(),
            found.name(),
            regime.name()
        )));
    }
    regime.check_range(tau.to_f64())?;
    if n_list.len() < 4 {
        return Err(GwwError::OutOfRange("a study needs at least four sizes".into()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GwwError::OutOfRange("sizes must be strictly increasing".into()));
    }
    if n_list.iter().any(|&n| n < N_RANGE.0 || n > N_RANGE.1) {
        return Err(GwwError::OutOfRange(format!(
            "sizes must lie in {}..={}",
            N_RANGE.0, N_RANGE.1
        )));
    }
    Ok(())
}

fn y_exact(q: Quantity, at_n: &YSnapshot, at_next: &YSnapshot) -> Option<APComplex> {
    Some(match q {
        Quantity::Yminus1_11 => at_n.yminus1_11.clone(),
        Quantity::RatioY21Next => at_next.ratio_y21.clone(),
        Quantity::Y12 => at_n.y12_0.clone(),
        Quantity::Y11 => at_n.y11_0.clone(),
        Quantity::Y22 => at_n.y22_0.clone(),
        Quantity::Y11Next => at_next.y11_0.clone(),
        Quantity::Y22Next => at_next.y22_0.clone(),
        Quantity::LogD | Quantity::DnuLogD => return None,
    })
}

/// `d/dν log D_n` by Richardson-extrapolated central differences at the
/// working precision.
pub fn dnu_log_det(params: &ModelParams, ctx: &PrecisionContext) -> Result<APComplex> {
    let w = ctx.at_bits(ctx.working_bits());
    let p = w.bits;
    let params = params.at_bits(p);
    let h = Float::with_val(p, 1u32) >> (ctx.bits / 6);
    let quotient = |h: &APReal| -> Result<APComplex> {
        let hc = Complex::with_val(p, h);
        let a = log_det(&params.with_nu(Complex::with_val(p, &params.nu + &hc)), &w)?.value();
        let b = log_det(&params.with_nu(Complex::with_val(p, &params.nu - &hc)), &w)?.value();
        Ok(wrap_branch(&Complex::with_val(p, &a - &b)) / (hc * 2u32))
    };
    let coarse = quotient(&h)?;
    let fine = quotient(&Float::with_val(p, &h / 2u32))?;
    let r = (fine * 4u32 - coarse) / 3u32;
    Ok(Complex::with_val(ctx.bits, r))
}

/// Exact and predicted values of each requested quantity at size `n`.
fn rows_at(
    quantities: &[Quantity],
    regime: Regime,
    nu: &APComplex,
    tau: &APReal,
    n: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<PredictionRow>> {
    let params = ModelParams::from_tau(n, nu.clone(), tau, ctx)?;
    let mut rows = Vec::with_capacity(quantities.len());
    let needs_y = quantities
        .iter()
        .any(|q| !matches!(q, Quantity::LogD | Quantity::DnuLogD));
    let ys: Option<(YSnapshot, YSnapshot, YPrediction)> = if needs_y {
        let (a, b) = y_snapshot_pair(&params, ctx, None)?;
        let pred = match regime {
            Regime::Sub => sub_y_predictions(n, nu, tau, ctx)?,
            Regime::Super => super_y_predictions(n, nu, tau, ctx)?,
        };
        Some((a, b, pred))
    } else {
        None
    };
    for &q in quantities {
        let (exact, predicted) = match q {
            Quantity::LogD => {
                let exact = log_det(&params, ctx)?.value();
                let pred = match regime {
                    Regime::Sub => thm1_prediction(n, nu, tau, true, ctx)?,
                    Regime::Super => thm2_prediction(n, nu, tau, ctx)?,
                };
                (exact, pred)
            }
            Quantity::DnuLogD => (
                dnu_log_det(&params, ctx)?,
                dnu_logd_prediction(n, nu, tau, regime, ctx)?,
            ),
            _ => {
                let (a, b, pred) = ys.as_ref().expect("snapshots computed for Y quantities");
                let exact = y_exact(q, a, b).expect("Y quantity");
                (exact, pred.get(q).expect("Y quantity").clone())
            }
        };
        rows.push(PredictionRow::new(
            n,
            tau,
            nu,
            q,
            exact,
            predicted,
            q.claimed_order(regime),
        ));
    }
    Ok(rows)
}

fn finish(
    quantity: Quantity,
    regime: Regime,
    nu: &APComplex,
    tau: &APReal,
    rows: Vec<PredictionRow>,
    ctx: &PrecisionContext,
) -> ConvergenceStudy {
    let claimed_order = quantity.claimed_order(regime);
    let floor = ctx.tolerance(32);
    let mut saturated = Vec::new();
    let mut pts: Vec<(usize, f64, f64)> = Vec::new();
    for r in &rows {
        let scale = if claimed_order.relative {
            Float::with_val(ctx.bits, 1u32)
        } else {
            let s = abs_c(&r.predicted);
            if s > 1 {
                s
            } else {
                Float::with_val(ctx.bits, 1u32)
            }
        };
        let limit = Float::with_val(ctx.bits, &floor * &scale);
        if r.residual <= limit {
            saturated.push(r.n);
        } else {
            pts.push((
                r.n,
                (r.n as f64).ln(),
                crate::precision::log10_abs(&r.residual) * std::f64::consts::LN_10,
            ));
        }
    }
    let fit = |pts: &[(usize, f64, f64)]| {
        let x: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let y: Vec<f64> = pts.iter().map(|p| p.2).collect();
        least_squares_slope(&x, &y)
    };
    let mut pre_asymptotic = None;
    let mut result = fit(&pts);
    if let Some((_, rms)) = result {
        if rms > PRE_ASYMPTOTIC_RMS && pts.len() >= 4 {
            pre_asymptotic = Some(pts[0].0);
            pts.remove(0);
            result = fit(&pts);
        }
    }
    let residuals: Vec<f64> = rows.iter().map(|r| r.residual.to_f64()).collect();
    let inversions = residuals.windows(2).filter(|w| w[1] > w[0]).count();
    let fitted_order = result.map(|r| r.0);
    let superconvergent = fitted_order
        .map(|f| f < claimed_order.exponent - SUPERCONVERGENCE_MARGIN)
        .unwrap_or(false);
    ConvergenceStudy {
        quantity,
        regime,
        nu: nu.clone(),
        tau: tau.clone(),
        rows,
        claimed_order,
        fitted_order,
        fit_rms: result.map(|r| r.1).unwrap_or(f64::NAN),
        fit_ns: pts.iter().map(|p| p.0).collect(),
        saturated,
        pre_asymptotic,
        inversions,
        superconvergent,
        order_tolerance: default_order_tolerance(quantity),
    }
}

/// Studies for several quantities sharing the engine work at each `n`.
/// Sizes are processed in parallel; rows come back in `n_list` order.
pub fn convergence_studies(
    quantities: &[Quantity],
    regime: Regime,
    nu: &APComplex,
    tau: &APReal,
    n_list: &[usize],
    ctx: &PrecisionContext,
) -> Result<Vec<ConvergenceStudy>> {
    validate(regime, tau, n_list)?;
    let per_n: Vec<Vec<PredictionRow>> = n_list
        .par_iter()
        .map(|&n| rows_at(quantities, regime, nu, tau, n, ctx))
        .collect::<Result<_>>()?;
    Ok(quantities
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            let rows = per_n.iter().map(|r| r[i].clone()).collect();
            finish(q, regime, nu, tau, rows, ctx)
        })
        .collect())
}

pub fn convergence_study(
    quantity: Quantity,
    regime: Regime,
    nu: &APComplex,
    tau: &APReal,
    n_list: &[usize],
    ctx: &PrecisionContext,
) -> Result<ConvergenceStudy> {
    Ok(convergence_studies(&[quantity], regime, nu, tau, n_list, ctx)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let x: Vec<f64> = [8.0f64, 16.0, 32.0, 64.0].iter().map(|v| v.ln()).collect();
        let y: Vec<f64> = x.iter().map(|v| -1.5 * v + 0.3).collect();
        let (s, rms) = least_squares_slope(&x, &y).unwrap();
        assert!((s + 1.5).abs() < 1e-12 && rms < 1e-12);
        assert!(least_squares_slope(&x[..1], &y[..1]).is_none());
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = PrecisionContext::new(128).unwrap();
        let nu = c.complex(0.3f64);
        let tau = c.real(0.5f64);
        let q = Quantity::LogD;
        assert!(convergence_study(q, Regime::Sub, &nu, &tau, &[8, 16, 24], &c).is_err());
        assert!(convergence_study(q, Regime::Sub, &nu, &tau, &[8, 16, 16, 24], &c).is_err());
        assert!(convergence_study(q, Regime::Sub, &nu, &tau, &[4, 8, 16, 24], &c).is_err());
        assert!(convergence_study(q, Regime::Super, &nu, &tau, &[8, 12, 16, 24], &c).is_err());
        assert!(matches!(
            convergence_study(q, Regime::Sub, &nu, &c.real(1.0f64), &[8, 12, 16, 24], &c),
            Err(GwwError::RegimeGuard(_))
        ));
    }

    #[test]
    fn small_sub_study_decays() {
        let c = PrecisionContext::new(256).unwrap();
        let s = convergence_study(
            Quantity::LogD,
            Regime::Sub,
            &c.complex(0.3f64),
            &c.real(0.5f64),
            &[8, 12, 16, 24],
            &c,
        )
        .unwrap();
        let f = s.fitted_order.unwrap();
        assert!(f < -0.5 && f > -1.6, "{}", s.verdict());
        assert_eq!(s.rows.len(), 4);
    }
}
