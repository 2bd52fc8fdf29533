//! Numerical check of the ν-differential identity
//!
//! `d/dν log D_n = n Y12'/Y12 - (t/2) d/dν[(Y₋₁)₁₁ + Y21'(0;n+1)/Y21(0;n+1)]
//!                 - (t/2)[Y11(0;n+1) dY22(0;n)/dν + Y22(0;n+1) dY11(0;n)/dν]`
//!
//! where every ν-derivative is taken numerically on data from the engine.

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{GwwError, Result};
use crate::precision::{abs_c, APComplex, APReal, PrecisionContext};
use crate::toeplitz::{op_coefficients, wrap_branch, y_snapshot_from, ModelParams, YSnapshot};

/// How ν-derivatives are formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMethod {
    /// `(f(ν+h) - f(ν-h)) / 2h`, error `O(h²)`.
    Central,
    /// One Richardson level on top of `Central`, error `O(h⁴)`.
    Richardson,
    /// `Im f(ν + ih) / h`; only valid for real ν, where every quantity is
    /// real-analytic in ν.
    ComplexStep,
}

/// The ν-dependent pieces of the identity at a single ν.
#[derive(Clone, Debug)]
struct Pieces {
    log_d: APComplex,
    y12: APComplex,
    drift: APComplex,
    y11: APComplex,
    y22: APComplex,
    y11_next: APComplex,
    y22_next: APComplex,
}

fn pieces(params: &ModelParams, ctx: &PrecisionContext) -> Result<Pieces> {
    let (table, data) = op_coefficients(params, ctx).map_err(|e| match e {
        GwwError::VanishingMinor { k } | GwwError::SingularMatrix { pivot: k } => {
            GwwError::Hypothesis(format!("D_k vanishes at k = {k} near n = {}", params.n))
        }
        other => other,
    })?;
    let a: YSnapshot = y_snapshot_from(&data, &table, params.n, data.prec())?;
    let b: YSnapshot = y_snapshot_from(&data, &table, params.n + 1, data.prec())?;
    Ok(Pieces {
        log_d: data.log_minors[params.n].value(),
        y12: a.y12_0,
        drift: Complex::with_val(ctx.bits, &a.yminus1_11 + &b.ratio_y21),
        y11: a.y11_0,
        y22: a.y22_0,
        y11_next: b.y11_0,
        y22_next: b.y22_0,
    })
}

/// Derivatives of the ν-dependent pieces.
struct Derivs {
    log_d: APComplex,
    y12: APComplex,
    drift: APComplex,
    y11: APComplex,
    y22: APComplex,
}

fn central(plus: &Pieces, minus: &Pieces, h: &APComplex, p: u32) -> Derivs {
    let two_h = Complex::with_val(p, h * 2u32);
    let d = |a: &APComplex, b: &APComplex| Complex::with_val(p, a - b) / &two_h;
    let dlog = wrap_branch(&Complex::with_val(p, &plus.log_d - &minus.log_d)) / &two_h;
    Derivs {
        log_d: dlog,
        y12: d(&plus.y12, &minus.y12),
        drift: d(&plus.drift, &minus.drift),
        y11: d(&plus.y11, &minus.y11),
        y22: d(&plus.y22, &minus.y22),
    }
}

fn central_at(params: &ModelParams, h: &APReal, ctx: &PrecisionContext) -> Result<Derivs> {
    let p = ctx.bits;
    let hc = Complex::with_val(p, h);
    let plus = pieces(&params.with_nu(Complex::with_val(p, &params.nu + &hc)), ctx)?;
    let minus = pieces(&params.with_nu(Complex::with_val(p, &params.nu - &hc)), ctx)?;
    Ok(central(&plus, &minus, &hc, p))
}

fn derivatives(params: &ModelParams, h: &APReal, method: DerivativeMethod, ctx: &PrecisionContext) -> Result<Derivs> {
    let p = ctx.bits;
    match method {
        DerivativeMethod::Central => central_at(params, h, ctx),
        DerivativeMethod::Richardson => {
            let coarse = central_at(params, h, ctx)?;
            let fine = central_at(params, &Float::with_val(p, h / 2u32), ctx)?;
            let r = |f: &APComplex, c: &APComplex| (Complex::with_val(p, f * 4u32) - c) / 3u32;
            Ok(Derivs {
                log_d: r(&fine.log_d, &coarse.log_d),
                y12: r(&fine.y12, &coarse.y12),
                drift: r(&fine.drift, &coarse.drift),
                y11: r(&fine.y11, &coarse.y11),
                y22: r(&fine.y22, &coarse.y22),
            })
        }
        DerivativeMethod::ComplexStep => {
            if !params.nu_is_real() {
                return Err(GwwError::OutOfRange("complex-step derivatives need real ν".into()));
            }
            let shifted = params.with_nu(Complex::with_val(p, (params.nu.real(), h)));
            let f = pieces(&shifted, ctx)?;
            let im = |z: &APComplex| Complex::with_val(p, z.imag() / h);
            Ok(Derivs {
                log_d: im(&f.log_d),
                y12: im(&f.y12),
                drift: im(&f.drift),
                y11: im(&f.y11),
                y22: im(&f.y22),
            })
        }
    }
}

/// Both sides of the identity and their difference.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub lhs: APComplex,
    pub rhs: APComplex,
    pub residual: APReal,
    pub h: APReal,
    pub method: DerivativeMethod,
}

/// Default step `2^{-⌊bits/6⌋}`.
pub fn default_step(ctx: &PrecisionContext) -> APReal {
    Float::with_val(ctx.bits, 1u32) >> (ctx.bits / 6)
}

/// Evaluates both sides of the identity at `params` (size `n`, order `ν`,
/// time `t`). All engine work runs at the working precision of `ctx` so the
/// difference quotients keep `bits` significant bits.
pub fn differential_identity(
    params: &ModelParams,
    ctx: &PrecisionContext,
    h: &APReal,
    method: DerivativeMethod,
) -> Result<IdentityReport> {
    if params.n < 1 {
        return Err(GwwError::OutOfRange("the identity needs n ≥ 1".into()));
    }
    let wctx = ctx.at_bits(ctx.working_bits());
    let p = wctx.bits;
    let params = params.at_bits(p);
    let h = Float::with_val(p, h);
    if h.is_zero() || !h.is_finite() || h.is_sign_negative() {
        return Err(GwwError::OutOfRange(format!("step must be positive, got {h}")));
    }
    let base = pieces(&params, &wctx)?;
    let d = derivatives(&params, &h, method, &wctx)?;

    let half_t = Float::with_val(p, &params.t / 2u32);
    let nf = Float::with_val(p, params.n as u32);
    let mut rhs = Complex::with_val(p, &d.y12 / &base.y12) * &nf;
    rhs -= Complex::with_val(p, &d.drift * &half_t);
    let mut cross = Complex::with_val(p, &base.y11_next * &d.y22);
    cross += Complex::with_val(p, &base.y22_next * &d.y11);
    rhs -= cross * &half_t;
    let residual = abs_c(&Complex::with_val(p, &d.log_d - &rhs));
    Ok(IdentityReport {
        lhs: Complex::with_val(ctx.bits, &d.log_d),
        rhs: Complex::with_val(ctx.bits, &rhs),
        residual: Float::with_val(ctx.bits, residual),
        h: Float::with_val(ctx.bits, &h),
        method,
    })
}

/// Residual of the identity with Richardson-extrapolated central differences.
pub fn check_differential_identity(params: &ModelParams, ctx: &PrecisionContext, h: &APReal) -> Result<APReal> {
    Ok(differential_identity(params, ctx, h, DerivativeMethod::Richardson)?.residual)
}

/// Residuals for plain central differences at `h`, `h/2`, `h/4` and the two
/// successive ratios, which sit near 4 when the residual is pure `O(h²)`
/// differentiation error.
#[derive(Clone, Debug)]
pub struct StepScaling {
    pub residuals: [f64; 3],
    pub ratios: [f64; 2],
}

impl StepScaling {
    pub fn is_quadratic(&self, slack: f64) -> bool {
        self.ratios.iter().all(|r| (r - 4.0).abs() <= slack)
    }
}

pub fn step_scaling(params: &ModelParams, ctx: &PrecisionContext, h: &APReal) -> Result<StepScaling> {
    let mut residuals = [0.0; 3];
    let mut step = h.clone();
    for r in residuals.iter_mut() {
        *r = differential_identity(params, ctx, &step, DerivativeMethod::Central)?
            .residual
            .to_f64();
        step /= 2u32;
    }
    Ok(StepScaling {
        residuals,
        ratios: [residuals[0] / residuals[1], residuals[1] / residuals[2]],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    #[test]
    fn identity_holds_at_reference_points() {
        let c = ctx();
        for &(n, nu, t) in &[(1usize, 0.3, 0.9), (2, 0.1, 0.5), (3, 0.35, 1.7)] {
            let p = ModelParams::from_f64(n, nu, 0.0, t, &c).unwrap();
            let r = check_differential_identity(&p, &c, &(Float::with_val(256, 1u32) >> 40u32)).unwrap();
            assert!(r < 1e-30, "n={n}: {r}");
        }
    }

    #[test]
    fn complex_step_agrees_with_central() {
        let c = ctx();
        let p = ModelParams::from_f64(2, 0.0, 0.0, 1.3, &c).unwrap();
        let cs = differential_identity(
            &p,
            &c,
            &(Float::with_val(256, 1u32) >> 100u32),
            DerivativeMethod::ComplexStep,
        )
        .unwrap();
        assert!(cs.residual < 1e-50, "{}", cs.residual);
        let ce = differential_identity(&p, &c, &default_step(&c), DerivativeMethod::Richardson).unwrap();
        assert!(abs_c(&Complex::with_val(256, &cs.lhs - &ce.lhs)) < 1e-30);
        let complex_nu = ModelParams::from_f64(2, 0.2, 0.1, 1.3, &c).unwrap();
        assert!(differential_identity(&complex_nu, &c, &default_step(&c), DerivativeMethod::ComplexStep).is_err());
    }

    #[test]
    fn residual_is_second_order_in_h() {
        let c = ctx();
        let p = ModelParams::from_f64(3, 0.35, 0.0, 1.7, &c).unwrap();
        let s = step_scaling(&p, &c, &(Float::with_val(256, 1u32) >> 20u32)).unwrap();
        assert!(s.is_quadratic(1.0), "{s:?}");
    }

    #[test]
    fn complex_order_identity() {
        let c = ctx();
        let p = ModelParams::from_f64(2, 0.3, 0.2, 1.1, &c).unwrap();
        let r = check_differential_identity(&p, &c, &default_step(&c)).unwrap();
        assert!(r < 1e-30, "{r}");
    }
}
