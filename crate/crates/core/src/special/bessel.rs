//! Modified Bessel function `I_α(t)` of complex order by its power series
//! `(t/2)^α Σ_j (t²/4)^j / (j! Γ(j+α+1))` (DLMF 10.25.2).

use rug::{Complex, Float};
use serde::Serialize;

use super::gamma::{is_nonpositive_integer, recip_gamma};
use crate::error::{GwwError, Result};
use crate::precision::{APComplex, APReal, PrecisionContext};

#[derive(Clone, Debug, Serialize)]
pub struct BesselSeriesReport {
    #[serde(skip)]
    pub value: APComplex,
    pub terms_used: usize,
    #[serde(skip)]
    pub max_term_magnitude: APReal,
    pub cancellation_bits: i64,
    /// Mantissa size of the run that produced `value`.
    pub working_bits: u32,
}

/// Extra attempts with a larger working precision when cancellation eats
/// into the guard bits.
const MAX_ESCALATIONS: u32 = 4;

fn is_integer_order(alpha: &APComplex) -> bool {
    alpha.imag().is_zero() && alpha.real().is_integer()
}

pub fn bessel_i(alpha: &APComplex, t: &APReal, ctx: &PrecisionContext) -> Result<BesselSeriesReport> {
    if t.is_sign_negative() && !t.is_zero() {
        return Err(GwwError::OutOfRange(format!("bessel_i needs t >= 0, got {t}")));
    }
    if t.is_zero() {
        return bessel_at_zero(alpha, ctx);
    }
    // For α = -m the terms j < m carry 1/Γ(j-m+1) = 0; what is left is the
    // series of I_m, so evaluate that directly.
    let order = if is_nonpositive_integer(alpha) {
        Complex::with_val(ctx.bits, -alpha)
    } else {
        alpha.clone()
    };
    let mut wp = ctx.working_bits();
    for _ in 0..=MAX_ESCALATIONS {
        let report = series(&order, t, ctx, wp);
        let needed = i64::from(ctx.bits) + report.cancellation_bits.max(0) + 8;
        if needed <= i64::from(wp) {
            return Ok(report);
        }
        wp = (needed as u32).max(wp + 32) + ctx.guard_bits;
    }
    Err(GwwError::PrecisionEscalation {
        doublings: MAX_ESCALATIONS,
        best_digits: 0,
        needed: ctx.target_digits,
    })
}

fn bessel_at_zero(alpha: &APComplex, ctx: &PrecisionContext) -> Result<BesselSeriesReport> {
    let value = if alpha.real().is_zero() && alpha.imag().is_zero() {
        Complex::with_val(ctx.bits, 1u32)
    } else if is_integer_order(alpha) || *alpha.real() > 0 {
        Complex::with_val(ctx.bits, 0u32)
    } else {
        return Err(GwwError::OutOfRange(
            "I_α(0) is unbounded for Re α <= 0 and non-integer α".into(),
        ));
    };
    let max = Float::with_val(ctx.bits, value.abs_ref());
    Ok(BesselSeriesReport {
        value,
        terms_used: 1,
        max_term_magnitude: max,
        cancellation_bits: 0,
        working_bits: ctx.bits,
    })
}

fn series(alpha: &APComplex, t: &APReal, ctx: &PrecisionContext, wp: u32) -> BesselSeriesReport {
    let wctx = ctx.at_bits(wp);
    let a = Complex::with_val(wp, alpha);
    let tw = Float::with_val(wp, t);
    let half_t = Float::with_val(wp, &tw / 2u32);
    let q = Float::with_val(wp, half_t.square_ref());
    let ap1 = Complex::with_val(wp, &a + 1u32);
    let lead = Complex::with_val(wp, &a * Float::with_val(wp, half_t.ln_ref())).exp() * recip_gamma(&ap1, &wctx);

    let t_half = t.to_f64() / 2.0;
    let re_a = a.real().to_f64();
    let mut term = Complex::with_val(wp, 1u32);
    let mut sum = Complex::with_val(wp, 0u32);
    let mut max_term = Float::with_val(64, 1u32);
    let mut j: u64 = 0;
    loop {
        sum += &term;
        let mag = Float::with_val(64, term.abs_ref());
        if mag > max_term {
            max_term = mag.clone();
        }
        let jf = j as f64;
        if jf > t_half && jf + re_a + 1.0 > 0.0 {
            let s = Float::with_val(64, sum.abs_ref());
            if mag.is_zero() || (s.get_exp().unwrap_or(0) - mag.get_exp().unwrap_or(0)) > wp as i32 + 2 {
                break;
            }
        }
        let denom = Complex::with_val(wp, &a + (j + 1)) * (j + 1);
        term *= &q;
        term /= denom;
        j += 1;
    }
    let value = Complex::with_val(wp, &sum * &lead);
    let lead_abs = Float::with_val(64, lead.abs_ref());
    let max_total = Float::with_val(64, &max_term * &lead_abs);
    let value_abs = Float::with_val(64, value.abs_ref());
    let cancellation_bits = if value_abs.is_zero() {
        i64::from(wp)
    } else {
        let r = Float::with_val(64, &max_total / &value_abs);
        Float::with_val(64, r.log2_ref()).to_f64().ceil() as i64
    };
    BesselSeriesReport {
        value: Complex::with_val(ctx.bits, value),
        terms_used: j as usize + 1,
        max_term_magnitude: Float::with_val(ctx.bits, max_total),
        cancellation_bits,
        working_bits: wp,
    }
}
