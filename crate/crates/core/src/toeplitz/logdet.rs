use rug::float::Constant;
use rug::{Complex, Float};

use super::lu::{lu_pivoted, CMatrix};
use super::params::ModelParams;
use crate::error::{GwwError, Result};
use crate::precision::{agreeing_digits, with_precision, APComplex, APReal, Agreement, Escalated, PrecisionContext};
use crate::special::{MomentCache, MomentTable};

/// `log D` as modulus and an argument accumulated pivot by pivot (never
/// reduced modulo 2π).
#[derive(Clone, Debug)]
pub struct LogDet {
    pub log_abs: APReal,
    pub arg: APReal,
}

impl LogDet {
    pub fn zero(prec: u32) -> Self {
        LogDet {
            log_abs: Float::with_val(prec, 0u32),
            arg: Float::with_val(prec, 0u32),
        }
    }

    pub fn value(&self) -> APComplex {
        Complex::with_val(self.log_abs.prec(), (&self.log_abs, &self.arg))
    }

    /// Adds `log z` for one pivot, choosing the principal argument.
    pub fn push_factor(&mut self, z: &APComplex) {
        let p = self.log_abs.prec();
        let abs = Float::with_val(p, z.abs_ref());
        self.log_abs += abs.ln();
        self.arg += Float::with_val(p, z.arg_ref());
    }
}

impl LogDet {
    /// Copy rounded to `bits`.
    pub fn rounded(&self, bits: u32) -> Self {
        LogDet {
            log_abs: Float::with_val(bits, &self.log_abs),
            arg: Float::with_val(bits, &self.arg),
        }
    }
}

/// Bits lost to conditioning in the Toeplitz elimination. The symbol of the
/// matrix spans roughly `e^{-t}` to `e^{t}`, so pivots can fall to `e^{-2t}`
/// times the largest entry and elimination cancels about `2t / ln 2` bits.
pub fn conditioning_bits(t: &APReal) -> u32 {
    let t = t.to_f64().abs();
    if t.is_finite() {
        (2.0 * t / std::f64::consts::LN_2).ceil() as u32
    } else {
        0
    }
}

/// Context the engine runs at so that results keep `ctx.bits` bits.
pub fn engine_context(ctx: &PrecisionContext, t: &APReal) -> PrecisionContext {
    ctx.at_bits(ctx.bits + conditioning_bits(t))
}

impl Agreement for LogDet {
    fn agreement_digits(&self, other: &Self) -> u32 {
        agreeing_digits(&self.value(), &other.value())
    }
}

/// Reduces the imaginary part of `z` into `(-π, π]`. Log-determinants from
/// different routes may differ by `2πik`; comparisons go through this.
pub fn wrap_branch(z: &APComplex) -> APComplex {
    let p = z.prec().0;
    let pi = Float::with_val(p, Constant::Pi);
    let two_pi = Float::with_val(p, &pi * 2u32);
    let mut out = z.clone();
    let turns = Float::with_val(p, out.imag() / &two_pi).round();
    *out.mut_imag() -= turns * &two_pi;
    if *out.imag() <= -Float::with_val(p, &pi) {
        *out.mut_imag() += &two_pi;
    }
    out
}

/// `log D_n` from an LU with partial pivoting over a prepared moment table.
pub fn log_det_from_table(table: &MomentTable, n: usize, ctx: &PrecisionContext) -> Result<LogDet> {
    if !table.covers(n.saturating_sub(1)) {
        return Err(GwwError::OutOfRange(format!(
            "moment table {}..={} does not cover |k| <= {}",
            table.k_min,
            table.k_max(),
            n - 1
        )));
    }
    let a = CMatrix::toeplitz(table, n);
    let f = lu_pivoted(a, ctx)?;
    let mut ld = LogDet::zero(ctx.bits);
    for k in 0..n {
        ld.push_factor(f.lu.get(k, k));
    }
    if f.swaps % 2 == 1 {
        ld.arg += ctx.pi();
    }
    Ok(ld)
}

pub fn log_det(params: &ModelParams, ctx: &PrecisionContext) -> Result<LogDet> {
    log_det_cached(params, ctx, None)
}

pub fn log_det_cached(params: &ModelParams, ctx: &PrecisionContext, cache: Option<&MomentCache>) -> Result<LogDet> {
    let e = engine_context(ctx, &params.t);
    let p = params.at_bits(e.bits);
    let table = MomentTable::symmetric(&p.nu, &p.t, p.n - 1, &e, cache)?;
    Ok(log_det_from_table(&table, p.n, &e)?.rounded(ctx.bits))
}

/// Outcome of [`log_det_resilient`]: the value and the `t` actually used.
#[derive(Clone, Debug)]
pub struct ResilientLogDet {
    pub log_det: LogDet,
    pub t_used: APReal,
    /// `Some(δ)` when `t` had to be moved by `δ` off an isolated zero of `D`.
    pub perturbation: Option<APReal>,
}

/// Like [`log_det`], but on a numerically singular matrix retries once with
/// `t + 2^{-bits/2}` and reports the shift.
pub fn log_det_resilient(
    params: &ModelParams,
    ctx: &PrecisionContext,
    cache: Option<&MomentCache>,
) -> Result<ResilientLogDet> {
    match log_det_cached(params, ctx, cache) {
        Ok(ld) => Ok(ResilientLogDet {
            log_det: ld,
            t_used: params.t.clone(),
            perturbation: None,
        }),
        Err(GwwError::SingularMatrix { .. }) => {
            let delta = Float::with_val(ctx.bits, 1u32) >> (ctx.bits / 2);
            let t = Float::with_val(ctx.bits, &params.t + &delta);
            let moved = params.with_t(t.clone());
            let ld = log_det_cached(&moved, ctx, cache)?;
            Ok(ResilientLogDet {
                log_det: ld,
                t_used: t,
                perturbation: Some(delta),
            })
        }
        Err(e) => Err(e),
    }
}

/// [`log_det`] under precision escalation.
pub fn log_det_escalated(
    params: &ModelParams,
    ctx: &PrecisionContext,
    cache: Option<&MomentCache>,
) -> Result<Escalated<LogDet>> {
    with_precision(ctx, |c| log_det_cached(params, c, cache))
}
