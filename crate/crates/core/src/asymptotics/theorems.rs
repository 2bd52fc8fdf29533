use rug::float::Constant;
use rug::{Complex, Float};

use super::sub::sub_geometry;
use super::Regime;
use crate::error::{GwwError, Result};
use crate::precision::{APComplex, APReal, PrecisionContext};
use crate::special::{digamma, log_barnes_g, named_constant};

fn is_positive_integer(nu: &APComplex) -> bool {
    nu.imag().is_zero() && nu.real().is_integer() && *nu.real() > 0
}

/// `log D_{n,ν}(nτ)` for `τ < 1`:
///
/// `n²τ²/4 + nν(log((1+√(1-τ²))/τ) - √(1-τ²)) - (ν²/2) log n + (ν/2) log 2π
///  - (ν²/4) log(1-τ²) + log G(1-ν)`.
///
/// At positive integer `ν` the formula is singular through `G(1-ν) = 0`; with
/// `symmetry_fallback` it is evaluated at `-ν` instead, which is legitimate
/// because `D_{n,ν} = D_{n,-ν}` for integer `ν`.
pub fn thm1_prediction(
    n: usize,
    nu: &APComplex,
    tau: &APReal,
    symmetry_fallback: bool,
    ctx: &PrecisionContext,
) -> Result<APComplex> {
    Regime::Sub.check_range(tau.to_f64())?;
    let p = ctx.working_bits();
    let mut nu = Complex::with_val(p, nu);
    if is_positive_integer(&nu) {
        if !symmetry_fallback {
            return Err(GwwError::GammaPole(format!(
                "log G(1-ν) at positive integer ν = {}",
                nu.real()
            )));
        }
        nu = -nu;
    }
    let tau = Float::with_val(p, tau);
    let nf = Float::with_val(p, n as u32);
    let s = Float::with_val(p, 1u32 - Float::with_val(p, tau.square_ref())).sqrt();
    let lead = Float::with_val(p, &nf * &tau).square() / 4u32;
    let lin = (Float::with_val(p, 1u32 + &s) / &tau).ln() - &s;
    let nu2 = Complex::with_val(p, nu.square_ref());
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let one_minus_tau2 = Float::with_val(p, 1u32 - Float::with_val(p, tau.square_ref()));

    let mut out = Complex::with_val(p, &nu * &nf) * lin;
    out += lead;
    out -= Complex::with_val(p, &nu2 / 2u32) * Float::with_val(p, nf.ln_ref());
    out += Complex::with_val(p, &nu / 2u32) * two_pi.ln();
    out -= Complex::with_val(p, &nu2 / 4u32) * one_minus_tau2.ln();
    out += log_barnes_g(&-nu, &ctx.at_bits(p))?;
    Ok(Complex::with_val(ctx.bits, out))
}

/// `log D_{n,ν}(nτ)` for `τ > 1`:
/// `n²(τ - 3/4 - (1/2) log τ) - (1/12) log n + (ν²/2 - 1/8) log(1 - 1/τ) + ζ'(-1)`.
pub fn thm2_prediction(n: usize, nu: &APComplex, tau: &APReal, ctx: &PrecisionContext) -> Result<APComplex> {
    Regime::Super.check_range(tau.to_f64())?;
    let p = ctx.working_bits();
    let nu = Complex::with_val(p, nu);
    let tau = Float::with_val(p, tau);
    let nf = Float::with_val(p, n as u32);
    let lead = Float::with_val(p, nf.square_ref()) * free_energy_super(&tau);
    let log_gap = (1u32 - Float::with_val(p, tau.recip_ref())).ln();
    let mut coef = Complex::with_val(p, nu.square_ref()) / 2u32;
    coef -= Float::with_val(p, 0.125f64);
    let mut out = Complex::with_val(p, &coef * &log_gap);
    out += lead;
    out -= nf.ln() / 12u32;
    out += named_constant("zeta_prime_minus1", &ctx.at_bits(p))?;
    Ok(Complex::with_val(ctx.bits, out))
}

/// `τ²/4`, the ungapped branch of the free energy.
pub fn free_energy_sub(tau: &APReal) -> APReal {
    Float::with_val(tau.prec(), tau.square_ref()) / 4u32
}

/// `τ - (1/2) log τ - 3/4`, the gapped branch.
pub fn free_energy_super(tau: &APReal) -> APReal {
    let p = tau.prec();
    let mut out = Float::with_val(p, tau) - Float::with_val(p, tau.ln_ref()) / 2u32;
    out -= 0.75f64;
    out
}

/// `lim (1/n²) log Z` at fixed `τ`.
#[derive(Clone, Debug)]
pub enum FreeEnergy {
    Sub(APReal),
    Super(APReal),
    /// At `τ = 1` both one-sided limits are reported; they coincide at 1/4.
    Critical {
        below: APReal,
        above: APReal,
    },
}

impl FreeEnergy {
    /// The value, taking the left limit at the critical point.
    pub fn value(&self) -> &APReal {
        match self {
            FreeEnergy::Sub(v) | FreeEnergy::Super(v) => v,
            FreeEnergy::Critical { below, .. } => below,
        }
    }
}

pub fn free_energy(tau: &APReal) -> Result<FreeEnergy> {
    if !tau.is_finite() || *tau <= 0 {
        return Err(GwwError::OutOfRange(format!("free energy needs τ > 0, got {tau}")));
    }
    Ok(if *tau < 1 {
        FreeEnergy::Sub(free_energy_sub(tau))
    } else if *tau > 1 {
        FreeEnergy::Super(free_energy_super(tau))
    } else {
        FreeEnergy::Critical {
            below: free_energy_sub(tau),
            above: free_energy_super(tau),
        }
    })
}

/// Difference of the two branches near the transition.
#[derive(Clone, Debug)]
pub struct GapReport {
    /// `g(τ) = τ - (1/2) log τ - 3/4 - τ²/4`.
    pub gap: APReal,
    /// `g(τ) + (τ - 1)³/6`, which is `O((τ-1)⁴)`.
    pub residual: APReal,
}

pub fn third_order_gap(tau: &APReal) -> Result<GapReport> {
    if *tau <= 0.5 || *tau >= 2 {
        return Err(GwwError::OutOfRange(format!(
            "third-order gap needs τ in (0.5, 2), got {tau}"
        )));
    }
    let p = tau.prec();
    let gap = free_energy_super(tau) - free_energy_sub(tau);
    let cube = Float::with_val(p, tau - 1u32);
    let cube = Float::with_val(p, cube.square_ref()) * &cube / 6u32;
    let residual = Float::with_val(p, &gap + &cube);
    Ok(GapReport { gap, residual })
}

/// Leading behaviour of `∂_ν log D_{n,ν}(nτ)`.
///
/// `τ < 1`: `n log(-z⁻) + (nτ/2)(z⁻ - 1/z⁻) - ν log n - ν + 1/2
/// - (ν/2) log(1-τ²) - ν d/dν log Γ(1-ν)`, where the last term equals
/// `+ν ψ(1-ν)`.
///
/// `τ > 1`: `ν log(1 - 1/τ)`.
pub fn dnu_logd_prediction(
    n: usize,
    nu: &APComplex,
    tau: &APReal,
    regime: Regime,
    ctx: &PrecisionContext,
) -> Result<APComplex> {
    regime.check_range(tau.to_f64())?;
    let p = ctx.working_bits();
    let nu = Complex::with_val(p, nu);
    let tau = Float::with_val(p, tau);
    let out = match regime {
        Regime::Super => {
            let log_gap = (1u32 - Float::with_val(p, tau.recip_ref())).ln();
            Complex::with_val(p, &nu * &log_gap)
        }
        Regime::Sub => {
            if is_positive_integer(&nu) {
                return Err(GwwError::GammaPole(format!("ψ(1-ν) at ν = {}", nu.real())));
            }
            let geo = sub_geometry(&tau, &nu, &ctx.at_bits(p))?;
            let nf = Float::with_val(p, n as u32);
            let zm = &geo.z_minus;
            let zm_inv = Float::with_val(p, zm.recip_ref());
            let mut real = Float::with_val(p, -zm).ln() * &nf;
            real += Float::with_val(p, &nf * &tau) / 2u32 * Float::with_val(p, zm - &zm_inv);
            real += 0.5f64;
            let one_minus_tau2 = Float::with_val(p, 1u32 - Float::with_val(p, tau.square_ref()));
            let mut coef_nu = -Float::with_val(p, nf.ln_ref());
            coef_nu -= 1u32;
            coef_nu -= one_minus_tau2.ln() / 2u32;
            let psi = digamma(&Complex::with_val(p, 1u32 - &nu), &ctx.at_bits(p))?;
            let mut out = Complex::with_val(p, &nu * &coef_nu);
            out += real;
            out += Complex::with_val(p, &nu * &psi);
            out
        }
    };
    Ok(Complex::with_val(ctx.bits, out))
}
