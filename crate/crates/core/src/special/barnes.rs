//! Barnes G-function through its integral representation
//! `log G(z+1) = (z/2) log 2π - z(z+1)/2 + z log Γ(z+1) - ∫_0^z log Γ(x+1) dx`.

use num_complex::Complex64;
use rug::float::Constant;
use rug::{Complex, Float};

use super::gamma::log_gamma;
use super::quadrature::gauss_legendre;
use crate::error::{GwwError, Result};
use crate::precision::{APComplex, PrecisionContext};

/// Smallest distance from the segment `[0, z]` to the cut `(-∞, -1]` of
/// `x ↦ log Γ(x+1)`.
fn distance_to_cut(z: Complex64) -> f64 {
    let samples = 2048;
    (0..=samples)
        .map(|i| {
            let p = z * (f64::from(i) / f64::from(samples));
            if p.re <= -1.0 {
                p.im.abs()
            } else {
                (p - Complex64::new(-1.0, 0.0)).norm()
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// `log G(z+1)` with the integral taken along the straight segment `[0, z]`.
pub fn log_barnes_g(z: &APComplex, ctx: &PrecisionContext) -> Result<APComplex> {
    if z.real().is_zero() && z.imag().is_zero() {
        return Ok(Complex::with_val(ctx.bits, 0u32));
    }
    let zc = Complex64::new(z.real().to_f64(), z.imag().to_f64());
    if z.imag().is_zero() && *z.real() <= -1i32 {
        return Err(GwwError::BarnesPath(format!(
            "segment [0, {}] meets a log-gamma singularity",
            zc.re
        )));
    }
    let dist = distance_to_cut(zc);
    if dist < 1e-12 {
        return Err(GwwError::BarnesPath(format!(
            "segment [0, {zc}] touches the cut of log Γ(x+1)"
        )));
    }
    let wctx = ctx.at_bits(ctx.working_bits());
    let wp = wctx.bits;
    let zw = Complex::with_val(wp, z);
    // Each panel is at most half the distance to the cut, which keeps the
    // Gauss–Legendre convergence factor far below 2^-bits.
    let panels = ((2.0 * zc.norm() / dist).ceil() as usize).max(1);
    let rule = gauss_legendre((ctx.bits as usize).div_ceil(2), wp);
    let mut integral = Complex::with_val(wp, 0u32);
    for p in 0..panels {
        let a = Float::with_val(wp, p as u32) / panels as u32;
        let b = Float::with_val(wp, p as u32 + 1) / panels as u32;
        let mut err = None;
        let part = rule.integrate(&a, &b, wp, |u| {
            let x = Complex::with_val(wp, &zw * u) + 1u32;
            match log_gamma(&x, &wctx) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    Complex::with_val(wp, 0u32)
                }
            }
        });
        if let Some(e) = err {
            return Err(GwwError::BarnesPath(e.to_string()));
        }
        integral += part;
    }
    integral *= &zw;

    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    let mut out = Complex::with_val(wp, &zw * Float::with_val(wp, two_pi.ln_ref())) / 2u32;
    let zz1 = Complex::with_val(wp, &zw + 1u32) * &zw;
    out -= zz1 / 2u32;
    let lg = log_gamma(&Complex::with_val(wp, &zw + 1u32), &wctx)?;
    out += lg * &zw;
    out -= integral;
    Ok(Complex::with_val(ctx.bits, out))
}
