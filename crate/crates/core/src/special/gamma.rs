//! Complex gamma, log-gamma and digamma via Spouge's approximation.
//!
//! For `Re w > 0`,
//! `Γ(w+1) = (w+a)^{w+1/2} e^{-(w+a)} [c_0 + Σ_{k=1}^{a-1} c_k/(w+k) + ε]`
//! with relative error below `a^{-1/2} (2π)^{-(a+1/2)}`. The parameter `a` is
//! picked from the requested precision and the coefficients are cached.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Complex, Float};

use crate::error::{GwwError, Result};
use crate::precision::{APComplex, PrecisionContext};

#[derive(Debug)]
struct Spouge {
    a: u32,
    prec: u32,
    coeffs: Vec<Float>,
}

type KernelCache = Mutex<HashMap<u32, Arc<Spouge>>>;

fn kernel_cache() -> &'static KernelCache {
    static CACHE: OnceLock<KernelCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn build_spouge(bits: u32) -> Spouge {
    let a = ((f64::from(bits + 16) * std::f64::consts::LN_2) / (2.0 * PI).ln()).ceil() as u32 + 1;
    // The coefficients alternate and their largest modulus sets the
    // cancellation, so add its size to the working precision.
    let mut ln_fact = 0.0;
    let mut max_ln = 0.0f64;
    for k in 1..a {
        if k > 1 {
            ln_fact += f64::from(k - 1).ln();
        }
        let ak = f64::from(a - k);
        let ln_c = (f64::from(k) - 0.5) * ak.ln() + ak - ln_fact;
        max_ln = max_ln.max(ln_c);
    }
    let prec = bits + 32 + (max_ln / std::f64::consts::LN_2).ceil().max(0.0) as u32;
    let mut coeffs = Vec::with_capacity(a as usize);
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    coeffs.push(two_pi.sqrt());
    let mut fact = Float::with_val(prec, 1u32);
    for k in 1..a {
        if k > 1 {
            fact *= k - 1;
        }
        let ak = Float::with_val(prec, a - k);
        let mut c = Float::with_val(prec, &ak).pow(Float::with_val(prec, f64::from(k) - 0.5));
        c *= Float::with_val(prec, &ak).exp();
        c /= &fact;
        if k % 2 == 0 {
            c = -c;
        }
        coeffs.push(c);
    }
    Spouge { a, prec, coeffs }
}

fn kernel(bits: u32) -> Arc<Spouge> {
    if let Some(k) = kernel_cache().lock().expect("spouge cache").get(&bits) {
        return Arc::clone(k);
    }
    let k = Arc::new(build_spouge(bits));
    kernel_cache()
        .lock()
        .expect("spouge cache")
        .entry(bits)
        .or_insert_with(|| Arc::clone(&k))
        .clone()
}

impl Spouge {
    /// Series `S(w)` and, on request, `S'(w)`.
    fn series(&self, w: &Complex, with_derivative: bool) -> (Complex, Complex) {
        let p = self.prec;
        let mut s = Complex::with_val(p, &self.coeffs[0]);
        let mut ds = Complex::with_val(p, 0u32);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let inv = Complex::with_val(p, w + k as u32).recip();
            let term = Complex::with_val(p, &inv * c);
            if with_derivative {
                ds -= Complex::with_val(p, &term * &inv);
            }
            s += term;
        }
        (s, ds)
    }

    /// `log Γ(w+1)` up to a multiple of `2πi`, for `Re w ≥ -1/2`.
    fn log_gamma_shifted(&self, w: &Complex) -> Complex {
        let p = self.prec;
        let wa = Complex::with_val(p, w + self.a);
        let (s, _) = self.series(w, false);
        let half = Complex::with_val(p, w + 0.5f64);
        let mut out = Complex::with_val(p, wa.ln_ref()) * half;
        out -= &wa;
        out += s.ln();
        out
    }

    fn gamma_shifted(&self, w: &Complex) -> Complex {
        let p = self.prec;
        let wa = Complex::with_val(p, w + self.a);
        let (s, _) = self.series(w, false);
        let half = Complex::with_val(p, w + 0.5f64);
        let mut e = Complex::with_val(p, wa.ln_ref()) * half;
        e -= &wa;
        e.exp() * s
    }

    fn digamma_shifted(&self, w: &Complex) -> Complex {
        let p = self.prec;
        let wa = Complex::with_val(p, w + self.a);
        let (s, ds) = self.series(w, true);
        let half = Complex::with_val(p, w + 0.5f64);
        let mut out = Complex::with_val(p, wa.ln_ref());
        out += half / &wa;
        out -= 1u32;
        out += ds / s;
        out
    }
}

/// True when `z` is exactly one of `0, -1, -2, …`.
pub fn is_nonpositive_integer(z: &APComplex) -> bool {
    z.imag().is_zero() && z.real().is_integer() && *z.real() <= 0
}

fn pole_error(z: &APComplex) -> GwwError {
    GwwError::GammaPole(z.real().to_string_radix(10, Some(20)))
}

fn reflect_needed(z: &APComplex) -> bool {
    *z.real() < 0.5f64
}

fn sin_pi(z: &Complex, prec: u32) -> Complex {
    let pi = Float::with_val(prec, Constant::Pi);
    let mut r = Complex::with_val(prec, z * &pi);
    // Reduce the real part modulo 2 so that sin(πz) keeps its relative
    // accuracy near the integers.
    let shift = Float::with_val(prec, z.real() / 2u32).floor() * 2u32;
    r -= Complex::with_val(prec, shift * &pi);
    r.sin()
}

/// `Γ(z)` at `ctx.bits`.
pub fn gamma(z: &APComplex, ctx: &PrecisionContext) -> Result<APComplex> {
    if is_nonpositive_integer(z) {
        return Err(pole_error(z));
    }
    let k = kernel(ctx.working_bits());
    let p = k.prec;
    let zw = Complex::with_val(p, z);
    let out = if reflect_needed(&zw) {
        let one_m = Complex::with_val(p, 1u32 - &zw);
        let w = Complex::with_val(p, &one_m - 1u32);
        let g = k.gamma_shifted(&w);
        let pi = Float::with_val(p, Constant::Pi);
        Complex::with_val(p, pi) / (sin_pi(&zw, p) * g)
    } else {
        let w = Complex::with_val(p, &zw - 1u32);
        k.gamma_shifted(&w)
    };
    Ok(Complex::with_val(ctx.bits, out))
}

/// `1/Γ(z)`, entire, exactly zero at the poles of `Γ`.
pub fn recip_gamma(z: &APComplex, ctx: &PrecisionContext) -> APComplex {
    if is_nonpositive_integer(z) {
        return Complex::with_val(ctx.bits, 0u32);
    }
    let k = kernel(ctx.working_bits());
    let p = k.prec;
    let zw = Complex::with_val(p, z);
    let out = if reflect_needed(&zw) {
        let w = Complex::with_val(p, -&zw);
        let g = k.gamma_shifted(&w);
        let pi = Float::with_val(p, Constant::Pi);
        sin_pi(&zw, p) * g / pi
    } else {
        let w = Complex::with_val(p, &zw - 1u32);
        k.gamma_shifted(&w).recip()
    };
    Complex::with_val(ctx.bits, out)
}

/// Principal branch of `log Γ(z)` computed in double precision, used only
/// to select the multiple of `2πi` on the high-precision value.
pub fn log_gamma_estimate(z: Complex64) -> Complex64 {
    let mut shifted = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while shifted.re < 15.0 || shifted.norm() < 15.0 {
        acc += shifted.ln();
        shifted += 1.0;
    }
    let inv = shifted.inv();
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
    (shifted - 0.5) * shifted.ln() - shifted + 0.5 * (2.0 * PI).ln() + series - acc
}

fn to_c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

/// Principal branch of `log Γ(z)`: analytic on `C \ (-∞, 0]` and real on the
/// positive axis, so it is continuous along any path avoiding the negative
/// real axis.
pub fn log_gamma(z: &APComplex, ctx: &PrecisionContext) -> Result<APComplex> {
    if is_nonpositive_integer(z) {
        return Err(pole_error(z));
    }
    let k = kernel(ctx.working_bits());
    let p = k.prec;
    let zw = Complex::with_val(p, z);
    let mut out = if reflect_needed(&zw) {
        let w = Complex::with_val(p, -&zw);
        let lg = k.log_gamma_shifted(&w);
        let pi = Float::with_val(p, Constant::Pi);
        let mut r = Complex::with_val(p, pi.ln());
        r -= sin_pi(&zw, p).ln();
        r - lg
    } else {
        let w = Complex::with_val(p, &zw - 1u32);
        k.log_gamma_shifted(&w)
    };
    if !(zw.imag().is_zero() && *zw.real() > 0) {
        let est = log_gamma_estimate(to_c64(&zw));
        let two_pi = 2.0 * PI;
        let turns = ((est.im - out.imag().to_f64()) / two_pi).round();
        if turns != 0.0 {
            let shift = Float::with_val(p, Constant::Pi) * 2u32 * turns;
            *out.mut_imag() += shift;
        }
    } else {
        out.mut_imag().assign(0u32);
    }
    Ok(Complex::with_val(ctx.bits, out))
}

/// `ψ(z) = Γ'(z)/Γ(z)` from the differentiated Spouge kernel, with
/// reflection `ψ(z) = ψ(1-z) - π cot(πz)` on the left half.
pub fn digamma(z: &APComplex, ctx: &PrecisionContext) -> Result<APComplex> {
    if is_nonpositive_integer(z) {
        return Err(pole_error(z));
    }
    let k = kernel(ctx.working_bits());
    let p = k.prec;
    let zw = Complex::with_val(p, z);
    let out = if reflect_needed(&zw) {
        let w = Complex::with_val(p, -&zw);
        let psi = k.digamma_shifted(&w);
        let pi = Float::with_val(p, Constant::Pi);
        let s = sin_pi(&zw, p);
        let shifted = Complex::with_val(p, &zw + 0.5f64);
        let c = sin_pi(&shifted, p);
        psi - Complex::with_val(p, c * pi) / s
    } else {
        let w = Complex::with_val(p, &zw - 1u32);
        k.digamma_shifted(&w)
    };
    Ok(Complex::with_val(ctx.bits, out))
}
