//! Named mathematical constants, with Glaisher's constant computed two
//! independent ways.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{GwwError, Result};
use crate::precision::{APReal, PrecisionContext};

pub const CONSTANT_NAMES: [&str; 4] = ["pi", "euler_gamma", "zeta_prime_minus1", "log_glaisher"];

/// Looks up a constant by name and evaluates it at `ctx.bits`.
pub fn named_constant(name: &str, ctx: &PrecisionContext) -> Result<APReal> {
    match name {
        "pi" => Ok(ctx.pi()),
        "euler_gamma" => Ok(Float::with_val(ctx.bits, Constant::Euler)),
        "zeta_prime_minus1" => Ok(zeta_prime_minus1(ctx)),
        "log_glaisher" => Ok(log_glaisher(ctx)),
        other => Err(GwwError::UnknownConstant(other.to_string())),
    }
}

/// Even Bernoulli number `B_{2j}` from `B_{2j} = (-1)^{j+1} 2 (2j)! ζ(2j) / (2π)^{2j}`.
pub fn bernoulli_even(j: u32, prec: u32) -> APReal {
    let wp = prec + 16;
    let two_j = 2 * j;
    let zeta = Float::with_val(wp, Float::zeta_u(two_j));
    let fact = Float::with_val(wp, Float::factorial(two_j));
    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    let mut b = zeta * fact * 2u32 / two_pi.pow(two_j);
    if j.is_multiple_of(2) {
        b = -b;
    }
    Float::with_val(prec, b)
}

/// Number of explicit terms for the Euler–Maclaurin sums below; the
/// asymptotic tail is then smaller than `2^-wp` before it starts to diverge.
fn em_cutoff(wp: u32) -> u32 {
    (0.12 * f64::from(wp)).ceil() as u32 + 8
}

/// `log A` from Euler–Maclaurin applied to `Σ k log k`:
/// `log A = Σ_{k≤N} k log k - (N²/2 + N/2 + 1/12) log N + N²/4
///          + Σ_{j≥2} B_{2j} / ((2j)(2j-1)(2j-2) N^{2j-2})`.
pub fn log_glaisher(ctx: &PrecisionContext) -> APReal {
    let wp = ctx.working_bits();
    let n = em_cutoff(wp);
    let mut sum = Float::with_val(wp, 0u32);
    for k in 2..=n {
        let kf = Float::with_val(wp, k);
        sum += Float::with_val(wp, kf.ln_ref()) * k;
    }
    let nf = Float::with_val(wp, n);
    let ln_n = Float::with_val(wp, nf.ln_ref());
    let n2 = Float::with_val(wp, nf.square_ref());
    let coeff = Float::with_val(wp, &n2 / 2u32) + Float::with_val(wp, &nf / 2u32) + Float::with_val(wp, 1u32) / 12u32;
    sum -= coeff * &ln_n;
    sum += Float::with_val(wp, &n2 / 4u32);
    let inv_n2 = Float::with_val(wp, n2.recip_ref());
    let mut pow = Float::with_val(wp, &inv_n2);
    let threshold = Float::with_val(wp, 1u32) >> wp;
    for j in 2u32.. {
        let b = bernoulli_even(j, wp);
        let denom = u64::from(2 * j) * u64::from(2 * j - 1) * u64::from(2 * j - 2);
        let term = Float::with_val(wp, &b * &pow) / denom;
        let small = Float::with_val(wp, term.abs_ref()) < threshold;
        sum += term;
        if small || j > 4 * n {
            break;
        }
        pow *= &inv_n2;
    }
    Float::with_val(ctx.bits, sum)
}

/// `ζ'(2) = -Σ log k / k²` by Euler–Maclaurin with the closed-form
/// derivatives `f^{(m)}(x) = (-1)^m (m+1)! x^{-2-m} (log x - (H_{m+1} - 1))`.
pub fn zeta_prime_2(ctx: &PrecisionContext) -> APReal {
    let wp = ctx.working_bits();
    let n = em_cutoff(wp);
    let mut head = Float::with_val(wp, 0u32);
    for k in 2..n {
        let kf = Float::with_val(wp, k);
        head += Float::with_val(wp, kf.ln_ref()) / Float::with_val(wp, kf.square_ref());
    }
    let nf = Float::with_val(wp, n);
    let ln_n = Float::with_val(wp, nf.ln_ref());
    // tail Σ_{k≥N} f(k) = ∫_N^∞ f + f(N)/2 - Σ_j B_{2j}/(2j)! f^{(2j-1)}(N)
    let mut tail = Float::with_val(wp, &ln_n + 1u32) / &nf;
    tail += Float::with_val(wp, &ln_n / Float::with_val(wp, nf.square_ref())) / 2u32;
    let threshold = Float::with_val(wp, 1u32) >> wp;
    let mut harmonic = Float::with_val(wp, 1u32); // H_1
    let mut fact = Float::with_val(wp, 1u32); // (m+1)! starting from m = 0
    let mut m = 0u32;
    for j in 1u32.. {
        // advance to m = 2j - 1
        while m < 2 * j - 1 {
            m += 1;
            fact *= m + 1;
            harmonic += Float::with_val(wp, 1u32) / (m + 1);
        }
        let pow = Float::with_val(wp, nf.clone().pow(2 + m)).recip();
        let deriv =
            -Float::with_val(wp, &fact * &pow) * (Float::with_val(wp, &ln_n) - (Float::with_val(wp, &harmonic) - 1u32));
        let b = bernoulli_even(j, wp);
        let term = b * deriv / Float::with_val(wp, Float::factorial(2 * j));
        let small = Float::with_val(wp, term.abs_ref()) < threshold;
        tail -= term;
        if small || j > 4 * n {
            break;
        }
    }
    Float::with_val(ctx.bits, -(head + tail))
}

/// Independent route: `log A = (γ + log 2π)/12 - ζ'(2)/(2π²)`.
pub fn log_glaisher_via_zeta_prime_2(ctx: &PrecisionContext) -> APReal {
    let wctx = ctx.at_bits(ctx.working_bits());
    let wp = wctx.bits;
    let pi = wctx.pi();
    let gamma = Float::with_val(wp, Constant::Euler);
    let log_2pi = Float::with_val(wp, &pi * 2u32).ln();
    let z2 = zeta_prime_2(&wctx);
    let pi2 = Float::with_val(wp, pi.square_ref());
    let out = (gamma + log_2pi) / 12u32 - z2 / (pi2 * 2u32);
    Float::with_val(ctx.bits, out)
}

/// `ζ'(-1) = 1/12 - log A`.
pub fn zeta_prime_minus1(ctx: &PrecisionContext) -> APReal {
    let wp = ctx.working_bits();
    let la = log_glaisher(&ctx.at_bits(wp));
    Float::with_val(ctx.bits, Float::with_val(wp, 1u32) / 12u32 - la)
}
