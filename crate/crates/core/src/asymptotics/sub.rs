//! Saddle-point geometry for `τ < 1`, where `φ(z) = (τ/2)(z - 1/z) + log z`.

use rug::float::Constant;
use rug::{Complex, Float};

use super::{Regime, YPrediction};
use crate::error::{GwwError, Result};
use crate::precision::{APComplex, APReal, PrecisionContext};
use crate::special::recip_gamma;

#[derive(Clone, Debug)]
pub struct SubGeometry {
    pub tau: APReal,
    /// `√(1 - τ²)`.
    pub s: APReal,
    pub z_plus: APReal,
    pub z_minus: APReal,
    /// `φ(z⁻)` with `log z⁻ = log|z⁻| + πi`.
    pub phi_zm: APComplex,
    pub phi2: APReal,
    pub phi3: APReal,
    /// `λ'(z⁻) = (-φ''(z⁻))^{1/2}`.
    pub lambda1: APReal,
    /// `λ''(z⁻) = -φ'''(z⁻) / (3 (-φ''(z⁻))^{1/2})`.
    pub lambda2: APReal,
    /// `√(2π)/Γ(1-ν)`, zero at positive integer `ν`.
    pub d1: APComplex,
}

pub fn sub_geometry(tau: &APReal, nu: &APComplex, ctx: &PrecisionContext) -> Result<SubGeometry> {
    Regime::Sub.check_range(tau.to_f64())?;
    let p = ctx.working_bits();
    let tau = Float::with_val(p, tau);
    let s = Float::with_val(p, 1u32 - Float::with_val(p, tau.square_ref())).sqrt();
    let z_plus = Float::with_val(p, &s - 1u32) / &tau;
    let z_minus = -Float::with_val(p, &s + 1u32) / &tau;
    let zm_inv = Float::with_val(p, z_minus.recip_ref());
    let mut phi_re = Float::with_val(p, &z_minus - &zm_inv) * &tau / 2u32;
    phi_re += Float::with_val(p, z_minus.abs_ref()).ln();
    let phi_zm = Complex::with_val(p, (phi_re, Float::with_val(p, Constant::Pi)));
    // φ'' = -τ/z³ - 1/z², φ''' = 3τ/z⁴ + 2/z³
    let inv2 = Float::with_val(p, zm_inv.square_ref());
    let inv3 = Float::with_val(p, &inv2 * &zm_inv);
    let inv4 = Float::with_val(p, inv2.square_ref());
    let phi2 = -Float::with_val(p, &tau * &inv3) - &inv2;
    let phi3 = Float::with_val(p, &tau * &inv4) * 3u32 + Float::with_val(p, &inv3 * 2u32);
    let root = Float::with_val(p, -&phi2).sqrt();
    let lambda2 = -Float::with_val(p, &phi3 / &root) / 3u32;
    let sqrt_2pi = (Float::with_val(p, Constant::Pi) * 2u32).sqrt();
    let d1 = recip_gamma(&Complex::with_val(p, 1u32 - Complex::with_val(p, nu)), &ctx.at_bits(p)) * sqrt_2pi;
    Ok(SubGeometry {
        tau,
        s,
        z_plus,
        z_minus,
        phi_zm,
        phi2,
        phi3,
        lambda1: root,
        lambda2,
        d1,
    })
}

/// `φ(z)` with the principal logarithm.
pub fn phi_sub(z: &APComplex, tau: &APReal) -> APComplex {
    let p = z.prec().0;
    let mut out = Complex::with_val(p, z - Complex::with_val(p, z.recip_ref())) * tau / 2u32;
    out += Complex::with_val(p, z.ln_ref());
    out
}

/// Worst-case margins of the sign structure of `Re φ`.
#[derive(Clone, Debug)]
pub struct SignProbe {
    /// `max |Re φ|` on the unit circle (expected 0).
    pub unit_circle_max_abs: f64,
    /// `max Re(φ - φ(z⁻))` on `|z| = -z⁺` (expected negative).
    pub inner_circle_max: f64,
    /// `min Re(φ - φ(z⁻))` on `|z| = -z⁻` away from `z⁻` (expected positive).
    pub outer_circle_min: f64,
    /// `max Re(φ - φ(z⁻))` on `(-∞, z⁺)` away from `z⁻` (expected negative).
    pub axis_max: f64,
}

impl SignProbe {
    pub fn holds(&self, tol: f64) -> bool {
        self.unit_circle_max_abs <= tol
            && self.inner_circle_max < 0.0
            && self.outer_circle_min > 0.0
            && self.axis_max < 0.0
    }
}

pub fn phi_sign_probe(tau: &APReal, ctx: &PrecisionContext) -> Result<SignProbe> {
    let zero = Complex::with_val(ctx.bits, 0u32);
    let geo = sub_geometry(tau, &zero, ctx)?;
    let p = ctx.bits;
    let re_rel = |z: Complex| -> f64 { Float::with_val(p, phi_sub(&z, &geo.tau).real() - geo.phi_zm.real()).to_f64() };
    let samples = 256;
    let mut unit = 0f64;
    let mut inner = f64::NEG_INFINITY;
    let mut outer = f64::INFINITY;
    let r_in = Float::with_val(p, -&geo.z_plus);
    let r_out = Float::with_val(p, -&geo.z_minus);
    for i in 0..samples {
        // θ ∈ (-π, π), staying off the negative axis where log has its cut
        let theta = -std::f64::consts::PI + (i as f64 + 0.5) * 2.0 * std::f64::consts::PI / samples as f64;
        let e = Complex::with_val(p, (0u32, theta)).exp();
        unit = unit.max(phi_sub(&e, &geo.tau).real().to_f64().abs());
        inner = inner.max(re_rel(Complex::with_val(p, &e * &r_in)));
        if (theta.abs() - std::f64::consts::PI).abs() > 0.05 {
            outer = outer.min(re_rel(Complex::with_val(p, &e * &r_out)));
        }
    }
    let mut axis = f64::NEG_INFINITY;
    let zm = geo.z_minus.to_f64();
    let zp = geo.z_plus.to_f64();
    for i in 1..samples {
        // x = z⁺ - u/(1-u) sweeps (-∞, z⁺)
        let u = i as f64 / samples as f64;
        let x = zp - u / (1.0 - u) * 8.0 * zm.abs();
        if (x - zm).abs() < 0.05 * zm.abs() || (x - zp).abs() < 1e-3 {
            continue;
        }
        // Re φ is the same on both lips of the cut
        let z = Complex::with_val(p, (x, 0.0));
        axis = axis.max(re_rel(z));
    }
    Ok(SignProbe {
        unit_circle_max_abs: unit,
        inner_circle_max: inner,
        outer_circle_min: outer,
        axis_max: axis,
    })
}

fn is_positive_integer(nu: &APComplex) -> bool {
    nu.imag().is_zero() && nu.real().is_integer() && *nu.real() > 0
}

/// `x^w = exp(w log x)` for real `x > 0`.
fn real_pow(x: &APReal, w: &APComplex) -> APComplex {
    let p = w.prec().0;
    (Complex::with_val(p, w) * Float::with_val(p, x.ln_ref())).exp()
}

/// Y-observables for `τ < 1` evaluated as stated:
///
/// * `(Y₋₁)₁₁ = -(n/2)τ - νz⁻ - ν²(z⁻)²τ / (2n(τ+z⁻)²)`
/// * `Y21'(0;n+1)/Y21(0;n+1) = -t/2 + ν/z⁻ + (ν/n)(τ/((z⁻)²√(1-τ²)) - 1/z⁻
///   - ντ/(2(τ+z⁻)²) + (ν+1)/(τ+z⁻))`
/// * `Y12(0;n) = (1 + (ν²z⁻τ/(2(τ+z⁻)²) - ν(ν-1)z⁻/(2(τ+z⁻)))/n) |z⁻|^ν`
/// * `Y11(0;n) = -d₁ν λ'^{-2ν-1} |z⁻|^{-2ν-1} n^{-ν-1/2} e^{nφ(z⁻)}`
/// * `Y22(0;n) = d₁^{-1} λ'^{2ν-1} |z⁻|^{2ν-1} n^{ν-1/2} e^{-nφ(z⁻)}`
///
/// and the size-`n+1` versions `Y11 z⁻`, `Y22 / z⁻`.
pub fn sub_y_predictions(n: usize, nu: &APComplex, tau: &APReal, ctx: &PrecisionContext) -> Result<YPrediction> {
    if is_positive_integer(nu) {
        return Err(GwwError::GammaPole(format!(
            "d₁ = √(2π)/Γ(1-ν) vanishes at ν = {}",
            nu.real()
        )));
    }
    let geo = sub_geometry(tau, nu, ctx)?;
    let p = ctx.working_bits();
    let nu = Complex::with_val(p, nu);
    let tau = &geo.tau;
    let zm = &geo.z_minus;
    let nf = Float::with_val(p, n as u32);
    let t = Float::with_val(p, &nf * tau);
    let tz = Float::with_val(p, tau + zm);
    let tz2 = Float::with_val(p, tz.square_ref());
    let zm2 = Float::with_val(p, zm.square_ref());
    let nu2 = Complex::with_val(p, nu.square_ref());

    let mut ym1 = Complex::with_val(p, -Float::with_val(p, &t / 2u32));
    ym1 -= Complex::with_val(p, &nu * zm);
    ym1 -= Complex::with_val(p, &nu2 * Float::with_val(p, &zm2 * tau)) / Float::with_val(p, &tz2 * &nf) / 2u32;

    let mut bracket = Complex::with_val(p, Float::with_val(p, tau / &zm2) / &geo.s);
    bracket -= Float::with_val(p, zm.recip_ref());
    bracket -= Complex::with_val(p, &nu * tau) / Float::with_val(p, &tz2 * 2u32);
    bracket += Complex::with_val(p, &nu + 1u32) / &tz;
    let mut ratio = Complex::with_val(p, -Float::with_val(p, &t / 2u32));
    ratio += Complex::with_val(p, &nu / zm);
    ratio += Complex::with_val(p, &nu * &bracket) / &nf;

    let abs_zm = Float::with_val(p, zm.abs_ref());
    let mut corr = Complex::with_val(p, &nu2 * Float::with_val(p, zm * tau)) / Float::with_val(p, &tz2 * 2u32);
    corr -= Complex::with_val(p, &nu * Complex::with_val(p, &nu - 1u32)) * zm / Float::with_val(p, &tz * 2u32);
    let y12 = (corr / &nf + 1u32) * real_pow(&abs_zm, &nu);

    // e^{nφ(z⁻)} = (-1)^n e^{n Re φ(z⁻)}
    let sign = if n.is_multiple_of(2) { 1i32 } else { -1i32 };
    let e_plus = Float::with_val(p, geo.phi_zm.real() * &nf).exp() * sign;
    let e_minus = Float::with_val(p, -Float::with_val(p, geo.phi_zm.real() * &nf)).exp() * sign;
    let two_nu = Complex::with_val(p, &nu * 2u32);
    let exp_11 = Complex::with_val(p, -Complex::with_val(p, &two_nu + 1u32));
    let exp_22 = Complex::with_val(p, &two_nu - 1u32);
    let half = Float::with_val(p, 0.5f64);
    let n_11 = real_pow(&nf, &Complex::with_val(p, -Complex::with_val(p, &nu + &half)));
    let n_22 = real_pow(&nf, &Complex::with_val(p, &nu - &half));

    let mut y11 = Complex::with_val(p, -Complex::with_val(p, &geo.d1 * &nu));
    y11 *= real_pow(&geo.lambda1, &exp_11);
    y11 *= real_pow(&abs_zm, &exp_11);
    y11 *= n_11;
    y11 *= e_plus;

    let mut y22 = Complex::with_val(p, geo.d1.recip_ref());
    y22 *= real_pow(&geo.lambda1, &exp_22);
    y22 *= real_pow(&abs_zm, &exp_22);
    y22 *= n_22;
    y22 *= e_minus;

    let y11_next = Complex::with_val(p, &y11 * zm);
    let y22_next = Complex::with_val(p, &y22 / zm);
    let b = ctx.bits;
    Ok(YPrediction {
        yminus1_11: Complex::with_val(b, ym1),
        ratio_y21_next: Complex::with_val(b, ratio),
        y12: Complex::with_val(b, y12),
        y11: Complex::with_val(b, y11),
        y22: Complex::with_val(b, y22),
        y11_next: Complex::with_val(b, y11_next),
        y22_next: Complex::with_val(b, y22_next),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    #[test]
    fn saddle_points() {
        let c = ctx();
        let g = sub_geometry(&c.real(0.5f64), &c.complex(0u32), &c).unwrap();
        assert!((g.z_minus.to_f64() + 3.732_050_807_568_877).abs() < 1e-14);
        let prod = Float::with_val(256, &g.z_plus * &g.z_minus);
        assert!(Float::with_val(256, prod - 1u32).abs() < 1e-70);
        let sum = Float::with_val(256, &g.z_plus + &g.z_minus) + Float::with_val(256, 2u32 / &g.tau);
        assert!(sum.abs() < 1e-70);
        assert!(g.z_minus < -1 && g.z_plus > -1 && g.z_plus < 0);
        let near = sub_geometry(&c.real(0.9f64), &c.complex(0u32), &c).unwrap();
        assert!(near.z_minus.to_f64() > -1.7 && near.z_plus.to_f64() < -0.6);
        assert!(sub_geometry(&c.real(0.95f64), &c.complex(0u32), &c).is_err());
    }

    #[test]
    fn lambda_relations() {
        let c = ctx();
        let g = sub_geometry(&c.real(0.5f64), &c.complex(0.3f64), &c).unwrap();
        let sq = Float::with_val(256, g.lambda1.square_ref()) + &g.phi2;
        assert!(sq.abs() < 1e-70);
        // λ''(z⁻) reproduces the closed form of A^{(2)}₁₁ / ν²
        let zm = &g.z_minus;
        let l1sq = Float::with_val(256, g.lambda1.square_ref());
        let l1cube = Float::with_val(256, &l1sq * &g.lambda1);
        let a = Float::with_val(256, zm * &l1sq).recip() + Float::with_val(256, &g.lambda2 * 3u32) / (l1cube * 2u32);
        let tz = Float::with_val(256, &g.tau + zm);
        let closed = -Float::with_val(256, zm.square_ref()) * &g.tau / Float::with_val(256, tz.square_ref()) / 2u32;
        assert!(Float::with_val(256, a - closed).abs() < 1e-60);
    }

    #[test]
    fn sign_structure() {
        let c = ctx();
        let probe = phi_sign_probe(&c.real(0.5f64), &c).unwrap();
        assert!(probe.holds(1e-60), "{probe:?}");
        let probe = phi_sign_probe(&c.real(0.7f64), &c).unwrap();
        assert!(probe.holds(1e-60), "{probe:?}");
        let geo = sub_geometry(&c.real(0.5f64), &c.complex(0u32), &c).unwrap();
        let zp = phi_sub(&c.complex(geo.z_plus.clone()), &geo.tau);
        assert!(*zp.real() < 0);
    }

    #[test]
    fn nu_zero_reductions() {
        let c = ctx();
        let pr = sub_y_predictions(32, &c.complex(0u32), &c.real(0.5f64), &c).unwrap();
        assert_eq!(pr.y12, 1u32);
        assert!(pr.y11.is_zero());
        assert_eq!(*pr.yminus1_11.real(), -8i32);
        assert!(sub_y_predictions(32, &c.complex(2u32), &c.real(0.5f64), &c).is_err());
    }
}
