use rug::float::Constant;
use rug::{Complex, Float};

use super::{Regime, YPrediction};
use crate::error::Result;
use crate::precision::{APComplex, APReal, PrecisionContext};

/// Geometry of the gapped phase. The equilibrium measure lives on the arc
/// `C₂ = {e^{iθ} : |θ| ≤ θ_c}` with `sin²(θ_c/2) = 1/τ`.
#[derive(Clone, Debug)]
pub struct SuperGeometry {
    pub tau: APReal,
    pub theta_c: APReal,
    /// `ξ = e^{iθ_c}`.
    pub xi: APComplex,
    /// Lagrange multiplier `l = -τ + log τ + 1`.
    pub l: APReal,
    pub nu: APComplex,
    /// `D_∞ = cos(θ_c/2)^ν`.
    pub d_inf: APComplex,
    pub(crate) prec: u32,
}

pub fn super_geometry(tau: &APReal, nu: &APComplex, ctx: &PrecisionContext) -> Result<SuperGeometry> {
    Regime::Super.check_range(tau.to_f64())?;
    let p = ctx.bits;
    let tau = Float::with_val(p, tau);
    let theta_c = Float::with_val(p, tau.recip_ref()).sqrt().asin() * 2u32;
    let xi = Complex::with_val(p, (0u32, &theta_c)).exp();
    let mut l = Float::with_val(p, tau.ln_ref()) - &tau;
    l += 1u32;
    let nu = Complex::with_val(p, nu);
    let half_cos = Float::with_val(p, &theta_c / 2u32).cos();
    let d_inf = (Complex::with_val(p, &nu) * half_cos.ln()).exp();
    Ok(SuperGeometry {
        tau,
        theta_c,
        xi,
        l,
        nu,
        d_inf,
        prec: p,
    })
}

impl SuperGeometry {
    /// `V(z) = -(τ/2)(z + 1/z)`.
    pub fn potential(&self, z: &APComplex) -> APComplex {
        let p = self.prec;
        -Complex::with_val(p, z + Complex::with_val(p, z.recip_ref())) * &self.tau / 2u32
    }
}

/// Lagrange multiplier `l(τ) = -τ + log τ + 1`.
pub fn lagrange_multiplier(tau: &APReal) -> APReal {
    let mut l = Float::with_val(tau.prec(), tau.ln_ref()) - tau;
    l += 1u32;
    l
}

fn gap_pow(base: &APReal, w: &APComplex) -> APComplex {
    let p = w.prec().0;
    (Complex::with_val(p, w) * Float::with_val(p, base.ln_ref())).exp()
}

/// Y-observables for `τ > 1` evaluated as stated:
///
/// * `(Y₋₁)₁₁ = -t(1/τ - 1/(2τ²)) + ν/τ + (1-4ν²)/(8n(τ-1)τ)`
/// * `Y21'(0;n+1)/Y21(0;n+1) = -t(1/τ - 1/(2τ²)) - ν/τ + 1/(8n(τ-1)τ) - ν²/(2n(τ-1)τ)`
/// * `Y12(0;n) = e^{-nl} τ^{-1/2} (1 + (3/(τ-1) + 2 - 12ν²/(τ-1))/(24n))`
/// * `Y11(0;n) = e^{nπi}(1-1/τ)^{ν+1/2}`, `Y22(0;n) = e^{-nπi}(1-1/τ)^{-ν+1/2}`
/// * `Y11(0;n+1) = e^{(n+1)πi}(1-1/τ)^{ν+1/2}(1 - (ν+1/2)/(n(τ-1)))`
/// * `Y22(0;n+1) = e^{-(n+1)πi}(1-1/τ)^{-ν+1/2}(1 + (ν-1/2)/(n(τ-1)))`
pub fn super_y_predictions(n: usize, nu: &APComplex, tau: &APReal, ctx: &PrecisionContext) -> Result<YPrediction> {
    Regime::Super.check_range(tau.to_f64())?;
    let p = ctx.working_bits();
    let nu = Complex::with_val(p, nu);
    let tau = Float::with_val(p, tau);
    let nf = Float::with_val(p, n as u32);
    let t = Float::with_val(p, &nf * &tau);
    let tm1 = Float::with_val(p, &tau - 1u32);
    let n_tm1_tau = Float::with_val(p, &nf * &tm1) * &tau;
    let nu2 = Complex::with_val(p, nu.square_ref());
    let inv_tau = Float::with_val(p, tau.recip_ref());
    let drift = Float::with_val(p, &inv_tau - Float::with_val(p, inv_tau.square_ref()) / 2u32) * &t;

    let mut ym1 = Complex::with_val(p, -&drift);
    ym1 += Complex::with_val(p, &nu * &inv_tau);
    ym1 += Complex::with_val(p, 1u32 - Complex::with_val(p, &nu2 * 4u32)) / Float::with_val(p, &n_tm1_tau * 8u32);

    let mut ratio = Complex::with_val(p, -&drift);
    ratio -= Complex::with_val(p, &nu * &inv_tau);
    ratio += Float::with_val(p, &n_tm1_tau * 8u32).recip();
    ratio -= Complex::with_val(p, &nu2 / Float::with_val(p, &n_tm1_tau * 2u32));

    let l = lagrange_multiplier(&tau);
    let mut corr = Complex::with_val(p, Float::with_val(p, 3u32 / &tm1) + 2u32);
    corr -= Complex::with_val(p, &nu2 * 12u32) / &tm1;
    let corr = corr / Float::with_val(p, &nf * 24u32) + 1u32;
    let scale = Float::with_val(p, -Float::with_val(p, &nf * &l)).exp() / Float::with_val(p, tau.sqrt_ref());
    let y12 = corr * scale;

    let base = Float::with_val(p, 1u32 - &inv_tau);
    let half = Float::with_val(p, 0.5f64);
    let sign_n = if n.is_multiple_of(2) { 1i32 } else { -1i32 };
    let y11_core = gap_pow(&base, &Complex::with_val(p, &nu + &half));
    let y22_core = gap_pow(&base, &Complex::with_val(p, &half - &nu));
    let y11 = Complex::with_val(p, &y11_core * sign_n);
    let y22 = Complex::with_val(p, &y22_core * sign_n);
    let n_tm1 = Float::with_val(p, &nf * &tm1);
    let f11 = 1u32 - Complex::with_val(p, &nu + &half) / &n_tm1;
    let f22 = Complex::with_val(p, &nu - &half) / &n_tm1 + 1u32;
    let y11_next = y11_core * f11 * -sign_n;
    let y22_next = y22_core * f22 * -sign_n;

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

/// `e^{±nπi}` as used in the gapped predictions.
pub fn unit_phase(n: usize, prec: u32) -> APComplex {
    let pi = Float::with_val(prec, Constant::Pi);
    Complex::with_val(prec, (0u32, pi * n as u32)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::agreeing_digits;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    #[test]
    fn geometry_at_tau_two() {
        let c = ctx();
        let g = super_geometry(&c.real(2u32), &c.complex(0.4f64), &c).unwrap();
        let half_pi = Float::with_val(256, Constant::Pi) / 2u32;
        assert!(Float::with_val(256, &g.theta_c - &half_pi).abs() < 1e-70);
        let expect = (Float::with_val(256, 2u32).ln() * -0.2f64).exp();
        assert!(agreeing_digits(&g.d_inf, &Complex::with_val(256, expect)) >= 70);
        assert!(lagrange_multiplier(&c.real(1u32)).is_zero());
        let l2 = lagrange_multiplier(&c.real(2u32));
        let l3 = lagrange_multiplier(&c.real(3u32));
        assert!(l3 < l2 && l2 < 0);
    }

    #[test]
    fn zero_nu_product() {
        let c = ctx();
        let pr = super_y_predictions(32, &c.complex(0u32), &c.real(2u32), &c).unwrap();
        let prod = Complex::with_val(256, &pr.y11 * &pr.y22);
        assert!(agreeing_digits(&prod, &c.complex(0.5f64)) >= 70);
        let phase = unit_phase(33, 256);
        assert!((phase.real().to_f64() + 1.0).abs() < 1e-60);
        let pr_odd = super_y_predictions(33, &c.complex(0.4f64), &c.real(2u32), &c).unwrap();
        assert!(*pr_odd.y11.real() < 0);
    }
}
