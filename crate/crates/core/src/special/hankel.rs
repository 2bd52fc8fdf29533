//! Quadrature on the Hankel loop: the circle `|s| = r` plus both lips of the
//! cut `(-R, -r)` of `s^ν`.
//!
//! Nodes carry the full measure `w(s) ds / (2πi s)` with
//! `w(s) = s^ν exp((t/2)(s + 1/s))`, so any integral of a Laurent polynomial
//! against the weight is a plain weighted sum.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::quadrature::gauss_legendre;
use crate::error::{GwwError, Result};
use crate::precision::{APComplex, APReal, PrecisionContext};

#[derive(Clone, Debug)]
pub struct HankelContour {
    pub circle_radius: APReal,
    pub ray_truncation: APReal,
    pub nodes_per_segment: usize,
}

/// One quadrature node on the loop. `s` is the point (on the lips it is the
/// negative real `-x`); `weight` already contains `w(s)` with the branch of
/// `s^ν` that belongs to the node's side of the cut.
#[derive(Clone, Debug)]
pub struct ContourNode {
    pub s: APComplex,
    pub weight: APComplex,
}

fn is_integer_order(nu: &APComplex) -> bool {
    nu.imag().is_zero() && nu.real().is_integer()
}

/// `ln(tail bound) = -(t/2)(R + 1/R) + (|Re ν| + n) ln R`.
fn ln_tail_bound(r: f64, t: f64, nu_re: f64, n: f64) -> f64 {
    -(t / 2.0) * (r + 1.0 / r) + (nu_re.abs() + n) * r.ln()
}

impl HankelContour {
    /// Unit-radius contour with the smallest power-of-two-scaled truncation
    /// that satisfies the tail invariant for powers up to `n`.
    pub fn auto(nu: &APComplex, t: &APReal, n: usize, nodes_per_segment: usize, ctx: &PrecisionContext) -> Self {
        let tf = t.to_f64();
        let target = -(f64::from(ctx.bits) + 16.0) * std::f64::consts::LN_2;
        let mut r = 2.0f64;
        if tf > 0.0 {
            while ln_tail_bound(r, tf, nu.real().to_f64(), n as f64) >= target && r < 1e12 {
                r *= 1.25;
            }
        }
        HankelContour {
            circle_radius: Float::with_val(ctx.bits, 1u32),
            ray_truncation: Float::with_val(ctx.bits, r.ceil()),
            nodes_per_segment,
        }
    }

    /// Checks `exp((t/2)(-R - 1/R)) R^{|Re ν| + n} < 2^{-bits}`. Integer
    /// orders skip the check because the two lips cancel identically.
    pub fn validate(&self, nu: &APComplex, t: &APReal, n: usize, ctx: &PrecisionContext) -> Result<()> {
        if is_integer_order(nu) {
            return Ok(());
        }
        let r = self.ray_truncation.to_f64();
        let bound = ln_tail_bound(r, t.to_f64(), nu.real().to_f64(), n as f64);
        let limit = -f64::from(ctx.bits) * std::f64::consts::LN_2;
        if bound.is_nan() || bound >= limit || r <= self.circle_radius.to_f64() {
            return Err(GwwError::ContourTruncation(format!(
                "R = {r} leaves a tail of e^{bound:.1} (need below 2^-{})",
                ctx.bits
            )));
        }
        Ok(())
    }

    /// Quadrature nodes for the weight with parameters `(ν, t)`.
    pub fn nodes(&self, nu: &APComplex, t: &APReal, ctx: &PrecisionContext) -> Vec<ContourNode> {
        let wp = ctx.working_bits();
        let nu = Complex::with_val(wp, nu);
        let t = Float::with_val(wp, t);
        let half_t = Float::with_val(wp, &t / 2u32);
        let pi = Float::with_val(wp, Constant::Pi);
        let r = Float::with_val(wp, &self.circle_radius);
        let ln_r = Float::with_val(wp, r.ln_ref());
        let mut out = Vec::new();

        // circle s = r e^{iθ}, θ ∈ (-π, π); ds/(2πi s) = dθ/(2π)
        let rule = gauss_legendre(self.nodes_per_segment, wp);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let theta = Float::with_val(wp, x * &pi);
            let log_s = Complex::with_val(wp, (&ln_r, &theta));
            let s = Complex::with_val(wp, log_s.exp_ref());
            let s_inv = Complex::with_val(wp, s.recip_ref());
            let mut expo = Complex::with_val(wp, &s + &s_inv) * &half_t;
            expo += Complex::with_val(wp, &nu * &log_s);
            let weight = expo.exp() * Float::with_val(wp, w / 2u32);
            out.push(ContourNode { s, weight });
        }
        if is_integer_order(&nu) {
            return out;
        }

        // lips: s = x e^{±iπ}, x = e^u, u ∈ [ln r, ln R], split into panels of
        // unit length so the doubly exponential decay stays resolved
        let ln_big = Float::with_val(wp, self.ray_truncation.ln_ref());
        let span = Float::with_val(wp, &ln_big - &ln_r).to_f64();
        let panels = (span.ceil() as usize).max(1);
        let per_panel = (self.nodes_per_segment / panels).max(8);
        let rule = gauss_legendre(per_panel, wp);
        let two_pi_i_inv = Complex::with_val(wp, (0u32, Float::with_val(wp, &pi * 2u32))).recip();
        let i_pi_nu = Complex::with_val(wp, &nu * Complex::with_val(wp, (0u32, &pi)));
        let phase_up = Complex::with_val(wp, i_pi_nu.exp_ref());
        let phase_down = Complex::with_val(wp, (-i_pi_nu).exp_ref());
        for p in 0..panels {
            let a = Float::with_val(wp, &ln_r) + Float::with_val(wp, &ln_big - &ln_r) * p as u32 / panels as u32;
            let b = Float::with_val(wp, &ln_r) + Float::with_val(wp, &ln_big - &ln_r) * (p as u32 + 1) / panels as u32;
            let half = Float::with_val(wp, &b - &a) / 2u32;
            let mid = Float::with_val(wp, &b + &a) / 2u32;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let u = Float::with_val(wp, &half * x) + &mid;
                let xv = Float::with_val(wp, u.exp_ref());
                let x_inv = Float::with_val(wp, xv.recip_ref());
                let decay = -Float::with_val(wp, &xv + &x_inv) * &half_t;
                let mut base = Complex::with_val(wp, &nu * &u);
                base += decay;
                let base = base.exp() * Float::with_val(wp, w * &half) * &two_pi_i_inv;
                let s = Complex::with_val(wp, -&xv);
                let up = Complex::with_val(wp, &base * &phase_up);
                let down = -Complex::with_val(wp, &base * &phase_down);
                out.push(ContourNode {
                    s: s.clone(),
                    weight: up,
                });
                out.push(ContourNode { s, weight: down });
            }
        }
        out
    }

    /// Total node count the loop uses for order `ν`.
    pub fn node_count(&self, nu: &APComplex) -> usize {
        if is_integer_order(nu) {
            return self.nodes_per_segment;
        }
        let span = Float::with_val(64, &self.ray_truncation / &self.circle_radius)
            .ln()
            .to_f64();
        let panels = (span.ceil() as usize).max(1);
        self.nodes_per_segment + 2 * panels * (self.nodes_per_segment / panels).max(8)
    }
}

/// `s^k` for the node points; integer powers need no branch.
fn int_pow(s: &APComplex, k: i64, prec: u32) -> APComplex {
    let base = Complex::with_val(prec, s);
    if k >= 0 {
        base.pow(k as u32)
    } else {
        base.pow((-k) as u32).recip()
    }
}

/// `m_k = ∫_Γ s^k w(s) ds/(2πi s)` by direct quadrature on the loop.
pub fn moment_quadrature(
    k: i64,
    nu: &APComplex,
    t: &APReal,
    contour: &HankelContour,
    ctx: &PrecisionContext,
) -> Result<APComplex> {
    contour.validate(nu, t, k.unsigned_abs() as usize + 1, ctx)?;
    let wp = ctx.working_bits();
    let nodes = contour.nodes(nu, t, ctx);
    let mut acc = Complex::with_val(wp, 0u32);
    for node in &nodes {
        acc += int_pow(&node.s, k, wp) * &node.weight;
    }
    Ok(Complex::with_val(ctx.bits, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::agreeing_digits;
    use crate::special::moments::moment;

    #[test]
    fn trivial_weight_gives_one() {
        let ctx = PrecisionContext::new(128).unwrap();
        let nu = Complex::with_val(128, 0u32);
        let t = Float::with_val(128, 0u32);
        let c = HankelContour::auto(&nu, &t, 1, 40, &ctx);
        let m = moment_quadrature(0, &nu, &t, &c, &ctx).unwrap();
        assert!(agreeing_digits(&m, &Complex::with_val(128, 1u32)) >= 35);
    }

    #[test]
    fn non_integer_order_matches_series() {
        let ctx = PrecisionContext::new(256).unwrap();
        let nu = Complex::with_val(256, 0.3f64);
        let t = Float::with_val(256, 0.8f64);
        let c = HankelContour::auto(&nu, &t, 2, 240, &ctx);
        let q = moment_quadrature(0, &nu, &t, &c, &ctx).unwrap();
        let s = moment(0, &nu, &t, &ctx).unwrap();
        assert!(agreeing_digits(&q, &s) >= 30);
    }

    #[test]
    fn short_truncation_is_rejected() {
        let ctx = PrecisionContext::new(256).unwrap();
        let nu = Complex::with_val(256, 0.3f64);
        let t = Float::with_val(256, 1u32);
        let c = HankelContour {
            circle_radius: Float::with_val(256, 1u32),
            ray_truncation: Float::with_val(256, 10u32),
            nodes_per_segment: 40,
        };
        let e = moment_quadrature(0, &nu, &t, &c, &ctx).unwrap_err();
        assert!(e.to_string().contains("contour truncation too small"));
    }
}
