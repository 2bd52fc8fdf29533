//! Gauss–Legendre and tanh-sinh rules at arbitrary precision.
//!
//! Rules are expensive to build at a few hundred bits, so they are cached
//! per `(size, precision)` and shared behind an `Arc`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complex, Float};

use crate::precision::{APComplex, APReal};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<APReal>,
    pub weights: Vec<APReal>,
}

type GlCache = Mutex<HashMap<(usize, u32), Arc<GaussLegendre>>>;

fn gl_cache() -> &'static GlCache {
    static CACHE: OnceLock<GlCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Legendre `P_n(x)` and `P_{n-1}(x)` by the three-term recurrence.
fn legendre_pair(n: usize, x: &Float, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1u32);
    let mut p1 = Float::with_val(prec, x);
    for k in 1..n {
        let k = k as u32;
        let mut p2 = Float::with_val(prec, x * &p1);
        p2 *= 2 * k + 1;
        p2 -= Float::with_val(prec, &p0 * k);
        p2 /= k + 1;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

fn build_gauss_legendre(n: usize, prec: u32) -> GaussLegendre {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let wp = prec + 32;
    let half = n.div_ceil(2);
    let mut pos_nodes = Vec::with_capacity(half);
    let mut pos_weights = Vec::with_capacity(half);
    for i in 0..half {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        let mut iters_at_full = 0;
        let mut cur = 53u32;
        loop {
            cur = (cur * 2).min(wp);
            x.set_prec(cur);
            let (pn, pm) = legendre_pair(n, &x, cur);
            let x2m1 = Float::with_val(cur, x.square_ref()) - 1u32;
            let mut dp = Float::with_val(cur, &x * &pn) - &pm;
            dp *= n as u32;
            dp /= &x2m1;
            let step = Float::with_val(cur, &pn / &dp);
            x -= &step;
            if cur == wp {
                iters_at_full += 1;
                let small = step.is_zero() || step.get_exp().unwrap_or(0) < -(wp as i32) + 8;
                if small || iters_at_full > 6 {
                    break;
                }
            }
        }
        let (pn, pm) = legendre_pair(n, &x, wp);
        let _ = pn;
        // w = 2(1 - x^2) / (n P_{n-1}(x))^2
        let one_m_x2 = Float::with_val(wp, 1u32) - Float::with_val(wp, x.square_ref());
        let denom = Float::with_val(wp, &pm * (n as u32)).square();
        let w = Float::with_val(wp, one_m_x2 * 2u32) / denom;
        pos_nodes.push(x);
        pos_weights.push(w);
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..half {
        let x = Float::with_val(prec, &pos_nodes[i]);
        nodes.push(-x);
        weights.push(Float::with_val(prec, &pos_weights[i]));
    }
    for i in (0..n / 2).rev() {
        nodes.push(Float::with_val(prec, &pos_nodes[i]));
        weights.push(Float::with_val(prec, &pos_weights[i]));
    }
    if n % 2 == 1 {
        let mid = half - 1;
        nodes[mid] = Float::with_val(prec, 0u32);
    }
    GaussLegendre { nodes, weights }
}

/// Cached `n`-point Gauss–Legendre rule at `prec` bits, nodes ascending.
pub fn gauss_legendre(n: usize, prec: u32) -> Arc<GaussLegendre> {
    if let Some(rule) = gl_cache().lock().expect("rule cache").get(&(n, prec)) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build_gauss_legendre(n, prec));
    gl_cache()
        .lock()
        .expect("rule cache")
        .entry((n, prec))
        .or_insert_with(|| Arc::clone(&rule))
        .clone()
}

impl GaussLegendre {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f` for a complex-valued integrand of a real variable.
    pub fn integrate<F>(&self, a: &APReal, b: &APReal, prec: u32, mut f: F) -> APComplex
    where
        F: FnMut(&APReal) -> APComplex,
    {
        let half = Float::with_val(prec, b - a) / 2u32;
        let mid = Float::with_val(prec, b + a) / 2u32;
        let mut acc = Complex::with_val(prec, 0u32);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let u = Float::with_val(prec, &half * x) + &mid;
            acc += f(&u) * w;
        }
        acc * half
    }
}

/// One tanh-sinh node: distance of the abscissa from its nearer endpoint on
/// `[-1, 1]` (kept separately to avoid cancellation) and its weight.
#[derive(Debug)]
pub struct TanhSinhNode {
    pub gap: APReal,
    pub weight: APReal,
}

/// Tanh-sinh rule with step `2^-level`, truncated once weights fall below
/// `2^-prec`. The centre node has gap 1.
#[derive(Debug)]
pub struct TanhSinh {
    pub centre_weight: APReal,
    pub nodes: Vec<TanhSinhNode>,
}

type TsCache = Mutex<HashMap<(u32, u32), Arc<TanhSinh>>>;

fn ts_cache() -> &'static TsCache {
    static CACHE: OnceLock<TsCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn build_tanh_sinh(level: u32, prec: u32) -> TanhSinh {
    let wp = prec + 16;
    let h = Float::with_val(wp, 1u32) >> level;
    let half_pi = Float::with_val(wp, rug::float::Constant::Pi) / 2u32;
    let centre_weight = Float::with_val(wp, &h * &half_pi);
    // Stop well past 2^-prec so that integrable endpoint singularities
    // (gap^{-1/2} and milder) are still truncated below the tolerance.
    let tiny = Float::with_val(wp, 1u32) >> (2 * prec + 8);
    let mut nodes = Vec::new();
    let mut k = 1u32;
    loop {
        let kh = Float::with_val(wp, &h * k);
        let (sinh_kh, cosh_kh) = kh.sinh_cosh(Float::new(wp));
        let y = Float::with_val(wp, &half_pi * &sinh_kh);
        // 1 - tanh y = 2 / (1 + e^{2y})
        let e2y = Float::with_val(wp, &y * 2u32).exp();
        let gap = Float::with_val(wp, 2u32) / (Float::with_val(wp, 1u32) + &e2y);
        let cosh_y = y.cosh();
        let weight = Float::with_val(wp, &h * &half_pi) * cosh_kh / cosh_y.square();
        if weight < tiny || gap.is_zero() {
            break;
        }
        nodes.push(TanhSinhNode {
            gap: Float::with_val(prec, &gap),
            weight: Float::with_val(prec, &weight),
        });
        k += 1;
    }
    TanhSinh {
        centre_weight: Float::with_val(prec, &centre_weight),
        nodes,
    }
}

pub fn tanh_sinh(level: u32, prec: u32) -> Arc<TanhSinh> {
    if let Some(rule) = ts_cache().lock().expect("rule cache").get(&(level, prec)) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build_tanh_sinh(level, prec));
    ts_cache()
        .lock()
        .expect("rule cache")
        .entry((level, prec))
        .or_insert_with(|| Arc::clone(&rule))
        .clone()
}

impl TanhSinh {
    pub fn len(&self) -> usize {
        2 * self.nodes.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `∫_a^b f(x) dx` where the integrand may be singular at either end.
    /// `f` receives the abscissa together with its distances to `a` and `b`,
    /// which stay accurate near the endpoints.
    pub fn integrate<F>(&self, a: &APReal, b: &APReal, prec: u32, mut f: F) -> APComplex
    where
        F: FnMut(&APReal, &APReal, &APReal) -> APComplex,
    {
        let len = Float::with_val(prec, b - a);
        let half = Float::with_val(prec, &len / 2u32);
        let mid = Float::with_val(prec, b + a) / 2u32;
        let mut acc = f(&mid, &half, &half) * &self.centre_weight;
        for node in &self.nodes {
            let near = Float::with_val(prec, &half * &node.gap);
            let far = Float::with_val(prec, &len - &near);
            let left = Float::with_val(prec, a + &near);
            let right = Float::with_val(prec, b - &near);
            acc += f(&left, &near, &far) * &node.weight;
            acc += f(&right, &far, &near) * &node.weight;
        }
        acc * half
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(20, 256);
        let a = Float::with_val(256, -1i32);
        let b = Float::with_val(256, 2u32);
        // ∫_{-1}^{2} x^39 dx = (2^40 - 1) / 40
        let v = rule.integrate(&a, &b, 256, |x| Complex::with_val(256, x.clone().pow(39u32)));
        let exact = (Float::with_val(256, 1u64 << 40) - 1u32) / 40u32;
        let err = Float::with_val(256, v.real() - &exact).abs() / &exact;
        assert!(err < Float::with_val(256, 1u32) >> 240u32);
        let total: Float = rule.weights.iter().fold(Float::with_val(256, 0), |s, w| s + w);
        assert!(Float::with_val(256, total - 2u32).abs() < Float::with_val(256, 1) >> 240u32);
    }

    #[test]
    fn gauss_legendre_odd_has_zero_node() {
        let rule = gauss_legendre(7, 128);
        assert!(rule.nodes[3].is_zero());
        for w in rule.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn tanh_sinh_handles_log_endpoint() {
        let prec = 256;
        let rule = tanh_sinh(5, prec);
        let a = Float::with_val(prec, 0u32);
        let b = Float::with_val(prec, 1u32);
        // ∫_0^1 log x dx = -1, singular at the left end
        let v = rule.integrate(&a, &b, prec, |_, da, _| Complex::with_val(prec, da.clone().ln()));
        let err = Float::with_val(prec, v.real() + 1u32).abs();
        assert!(err < 1e-60, "{err}");
        // ∫_0^1 1/sqrt(1-x) dx = 2, singular at the right end
        let v = rule.integrate(&a, &b, prec, |_, _, db| {
            Complex::with_val(prec, db.clone().recip_sqrt())
        });
        let err = Float::with_val(prec, v.real() - 2u32).abs();
        assert!(err < 1e-60, "{err}");
    }
}
