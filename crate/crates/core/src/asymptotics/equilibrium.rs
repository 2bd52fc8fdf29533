//! Equilibrium measure of the gapped phase and the functions built on it.
//!
//! With `θ` the angle on the unit circle, the measure has density
//! `ρ(θ) = (τ/π) cos(θ/2) √(1/τ - sin²(θ/2))` on `|θ| ≤ θ_c`, so that
//! `ψ(s) ds = ρ(θ) dθ`. The square root
//! `R(z) = √((z-ξ)(z-ξ⁻¹))` is analytic off `C₂` and behaves like `z` at
//! infinity. Its limit from inside the unit disk (the `+` side of the arc)
//! is `-2 e^{iθ/2} √(1/τ - sin²(θ/2))`.
//!
//! For every support point `s = e^{iθ}`, `log(z - s)` is analytic off
//! `(-∞, -1] ∪ {e^{iϕ} : -π ≤ ϕ ≤ θ}` and tends to `log z` at `+∞`. The
//! branch is fixed by continuing `arg(z - s)` in `f64` along a polygon from
//! a point far out on the positive axis. Each polygon edge is straight, so
//! the principal argument of the ratio of consecutive differences equals the
//! angle it sweeps. The continuation is therefore exact once the polygon
//! avoids the cut.

use std::f64::consts::PI;

use num_complex::Complex64;
use rug::float::Constant;
use rug::{Complex, Float};

use super::sup::SuperGeometry;
use crate::error::{GwwError, Result};
use crate::precision::{abs_c, APComplex, APReal};
use crate::special::quadrature::{gauss_legendre, tanh_sinh, TanhSinh};

/// Side of an oriented contour. On the unit circle `Plus` is the inside of
/// the disk. On `(-∞, -1)` it is the lower half plane; that is where the
/// stated jump `g₊ - g₋ = -2πi` is observed with the branch above.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// Offset used to pick the side of a cut in the `f64` branch continuation.
const SIDE_OFFSET: f64 = 1e-6;

fn to_c64(z: &APComplex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

/// Argument of `zp - e^{iθ}` continued from `+∞` without crossing the cut of
/// `log(· - e^{iθ})`.
fn continued_arg(zp: Complex64, theta: f64) -> f64 {
    let s = Complex64::from_polar(1.0, theta);
    let r = zp.norm() + 3.0;
    let mut pts = Vec::with_capacity(24);
    let arc = |pts: &mut Vec<Complex64>, to: f64| {
        for j in 0..=16 {
            pts.push(Complex64::from_polar(r, to * j as f64 / 16.0));
        }
    };
    if zp.norm() >= 1.0 {
        arc(&mut pts, zp.arg());
    } else {
        // enter the disk through the gap between θ and π
        let gate = (theta + PI) / 2.0;
        arc(&mut pts, gate);
        pts.push(Complex64::from_polar(1.0, gate));
    }
    pts.push(zp);
    let mut a = (pts[0] - s).arg();
    for w in pts.windows(2) {
        a += ((w[1] - s) / (w[0] - s)).arg();
    }
    a
}

/// Smallest tanh-sinh level whose rule has at least `nodes` points.
fn tanh_sinh_at_least(nodes: usize, prec: u32) -> std::sync::Arc<TanhSinh> {
    let mut level = 2;
    loop {
        let rule = tanh_sinh(level, prec);
        if rule.len() >= nodes || level >= 12 {
            return rule;
        }
        level += 1;
    }
}

impl SuperGeometry {
    fn pi(&self) -> APReal {
        Float::with_val(self.prec, Constant::Pi)
    }

    fn two_pi_i(&self) -> APComplex {
        Complex::with_val(self.prec, (0u32, self.pi() * 2u32))
    }

    /// `R(z) = (z - ξ̄) · e^{iθ_c/2} √(F(z) e^{-iθ_c})`, `F = (z-ξ)/(z-ξ̄)`.
    /// `F` maps `C₂` onto the ray `arg w = θ_c + π`, which the rotated
    /// principal root puts on its cut.
    pub fn root(&self, z: &APComplex) -> APComplex {
        let p = self.prec;
        let xi_bar = Complex::with_val(p, self.xi.conj_ref());
        let num = Complex::with_val(p, z - &self.xi);
        let den = Complex::with_val(p, z - &xi_bar);
        let rot = Complex::with_val(p, (0u32, -Float::with_val(p, &self.theta_c))).exp();
        let half_rot = Complex::with_val(p, (0u32, Float::with_val(p, &self.theta_c / 2u32))).exp();
        let w = Complex::with_val(p, &num / &den) * rot;
        w.sqrt() * half_rot * den
    }

    /// `2√(sin((θ_c-θ)/2) sin((θ_c+θ)/2)) = 2√(1/τ - sin²(θ/2))` from the two
    /// endpoint distances.
    fn arc_height(&self, to_upper: &APReal, to_lower: &APReal) -> APReal {
        let p = self.prec;
        let a = Float::with_val(p, to_upper / 2u32).sin();
        let b = Float::with_val(p, to_lower / 2u32).sin();
        let prod = a * b;
        if prod.is_sign_negative() {
            return Float::with_val(p, 0u32);
        }
        prod.sqrt() * 2u32
    }

    /// `R±(e^{iθ})`; the inside limit carries the minus sign.
    pub fn root_boundary(&self, theta: &APReal, side: Side) -> APComplex {
        let p = self.prec;
        let up = Float::with_val(p, &self.theta_c - theta);
        let lo = Float::with_val(p, &self.theta_c + theta);
        self.root_boundary_split(theta, &up, &lo, side)
    }

    fn root_boundary_split(&self, theta: &APReal, up: &APReal, lo: &APReal, side: Side) -> APComplex {
        let p = self.prec;
        let h = self.arc_height(up, lo);
        let e = Complex::with_val(p, (0u32, Float::with_val(p, theta / 2u32))).exp() * h;
        match side {
            Side::Plus => -e,
            Side::Minus => e,
        }
    }

    fn density_split(&self, theta: &APReal, up: &APReal, lo: &APReal) -> APReal {
        let p = self.prec;
        let c = Float::with_val(p, theta / 2u32).cos();
        let h = self.arc_height(up, lo);
        c * h * &self.tau / (self.pi() * 2u32)
    }

    /// `ρ(θ)`, the density against `dθ`; zero at `±θ_c`.
    pub fn psi_density(&self, theta: &APReal) -> Result<APReal> {
        if Float::with_val(self.prec, theta.abs_ref()) > self.theta_c {
            return Err(GwwError::OutOfRange(format!("θ = {theta} lies off the support arc")));
        }
        let p = self.prec;
        let up = Float::with_val(p, &self.theta_c - theta);
        let lo = Float::with_val(p, &self.theta_c + theta);
        Ok(self.density_split(theta, &up, &lo))
    }

    /// `ψ(s) = (τ/(4πi)) (s+1)/s² R₋(s)` at `s = e^{iθ}`, literally.
    /// `ψ(s) · i s` reproduces [`psi_density`](Self::psi_density).
    pub fn psi_literal(&self, theta: &APReal) -> APComplex {
        let p = self.prec;
        let s = Complex::with_val(p, (0u32, theta)).exp();
        let s2 = Complex::with_val(p, s.square_ref());
        let pref = Complex::with_val(p, (0u32, self.pi() * 4u32)).recip() * &self.tau;
        let r = self.root_boundary(theta, Side::Minus);
        pref * Complex::with_val(p, &s + 1u32) / s2 * r
    }

    /// Gauss–Legendre over `u ∈ [-π/2, π/2]` with `θ = θ_c sin u`, which
    /// absorbs the square-root vanishing of `ρ` at both ends.
    fn support_integral<F>(&self, nodes: usize, mut f: F) -> APComplex
    where
        F: FnMut(&APReal, &APReal) -> APComplex,
    {
        let p = self.prec;
        let rule = gauss_legendre(nodes, p);
        let half_pi = self.pi() / 2u32;
        let a = Float::with_val(p, -&half_pi);
        rule.integrate(&a, &half_pi, p, |u| {
            let (sin_u, cos_u) = u.clone().sin_cos(Float::new(p));
            let theta = Float::with_val(p, &self.theta_c * &sin_u);
            // θ_c ∓ θ = 2θ_c sin²(π/4 ∓ u/2) without cancellation
            let q = Float::with_val(p, &half_pi / 2u32);
            let hu = Float::with_val(p, u / 2u32);
            let up = Float::with_val(p, &q - &hu).sin().square() * &self.theta_c * 2u32;
            let lo = Float::with_val(p, &q + &hu).sin().square() * &self.theta_c * 2u32;
            let rho = self.density_split(&theta, &up, &lo);
            let jac = Float::with_val(p, &self.theta_c * &cos_u);
            f(&theta, &Float::with_val(p, rho * jac))
        })
    }

    /// `∫ ρ(θ) dθ`, which must equal 1.
    pub fn mass(&self, nodes: usize) -> APReal {
        let v = self.support_integral(nodes, |_, w| Complex::with_val(self.prec, w));
        Float::with_val(self.prec, v.real())
    }

    /// `log(z - e^{iθ})` on the branch seen from `zp` (a point on the wanted
    /// side of any cut through `z`); `diff = z - e^{iθ}` is passed in so the
    /// caller can form it without cancellation.
    fn branch_log(&self, diff: &APComplex, zp: Complex64, theta: f64) -> APComplex {
        let p = self.prec;
        let principal = Complex::with_val(p, diff.ln_ref());
        let pa = principal.imag().to_f64();
        let a = continued_arg(zp, theta);
        let k = ((a - pa) / (2.0 * PI)).round();
        if k == 0.0 {
            principal
        } else {
            principal + self.two_pi_i() * (k as i32)
        }
    }

    /// `g(z)` by quadrature with the branch taken from `zp`.
    fn g_from(&self, z: &APComplex, zp: Complex64, nodes: usize) -> APComplex {
        let p = self.prec;
        let v = self.support_integral(nodes, |theta, w| {
            let s = Complex::with_val(p, (0u32, theta)).exp();
            let diff = Complex::with_val(p, z - &s);
            self.branch_log(&diff, zp, theta.to_f64()) * w
        });
        Complex::with_val(p, v)
    }

    fn on_cut(&self, z: &APComplex) -> bool {
        let zc = to_c64(z);
        let on_circle = (zc.norm() - 1.0).abs() < 1e-12;
        let tc = self.theta_c.to_f64();
        let on_neg_axis = zc.im.abs() < 1e-300 && zc.re <= -1.0;
        (on_circle && zc.arg() <= tc + 1e-12) || on_neg_axis
    }

    /// `g(z) = ∫ log(z - s) ψ(s) ds` for `z` off `(-∞,-1] ∪ {e^{iϕ}: -π ≤ ϕ ≤ θ_c}`.
    pub fn g(&self, z: &APComplex, nodes: usize) -> Result<APComplex> {
        if self.on_cut(z) {
            return Err(GwwError::OnCut(format!("g is not defined on its cut at z = {z}")));
        }
        Ok(self.g_from(z, to_c64(z), nodes))
    }

    /// Boundary value of `g` at `e^{iθ₀}` on the unit circle from the given
    /// side. On `C₂` the logarithmic singularity at `θ₀` is handled by
    /// splitting there and using tanh-sinh on both halves.
    pub fn g_circle(&self, theta0: &APReal, side: Side, nodes: usize) -> APComplex {
        let p = self.prec;
        let z = Complex::with_val(p, (0u32, theta0)).exp();
        let zp = to_c64(&z) * (1.0 - side.sign() * SIDE_OFFSET);
        if Float::with_val(p, theta0.abs_ref()) >= self.theta_c {
            return self.g_from(&z, zp, nodes);
        }
        let rule = tanh_sinh_at_least(nodes, p);
        let lower = Float::with_val(p, -&self.theta_c);
        // z - e^{iθ} = -2i sin((θ-θ₀)/2) e^{i(θ+θ₀)/2}
        let chord = |delta: &APReal, theta: &APReal| -> APComplex {
            let sin_h = Float::with_val(p, delta / 2u32).sin();
            let phase = Complex::with_val(p, (0u32, Float::with_val(p, theta + theta0) / 2u32)).exp();
            Complex::with_val(p, (0u32, sin_h * -2i32)) * phase
        };
        let left = rule.integrate(&lower, theta0, p, |theta, da, db| {
            let up = Float::with_val(p, &self.theta_c - theta);
            let rho = self.density_split(theta, &up, da);
            let diff = chord(&Float::with_val(p, -db), theta);
            self.branch_log(&diff, zp, theta.to_f64()) * rho
        });
        let right = rule.integrate(theta0, &self.theta_c, p, |theta, da, db| {
            let lo = Float::with_val(p, &self.theta_c + theta);
            let rho = self.density_split(theta, db, &lo);
            let diff = chord(da, theta);
            self.branch_log(&diff, zp, theta.to_f64()) * rho
        });
        left + right
    }

    /// Boundary value of `g` at `x < -1`; `Plus` is the lower lip.
    pub fn g_negative_axis(&self, x: &APReal, side: Side, nodes: usize) -> APComplex {
        let z = Complex::with_val(self.prec, x);
        let zp = Complex64::new(x.to_f64(), -side.sign() * SIDE_OFFSET);
        self.g_from(&z, zp, nodes)
    }

    /// `-(τ/4) ∫ (s+1)/s² R(s) ds` along the path from `e^{iα₀}` radially to
    /// radius `r`, then along `|s| = r` to angle `α₁`. Both legs use the
    /// substitution `v²` so the square-root zero at the start is harmless.
    fn phi_path(&self, alpha0: &APReal, r: &APReal, alpha1: &APReal, nodes: usize) -> APComplex {
        let p = self.prec;
        let rule = gauss_legendre(nodes, p);
        let zero = Float::with_val(p, 0u32);
        let one = Float::with_val(p, 1u32);
        let start = Complex::with_val(p, (0u32, alpha0)).exp();
        let integrand = |s: &APComplex| -> APComplex {
            let s2 = Complex::with_val(p, s.square_ref());
            Complex::with_val(p, s + 1u32) / s2 * self.root(s)
        };
        let mut total = Complex::with_val(p, 0u32);
        let r_minus_1 = Float::with_val(p, r - 1u32);
        if !r_minus_1.is_zero() {
            let corner = Complex::with_val(p, &start * r);
            let span = Complex::with_val(p, &corner - &start);
            total += rule.integrate(&zero, &one, p, |v| {
                let v2 = Float::with_val(p, v.square_ref());
                let s = Complex::with_val(p, &span * &v2) + &start;
                integrand(&s) * Complex::with_val(p, &span * v) * 2u32
            });
        }
        let sweep = Float::with_val(p, alpha1 - alpha0);
        if !sweep.is_zero() {
            total += rule.integrate(&zero, &one, p, |v| {
                let v2 = Float::with_val(p, v.square_ref());
                let alpha = Float::with_val(p, &sweep * &v2) + alpha0;
                let s = Complex::with_val(p, (0u32, &alpha)).exp() * r;
                // ds = i s dα, dα = 2 sweep v dv
                let ds = Complex::with_val(p, (0u32, Float::with_val(p, &sweep * v) * 2u32)) * &s;
                integrand(&s) * ds
            });
        }
        total * -Float::with_val(p, &self.tau / 4u32)
    }

    fn phi_checked(&self, z: &APComplex, alpha0: &APReal, nodes: usize) -> Result<APComplex> {
        let zc = to_c64(z);
        let on_arc = (zc.norm() - 1.0).abs() < 1e-12 && zc.arg().abs() < self.theta_c.to_f64();
        if on_arc || (zc.im == 0.0 && zc.re <= 0.0) {
            return Err(GwwError::OnCut(format!("φ is not defined on C₂ ∪ (-∞, 0] at z = {z}")));
        }
        let p = self.prec;
        let r = Float::with_val(p, z.abs_ref());
        let alpha1 = Float::with_val(p, z.arg_ref());
        Ok(self.phi_path(alpha0, &r, &alpha1, nodes))
    }

    /// `φ(z) = -(τ/4) ∫_ξ^z (s+1)/s² R(s) ds`.
    pub fn phi(&self, z: &APComplex, nodes: usize) -> Result<APComplex> {
        self.phi_checked(z, &self.theta_c.clone(), nodes)
    }

    /// `φ̃(z)`, the same integral started at `ξ⁻¹`.
    pub fn phi_tilde(&self, z: &APComplex, nodes: usize) -> Result<APComplex> {
        self.phi_checked(z, &Float::with_val(self.prec, -&self.theta_c), nodes)
    }

    /// `φ̃±(x)` for `x < -1`. The `Plus` lip is below the axis and is reached
    /// by sweeping clockwise from `ξ⁻¹`; `Minus` sweeps through the right
    /// half plane to the upper lip.
    pub fn phi_tilde_negative_axis(&self, x: &APReal, side: Side, nodes: usize) -> APComplex {
        let p = self.prec;
        let r = Float::with_val(p, x.abs_ref());
        let end = match side {
            Side::Plus => -self.pi(),
            Side::Minus => self.pi(),
        };
        self.phi_path(&Float::with_val(p, -&self.theta_c), &r, &end, nodes)
    }

    /// `φ±(e^{iθ₀})` on `C₂`, integrating along the arc from `ξ` with the
    /// boundary values `R±`.
    pub fn phi_boundary(&self, theta0: &APReal, side: Side, nodes: usize) -> APComplex {
        let p = self.prec;
        let rule = gauss_legendre(nodes, p);
        let zero = Float::with_val(p, 0u32);
        let one = Float::with_val(p, 1u32);
        let span = Float::with_val(p, theta0 - &self.theta_c);
        let v = rule.integrate(&zero, &one, p, |v| {
            let v2 = Float::with_val(p, v.square_ref());
            let theta = Float::with_val(p, &span * &v2) + &self.theta_c;
            let up = -Float::with_val(p, &span * &v2);
            let lo = Float::with_val(p, &self.theta_c + &theta);
            let s = Complex::with_val(p, (0u32, &theta)).exp();
            let r = self.root_boundary_split(&theta, &up, &lo, side);
            // (s+1)/s² · R · i s dθ, dθ = 2 span v dv
            let f = Complex::with_val(p, &s + 1u32) / &s * r;
            f * Complex::with_val(p, (0u32, Float::with_val(p, &span * v) * 2u32))
        });
        v * -Float::with_val(p, &self.tau / 4u32)
    }

    /// `|g₊ + g₋ - V + l - log z - πi|` at `z = e^{iθ₀}`, `|θ₀| < θ_c`.
    pub fn euler_lagrange_residual(&self, theta0: &APReal, nodes: usize) -> APReal {
        let p = self.prec;
        let z = Complex::with_val(p, (0u32, theta0)).exp();
        let gp = self.g_circle(theta0, Side::Plus, nodes);
        let gm = self.g_circle(theta0, Side::Minus, nodes);
        let mut r = gp + gm - self.potential(&z);
        r += &self.l;
        r -= Complex::with_val(p, (0u32, theta0));
        r -= Complex::with_val(p, (0u32, self.pi()));
        abs_c(&r)
    }

    /// Variational relation on `C₁`:
    /// `2g - V + l = log z - 2φ(z) + πi` above, with `φ̃` below.
    pub fn euler_lagrange_c1(&self, theta0: &APReal, nodes: usize) -> Result<APReal> {
        let p = self.prec;
        let z = Complex::with_val(p, (0u32, theta0)).exp();
        let gp = self.g_circle(theta0, Side::Plus, nodes);
        let gm = self.g_circle(theta0, Side::Minus, nodes);
        let f = if *theta0 > 0 {
            self.phi(&z, nodes)?
        } else {
            self.phi_tilde(&z, nodes)?
        };
        let mut r = gp + gm - self.potential(&z);
        r += &self.l;
        r -= Complex::with_val(p, (0u32, theta0));
        r += f * 2u32;
        r -= Complex::with_val(p, (0u32, self.pi()));
        Ok(abs_c(&r))
    }

    /// The lower-`C₁` relation continued to `x < -1` along the `+` lip:
    /// `|g₊ + g₋ - V + l - log z + 2φ̃₊(x) - πi|` with `log z = log|x| - πi`.
    pub fn euler_lagrange_negative_axis(&self, x: &APReal, nodes: usize) -> APReal {
        let p = self.prec;
        let z = Complex::with_val(p, x);
        let gp = self.g_negative_axis(x, Side::Plus, nodes);
        let gm = self.g_negative_axis(x, Side::Minus, nodes);
        let mut r = gp + gm - self.potential(&z);
        r += &self.l;
        r -= Float::with_val(p, x.abs_ref()).ln();
        r += self.phi_tilde_negative_axis(x, Side::Plus, nodes) * 2u32;
        abs_c(&r)
    }

    /// Residuals of every jump and variational relation at fixed sample
    /// points: `θ₀ ∈ {0, θ_c/2, -θ_c/3}` on `C₂`, `±(θ_c+π)/2` on `C₁` and
    /// `x = -3` on the negative axis.
    pub fn jump_report(&self, nodes: usize) -> Result<JumpReport> {
        let p = self.prec;
        let pi = self.pi();
        let two_pi_i = self.two_pi_i();
        let c2_points = [
            Float::with_val(p, 0u32),
            Float::with_val(p, &self.theta_c / 2u32),
            -Float::with_val(p, &self.theta_c / 3u32),
        ];
        let mut rep = JumpReport::default();
        for th in &c2_points {
            let gp = self.g_circle(th, Side::Plus, nodes);
            let gm = self.g_circle(th, Side::Minus, nodes);
            let jump = Complex::with_val(p, &gp - &gm);
            let fp = self.phi_boundary(th, Side::Plus, nodes);
            let fm = self.phi_boundary(th, Side::Minus, nodes);
            rep.c2_plus = rep
                .c2_plus
                .max(abs_c(&(Complex::with_val(p, &fp * 2u32) + &jump)).to_f64());
            rep.c2_minus = rep
                .c2_minus
                .max(abs_c(&(Complex::with_val(p, &fm * -2i32) + &jump)).to_f64());
            rep.euler_lagrange_c2 = rep
                .euler_lagrange_c2
                .max(self.euler_lagrange_residual(th, nodes).to_f64());
        }
        let upper = Float::with_val(p, &self.theta_c + &pi) / 2u32;
        let lower = -Float::with_val(p, &upper);
        let ju = self.g_circle(&upper, Side::Plus, nodes) - self.g_circle(&upper, Side::Minus, nodes);
        rep.c1_upper = abs_c(&ju).to_f64();
        let jl = self.g_circle(&lower, Side::Plus, nodes) - self.g_circle(&lower, Side::Minus, nodes);
        rep.c1_lower = abs_c(&Complex::with_val(p, &jl - &two_pi_i)).to_f64();
        rep.euler_lagrange_c1 = self
            .euler_lagrange_c1(&upper, nodes)?
            .to_f64()
            .max(self.euler_lagrange_c1(&lower, nodes)?.to_f64());
        let x = Float::with_val(p, -3i32);
        let jn = self.g_negative_axis(&x, Side::Plus, nodes) - self.g_negative_axis(&x, Side::Minus, nodes);
        rep.negative_axis = abs_c(&Complex::with_val(p, &jn + &two_pi_i)).to_f64();
        rep.euler_lagrange_negative_axis = self.euler_lagrange_negative_axis(&x, nodes).to_f64();
        Ok(rep)
    }

    /// Conformal map `φ_D(z) = (z + 1 - R(z)) / (2 cos(θ_c/2))`.
    pub fn szego_map(&self, z: &APComplex) -> APComplex {
        let p = self.prec;
        let c = Float::with_val(p, &self.theta_c / 2u32).cos() * 2u32;
        (Complex::with_val(p, z + 1u32) - self.root(z)) / c
    }

    /// Szegő function `D(z) = φ_D(z)^ν` (principal power).
    pub fn szego(&self, z: &APComplex) -> APComplex {
        let p = self.prec;
        (Complex::with_val(p, self.szego_map(z).ln_ref()) * &self.nu).exp()
    }

    fn szego_map_boundary(&self, theta: &APReal, side: Side) -> APComplex {
        let p = self.prec;
        let c = Float::with_val(p, &self.theta_c / 2u32).cos() * 2u32;
        let z = Complex::with_val(p, (0u32, theta)).exp();
        (z + 1u32 - self.root_boundary(theta, side)) / c
    }

    /// Checks `φ₊φ₋ = z` and `D₊D₋ = z^ν` on `C₂` and `D(z) → D_∞`.
    pub fn szego_report(&self) -> SzegoReport {
        let p = self.prec;
        let mut rep = SzegoReport::default();
        for frac in [-0.7f64, 0.0, 0.3, 0.9] {
            let theta = Float::with_val(p, &self.theta_c * frac);
            let z = Complex::with_val(p, (0u32, &theta)).exp();
            let fp = self.szego_map_boundary(&theta, Side::Plus);
            let fm = self.szego_map_boundary(&theta, Side::Minus);
            let prod = Complex::with_val(p, &fp * &fm);
            rep.map_product = rep.map_product.max(abs_c(&(prod - &z)).to_f64());
            let dp = (Complex::with_val(p, fp.ln_ref()) * &self.nu).exp();
            let dm = (Complex::with_val(p, fm.ln_ref()) * &self.nu).exp();
            let z_nu = Complex::with_val(p, (0u32, &theta)) * &self.nu;
            let diff = Complex::with_val(p, &dp * &dm) - z_nu.exp();
            rep.d_product = rep.d_product.max(abs_c(&diff).to_f64());
        }
        let far = Complex::with_val(p, (Float::with_val(p, 1u32) << 60u32, 1u32));
        rep.d_infinity = abs_c(&(self.szego(&far) - &self.d_inf)).to_f64();
        rep
    }
}

/// Worst residuals of the `g`-function relations; every entry should be at
/// quadrature accuracy.
#[derive(Clone, Debug, Default)]
pub struct JumpReport {
    /// `|g₊ - g₋ + 2φ₊|` on `C₂`.
    pub c2_plus: f64,
    /// `|g₊ - g₋ - 2φ₋|` on `C₂`.
    pub c2_minus: f64,
    /// `|g₊ - g₋|` on the upper part of `C₁`.
    pub c1_upper: f64,
    /// `|g₊ - g₋ - 2πi|` on the lower part of `C₁`.
    pub c1_lower: f64,
    /// `|g₊ - g₋ + 2πi|` on `(-∞, -1)`.
    pub negative_axis: f64,
    pub euler_lagrange_c2: f64,
    pub euler_lagrange_c1: f64,
    pub euler_lagrange_negative_axis: f64,
}

impl JumpReport {
    pub fn worst_jump(&self) -> f64 {
        [
            self.c2_plus,
            self.c2_minus,
            self.c1_upper,
            self.c1_lower,
            self.negative_axis,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn worst(&self) -> f64 {
        [
            self.worst_jump(),
            self.euler_lagrange_c2,
            self.euler_lagrange_c1,
            self.euler_lagrange_negative_axis,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SzegoReport {
    /// `max |φ₊φ₋ - z|` on `C₂`.
    pub map_product: f64,
    /// `max |D₊D₋ - z^ν|` on `C₂`.
    pub d_product: f64,
    /// `|D(z) - D_∞|` at `|z| = 2^60`.
    pub d_infinity: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::sup::super_geometry;
    use crate::precision::{agreeing_digits, PrecisionContext};

    fn geo(tau: f64) -> SuperGeometry {
        let c = PrecisionContext::new(256).unwrap();
        super_geometry(&c.real(tau), &c.complex(0.4f64), &c).unwrap()
    }

    #[test]
    fn density_endpoints_and_mass() {
        for tau in [1.2, 1.5, 2.0, 3.0] {
            let g = geo(tau);
            assert!(g.psi_density(&g.theta_c).unwrap().is_zero());
            let m = g.mass(200);
            assert!(Float::with_val(256, m - 1u32).abs() < 1e-40, "τ = {tau}");
        }
        let g = geo(2.0);
        assert!(g.psi_density(&Float::with_val(256, 0u32)).unwrap() > 0);
        assert!(g.psi_density(&Float::with_val(256, 2u32)).is_err());
    }

    #[test]
    fn literal_density_matches() {
        let g = geo(2.0);
        for th in [-1.2f64, 0.0, 0.4, 1.5] {
            let theta = Float::with_val(256, th);
            let s = Complex::with_val(256, (0u32, &theta)).exp();
            let lit = g.psi_literal(&theta) * Complex::with_val(256, (0u32, 1u32)) * s;
            let rho = Complex::with_val(256, g.psi_density(&theta).unwrap());
            assert!(agreeing_digits(&lit, &rho) >= 70, "θ = {th}");
        }
    }

    #[test]
    fn root_sides() {
        let g = geo(2.0);
        let theta = Float::with_val(256, 0.3f64);
        let z = Complex::with_val(256, (0u32, &theta)).exp();
        let eps = Float::with_val(256, 1u32) >> 200u32;
        let inside = Complex::with_val(256, &z * (1u32 - Float::with_val(256, &eps)));
        let outside = Complex::with_val(256, &z * (1u32 + eps));
        assert!(agreeing_digits(&g.root(&inside), &g.root_boundary(&theta, Side::Plus)) >= 25);
        assert!(agreeing_digits(&g.root(&outside), &g.root_boundary(&theta, Side::Minus)) >= 25);
    }

    #[test]
    fn g_growth_and_conjugation() {
        let g = geo(2.0);
        let big = Complex::with_val(256, 1e6f64);
        let v = g.g(&big, 120).unwrap();
        let ratio = Float::with_val(256, v.real() / Float::with_val(256, 1e6f64).ln());
        assert!((ratio.to_f64() - 1.0).abs() < 1e-6);
        let z = Complex::with_val(256, (2.0, 1.0));
        let zb = Complex::with_val(256, (2.0, -1.0));
        let pt = g.phi_tilde(&z, 120).unwrap();
        let pc = Complex::with_val(256, g.phi(&zb, 120).unwrap().conj_ref());
        assert!(agreeing_digits(&pt, &pc) >= 60);
        assert!(g.g(&Complex::with_val(256, 1u32), 40).is_err());
        assert!(g.phi(&Complex::with_val(256, -2i32), 40).is_err());
    }

    #[test]
    fn variational_and_jump_relations() {
        let g = geo(2.0);
        let el = g.euler_lagrange_residual(&Float::with_val(256, 0u32), 200);
        assert!(el < 1e-30, "EL residual {el}");
        let rep = g.jump_report(200).unwrap();
        assert!(rep.worst() < 1e-25, "{rep:?}");
        let g15 = geo(1.5);
        let half = Float::with_val(256, &g15.theta_c / 2u32);
        assert!(g15.euler_lagrange_residual(&half, 200) < 1e-30);
    }

    #[test]
    fn real_part_sign_on_c1() {
        let g = geo(2.0);
        for frac in [0.1, 0.5, 0.9] {
            let th = g.theta_c.to_f64() + frac * (PI - g.theta_c.to_f64());
            let z = Complex::with_val(256, (0u32, Float::with_val(256, th))).exp();
            let f = g.phi(&z, 120).unwrap();
            assert!(*f.real() > 0, "θ = {th}: {f}");
        }
    }

    #[test]
    fn szego_relations() {
        let g = geo(2.0);
        let rep = g.szego_report();
        assert!(rep.map_product < 1e-60 && rep.d_product < 1e-60, "{rep:?}");
        assert!(rep.d_infinity < 1e-15, "{rep:?}");
    }
}
