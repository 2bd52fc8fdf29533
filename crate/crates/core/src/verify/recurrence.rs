use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{GwwError, Result};
use crate::precision::{abs_c, APComplex, APReal, PrecisionContext};
use crate::toeplitz::{horner, log_det, op_coefficients, wrap_branch, ModelParams, OrthoData};

/// Worst residuals of the polynomial recurrences and of Christoffel–Darboux.
#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    /// `π_{k+1} = zπ_k + π_{k+1}(0) π̃*_k` and its tilde partner, coefficient
    /// by coefficient, for `k < n`.
    pub three_term: APReal,
    /// `a_{k+1,k} - a_{k,k-1} = π_{k+1}(0) π̃_k(0)` and its tilde partner.
    pub subleading: APReal,
    /// Christoffel–Darboux at 10 random pairs on the unit circle.
    pub christoffel_darboux: APReal,
}

impl RecurrenceReport {
    pub fn worst(&self) -> &APReal {
        [&self.three_term, &self.subleading, &self.christoffel_darboux]
            .into_iter()
            .fold(&self.three_term, |a, b| if b > a { b } else { a })
    }
}

/// Minimum `|1 - z/a|` for a CD sample; nearer pairs need the limit form.
pub const CD_SEPARATION: f64 = 0.1;

const CD_SAMPLES: usize = 10;

fn scaled(diff: APComplex, scale: &APReal) -> APReal {
    let s = if *scale > 1 {
        scale.clone()
    } else {
        Float::with_val(scale.prec(), 1u32)
    };
    abs_c(&diff) / s
}

fn max_abs(v: &[APComplex], prec: u32) -> APReal {
    v.iter()
        .map(abs_c)
        .fold(Float::with_val(prec, 0u32), |a, b| if b > a { b } else { a })
}

fn max_into(acc: &mut APReal, v: APReal) {
    if v > *acc {
        *acc = v;
    }
}

fn three_term_residual(data: &OrthoData, k: usize, prec: u32) -> APReal {
    // π_{k+1} - z π_k - π_{k+1}(0) π̃*_k
    let next = &data.pi[k + 1];
    let star = data.tilde_star(k);
    let p0 = data.pi_at_zero(k + 1);
    let mut worst = Float::with_val(prec, 0u32);
    let scale = max_abs(next, prec);
    for (j, c) in next.iter().enumerate() {
        let mut r = c.clone();
        if j >= 1 {
            r -= &data.pi[k][j - 1];
        }
        if j <= k {
            r -= Complex::with_val(prec, p0 * &star[j]);
        }
        max_into(&mut worst, scaled(r, &scale));
    }
    // π̃*_{k+1} - π̃*_k - π̃_{k+1}(0) z π_k
    let star_next = data.tilde_star(k + 1);
    let q0 = data.tilde_at_zero(k + 1);
    let scale = max_abs(&star_next, prec);
    for (j, c) in star_next.iter().enumerate() {
        let mut r = c.clone();
        if j <= k {
            r -= &star[j];
        }
        if j >= 1 {
            r -= Complex::with_val(prec, q0 * &data.pi[k][j - 1]);
        }
        max_into(&mut worst, scaled(r, &scale));
    }
    worst
}

fn subleading_residual(data: &OrthoData, k: usize, prec: u32) -> APReal {
    let mut r1 = data.a_sub(k + 1) - data.a_sub(k);
    r1 -= Complex::with_val(prec, data.pi_at_zero(k + 1) * data.tilde_at_zero(k));
    let s1 = abs_c(&data.a_sub(k + 1));
    let mut r2 = data.a_tilde_sub(k + 1) - data.a_tilde_sub(k);
    r2 -= Complex::with_val(prec, data.tilde_at_zero(k + 1) * data.pi_at_zero(k));
    let s2 = abs_c(&data.a_tilde_sub(k + 1));
    let a = scaled(r1, &s1);
    let b = scaled(r2, &s2);
    if a > b {
        a
    } else {
        b
    }
}

/// Residual of
/// `(1 - z/a) Σ_{k<n} p_k(z) p̃_k(1/a) = a^{-n} p_n(a) z^n p̃_n(1/z) - p̃_n(1/a) p_n(z)`
/// with `p_k p̃_k = π_k π̃_k / h_k`, relative to the larger side.
pub fn christoffel_darboux_residual(
    data: &OrthoData,
    n: usize,
    z: &APComplex,
    a: &APComplex,
    prec: u32,
) -> Result<APReal> {
    let ratio = Complex::with_val(prec, z / a);
    let sep = abs_c(&Complex::with_val(prec, 1u32 - &ratio));
    if sep < CD_SEPARATION {
        return Err(GwwError::OutOfRange(format!(
            "Christoffel–Darboux pair too close: |1 - z/a| = {}",
            sep.to_f64()
        )));
    }
    let a_inv = Complex::with_val(prec, a.recip_ref());
    let z_inv = Complex::with_val(prec, z.recip_ref());
    let mut sum = Complex::with_val(prec, 0u32);
    for k in 0..n {
        let term = horner(&data.pi[k], z) * horner(&data.tilde[k], &a_inv) / &data.h[k];
        sum += term;
    }
    let lhs = Complex::with_val(prec, 1u32 - &ratio) * sum;
    let zn = Complex::with_val(prec, z).pow(n as u32);
    let an = Complex::with_val(prec, a).pow(n as u32);
    let mut rhs = horner(&data.pi[n], a) * zn * horner(&data.tilde[n], &z_inv) / an;
    rhs -= horner(&data.tilde[n], &a_inv) * horner(&data.pi[n], z);
    rhs /= &data.h[n];
    let scale = abs_c(&lhs).max(&abs_c(&rhs));
    Ok(scaled(lhs - rhs, &scale))
}

/// Random unit-circle pairs with `|1 - z/a| ≥ 0.1`, reproducible from `seed`.
pub fn cd_sample_points(seed: u64, count: usize, prec: u32) -> Vec<(APComplex, APComplex)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u: f64 = rng.gen();
        let v: f64 = rng.gen();
        let z = Complex::with_val(prec, (0u32, Float::with_val(prec, &two_pi * u))).exp();
        let a = Complex::with_val(prec, (0u32, Float::with_val(prec, &two_pi * v))).exp();
        let sep = abs_c(&Complex::with_val(prec, 1u32 - Complex::with_val(prec, &z / &a)));
        if sep >= CD_SEPARATION {
            out.push((z, a));
        }
    }
    out
}

/// Recurrence and Christoffel–Darboux residuals for sizes up to `params.n`.
pub fn check_recurrences_cd(params: &ModelParams, ctx: &PrecisionContext) -> Result<RecurrenceReport> {
    let (_, data) = op_coefficients(params, ctx)?;
    let prec = data.prec();
    let n = params.n;
    let mut three_term = Float::with_val(prec, 0u32);
    let mut subleading = Float::with_val(prec, 0u32);
    for k in 0..n {
        max_into(&mut three_term, three_term_residual(&data, k, prec));
        max_into(&mut subleading, subleading_residual(&data, k, prec));
    }
    let mut cd = Float::with_val(prec, 0u32);
    for (z, a) in cd_sample_points(0x6777_7731 ^ n as u64, CD_SAMPLES, prec) {
        max_into(&mut cd, christoffel_darboux_residual(&data, n, &z, &a, prec)?);
    }
    let r = |x: APReal| Float::with_val(ctx.bits, x);
    Ok(RecurrenceReport {
        three_term: r(three_term),
        subleading: r(subleading),
        christoffel_darboux: r(cd),
    })
}

/// `|log D_{n,ν}(t) - log D_{n,-ν}(t)|` for integer `ν ∈ {1, 2, 3}`.
pub fn check_symmetry(n: usize, t: &APReal, nu_int: i32, ctx: &PrecisionContext) -> Result<APReal> {
    if !(1..=3).contains(&nu_int) {
        return Err(GwwError::OutOfRange(format!(
            "symmetry check takes ν ∈ {{1,2,3}}, got {nu_int}"
        )));
    }
    let p = ctx.bits;
    let plus = ModelParams::new(n, Complex::with_val(p, nu_int), Float::with_val(p, t))?;
    let minus = plus.with_nu(Complex::with_val(p, -nu_int));
    let a = log_det(&plus, ctx)?.value();
    let b = log_det(&minus, ctx)?.value();
    Ok(abs_c(&wrap_branch(&Complex::with_val(p, &a - &b))))
}
