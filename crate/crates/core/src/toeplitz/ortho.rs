//! Monic bi-orthogonal polynomials `π_k`, `π̃_k` on the Hankel loop.
//!
//! Orthogonality `∫ π_k(s) s^{-i} w ds/(2πis) = 0` for `i < k` is the linear
//! system `Σ_j c_j m_{j-i} = -m_{k-i}`, i.e. `T_k c = -b` with the Toeplitz
//! matrix `T_{ij} = m_{j-i}`. The tilde family solves the transposed system.
//! A single unpivoted LU of `T_{N}` serves every size `k ≤ N` through its
//! leading blocks, and its pivots are the norms `h_k = D_{k+1}/D_k`.

use rug::Complex;

use super::logdet::{engine_context, LogDet};
use super::lu::{lu_unpivoted, CMatrix, UnpivotedLu};
use super::params::ModelParams;
use crate::error::{GwwError, Result};
use crate::precision::{APComplex, PrecisionContext};
use crate::special::{MomentCache, MomentTable};

/// Norms `h_k` and leading principal log-minors `log D_k`.
#[derive(Clone, Debug)]
pub struct HSequence {
    /// `h_0 … h_{len-1}`.
    pub h: Vec<APComplex>,
    /// `log D_0 = 0, log D_1, …, log D_len`.
    pub log_minors: Vec<LogDet>,
}

fn h_from_lu(lu: &UnpivotedLu, prec: u32) -> HSequence {
    let n = lu.size();
    let mut h = Vec::with_capacity(n);
    let mut log_minors = Vec::with_capacity(n + 1);
    let mut acc = LogDet::zero(prec);
    log_minors.push(acc.clone());
    for k in 0..n {
        let p = lu.pivot(k).clone();
        acc.push_factor(&p);
        log_minors.push(acc.clone());
        h.push(p);
    }
    HSequence { h, log_minors }
}

/// `h_0 … h_{n-1}` and `log D_0 … log D_n` for the given parameters.
pub fn h_sequence(params: &ModelParams, ctx: &PrecisionContext) -> Result<HSequence> {
    let e = engine_context(ctx, &params.t);
    let p = params.at_bits(e.bits);
    let table = MomentTable::symmetric(&p.nu, &p.t, p.n - 1, &e, None)?;
    let lu = lu_unpivoted(CMatrix::toeplitz(&table, p.n), &e)?;
    let hs = h_from_lu(&lu, e.bits);
    Ok(HSequence {
        h: hs.h.iter().map(|h| Complex::with_val(ctx.bits, h)).collect(),
        log_minors: hs.log_minors.iter().map(|l| l.rounded(ctx.bits)).collect(),
    })
}

/// Coefficient data for all sizes `0 ≤ k ≤ n_max`.
#[derive(Clone, Debug)]
pub struct OrthoData {
    pub n_max: usize,
    /// `pi[k]` holds the `k+1` ascending coefficients of `π_k` (last is 1).
    pub pi: Vec<Vec<APComplex>>,
    /// Same for `π̃_k`.
    pub tilde: Vec<Vec<APComplex>>,
    /// `h_0 … h_{n_max}`.
    pub h: Vec<APComplex>,
    /// `log D_0 … log D_{n_max+1}`.
    pub log_minors: Vec<LogDet>,
}

impl OrthoData {
    /// Builds everything from one unpivoted LU of `T_{n_max+1}`; the table
    /// must cover `|k| ≤ n_max`.
    pub fn build(table: &MomentTable, n_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        if !table.covers(n_max) {
            return Err(GwwError::OutOfRange(format!(
                "moment table does not cover |k| <= {n_max}"
            )));
        }
        let prec = ctx.bits;
        let lu = lu_unpivoted(CMatrix::toeplitz(table, n_max + 1), ctx)?;
        let hs = h_from_lu(&lu, prec);
        let mut pi = Vec::with_capacity(n_max + 1);
        let mut tilde = Vec::with_capacity(n_max + 1);
        for k in 0..=n_max {
            let ki = k as i64;
            let rhs: Vec<APComplex> = (0..ki).map(|i| -table.get(ki - i).clone()).collect();
            let mut c = lu.solve_leading(k, &rhs, prec);
            c.push(Complex::with_val(prec, 1u32));
            pi.push(c);
            let rhs: Vec<APComplex> = (0..ki).map(|i| -table.get(i - ki).clone()).collect();
            let mut d = lu.solve_leading_transposed(k, &rhs, prec);
            d.push(Complex::with_val(prec, 1u32));
            tilde.push(d);
        }
        Ok(OrthoData {
            n_max,
            pi,
            tilde,
            h: hs.h,
            log_minors: hs.log_minors,
        })
    }

    /// Precision the coefficients are held at.
    pub fn prec(&self) -> u32 {
        self.h[0].prec().0
    }

    /// `γ_k = h_k^{-1/2}` (principal root).
    pub fn gamma(&self, k: usize) -> APComplex {
        self.h[k].clone().sqrt().recip()
    }

    /// Sub-leading coefficient `a_{k,k-1}` of `π_k` (zero for `k = 0`).
    pub fn a_sub(&self, k: usize) -> APComplex {
        if k == 0 {
            Complex::with_val(self.pi[0][0].prec(), 0u32)
        } else {
            self.pi[k][k - 1].clone()
        }
    }

    /// Sub-leading coefficient `ã_{k,k-1}` of `π̃_k`.
    pub fn a_tilde_sub(&self, k: usize) -> APComplex {
        if k == 0 {
            Complex::with_val(self.tilde[0][0].prec(), 0u32)
        } else {
            self.tilde[k][k - 1].clone()
        }
    }

    pub fn pi_at_zero(&self, k: usize) -> &APComplex {
        &self.pi[k][0]
    }

    pub fn tilde_at_zero(&self, k: usize) -> &APComplex {
        &self.tilde[k][0]
    }

    pub fn eval_pi(&self, k: usize, z: &APComplex) -> APComplex {
        horner(&self.pi[k], z)
    }

    pub fn eval_tilde(&self, k: usize, z: &APComplex) -> APComplex {
        horner(&self.tilde[k], z)
    }

    /// Reversed polynomial `π̃*_k(z) = z^k π̃_k(1/z)`, ascending coefficients.
    pub fn tilde_star(&self, k: usize) -> Vec<APComplex> {
        self.tilde[k].iter().rev().cloned().collect()
    }

    /// Bilinear pairing `∫ s^a (s^{-1})^b w ds/(2πis) = m_{a-b}` extended to
    /// the coefficient vectors of `π_j` and `π̃_k`.
    pub fn pairing(&self, table: &MomentTable, j: usize, k: usize, prec: u32) -> APComplex {
        let mut acc = Complex::with_val(prec, 0u32);
        for (a, ca) in self.pi[j].iter().enumerate() {
            for (b, cb) in self.tilde[k].iter().enumerate() {
                let m = table.get(a as i64 - b as i64);
                acc += Complex::with_val(prec, ca * cb) * m;
            }
        }
        acc
    }
}

/// Coefficient data for `k ≤ params.n + 1`, enough for Y-snapshots at sizes
/// `n` and `n + 1`. Everything is computed, and returned, at the raised
/// precision of [`engine_context`]; see [`OrthoData::prec`].
pub fn op_coefficients(params: &ModelParams, ctx: &PrecisionContext) -> Result<(MomentTable, OrthoData)> {
    op_coefficients_cached(params, ctx, None)
}

pub fn op_coefficients_cached(
    params: &ModelParams,
    ctx: &PrecisionContext,
    cache: Option<&MomentCache>,
) -> Result<(MomentTable, OrthoData)> {
    let e = engine_context(ctx, &params.t);
    let p = params.at_bits(e.bits);
    let n_max = p.n + 1;
    let table = MomentTable::symmetric(&p.nu, &p.t, n_max, &e, cache)?;
    let data = OrthoData::build(&table, n_max, &e)?;
    Ok((table, data))
}

pub fn horner(coeffs: &[APComplex], z: &APComplex) -> APComplex {
    let prec = z.prec().0;
    let mut acc = Complex::with_val(prec, 0u32);
    for c in coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::agreeing_digits;
    use rug::Float;

    #[test]
    fn low_order_polynomials() {
        let ctx = PrecisionContext::new(256).unwrap();
        let p = ModelParams::from_f64(2, 0.3, 0.0, 1.0, &ctx).unwrap();
        let (table, data) = op_coefficients(&p, &ctx).unwrap();
        assert_eq!(data.pi[0].len(), 1);
        assert_eq!(*data.pi[0][0].real(), 1u32);
        // π_1(z) = z - m_1/m_0
        let expect = -Complex::with_val(256, table.get(1) / table.get(0));
        assert!(agreeing_digits(&data.pi[1][0], &expect) >= 74);
        // h_0 = m_0
        assert!(agreeing_digits(&data.h[0], table.get(0)) >= 74);
    }

    #[test]
    fn orthogonality_and_telescoping() {
        let ctx = PrecisionContext::new(256).unwrap();
        let p = ModelParams::from_f64(5, 0.3, 0.2, 2.0, &ctx).unwrap();
        let (table, data) = op_coefficients(&p, &ctx).unwrap();
        for j in 0..=data.n_max {
            for k in 0..=data.n_max {
                let v = data.pairing(&table, j, k, 256);
                if j == k {
                    assert!(agreeing_digits(&v, &data.h[j]) >= 70);
                } else {
                    let scale = Float::with_val(64, data.h[j.max(k)].abs_ref());
                    let r = Float::with_val(64, v.abs_ref()) / scale;
                    assert!(r < 1e-65, "j={j} k={k} r={r}");
                }
            }
        }
        let hs = h_sequence(&p, &ctx).unwrap();
        let mut sum = LogDet::zero(256);
        for h in &hs.h {
            sum.push_factor(h);
        }
        let ld = crate::toeplitz::log_det(&p, &ctx).unwrap();
        let diff = crate::toeplitz::wrap_branch(&Complex::with_val(256, sum.value() - ld.value()));
        assert!(Float::with_val(64, diff.abs_ref()) < 1e-65);
    }
}
