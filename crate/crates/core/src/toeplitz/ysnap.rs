use rug::Complex;

use super::ortho::{op_coefficients_cached, OrthoData};
use super::params::ModelParams;
use crate::error::{GwwError, Result};
use crate::precision::{APComplex, PrecisionContext};
use crate::special::{MomentCache, MomentTable};

/// Entries of the RH matrix `Y(z; n)` at `z = 0` plus the two expansion
/// coefficients the differential identity needs.
#[derive(Clone, Debug)]
pub struct YSnapshot {
    pub n: usize,
    /// `π_n(0)`.
    pub y11_0: APComplex,
    /// Cauchy transform of `π_n w` at 0, equal to `h_n`.
    pub y12_0: APComplex,
    /// `-1/h_{n-1}`.
    pub y21_0: APComplex,
    /// Cauchy transform of `-h_{n-1}^{-1} π̃*_{n-1} w` at 0.
    pub y22_0: APComplex,
    /// `Y21'(0)/Y21(0) = ã_{n-1,n-2}`, zero when `n = 1`.
    pub ratio_y21: APComplex,
    /// `(Y_{-1})_{11} = a_{n,n-1}`.
    pub yminus1_11: APComplex,
}

impl YSnapshot {
    /// `Y11 Y22 - Y12 Y21 - 1`, which vanishes because `det Y ≡ 1`.
    pub fn det_residual(&self) -> APComplex {
        let p = self.y11_0.prec().0;
        let mut d = Complex::with_val(p, &self.y11_0 * &self.y22_0);
        d -= Complex::with_val(p, &self.y12_0 * &self.y21_0);
        d - 1u32
    }

    /// Copy with every entry rounded to `bits`.
    pub fn rounded(&self, bits: u32) -> Self {
        let r = |z: &APComplex| Complex::with_val(bits, z);
        YSnapshot {
            n: self.n,
            y11_0: r(&self.y11_0),
            y12_0: r(&self.y12_0),
            y21_0: r(&self.y21_0),
            y22_0: r(&self.y22_0),
            ratio_y21: r(&self.ratio_y21),
            yminus1_11: r(&self.yminus1_11),
        }
    }
}

/// Snapshot at size `n` from prepared data (`1 ≤ n ≤ data.n_max`).
pub fn y_snapshot_from(data: &OrthoData, table: &MomentTable, n: usize, prec: u32) -> Result<YSnapshot> {
    if n == 0 || n > data.n_max {
        return Err(GwwError::OutOfRange(format!(
            "snapshot size {n} outside 1..={}",
            data.n_max
        )));
    }
    let ni = n as i64;
    let c = &data.pi[n];
    let mut y12 = Complex::with_val(prec, 0u32);
    for (j, cj) in c.iter().enumerate() {
        y12 += Complex::with_val(prec, cj * table.get(j as i64 - ni));
    }
    let h_prev = &data.h[n - 1];
    let inv_h_prev = Complex::with_val(prec, h_prev.recip_ref());
    let d = &data.tilde[n - 1];
    let mut s = Complex::with_val(prec, 0u32);
    for (j, dj) in d.iter().enumerate() {
        s += Complex::with_val(prec, dj * table.get(-(j as i64) - 1));
    }
    let y22 = -Complex::with_val(prec, &s * &inv_h_prev);
    Ok(YSnapshot {
        n,
        y11_0: c[0].clone(),
        y12_0: y12,
        y21_0: -inv_h_prev,
        y22_0: y22,
        ratio_y21: data.a_tilde_sub(n - 1),
        yminus1_11: data.a_sub(n),
    })
}

pub fn y_snapshot(params: &ModelParams, ctx: &PrecisionContext) -> Result<YSnapshot> {
    y_snapshot_cached(params, ctx, None)
}

pub fn y_snapshot_cached(
    params: &ModelParams,
    ctx: &PrecisionContext,
    cache: Option<&MomentCache>,
) -> Result<YSnapshot> {
    let (table, data) = op_coefficients_cached(params, ctx, cache)?;
    Ok(y_snapshot_from(&data, &table, params.n, data.prec())?.rounded(ctx.bits))
}

/// Snapshots at sizes `n` and `n + 1` sharing one factorization.
pub fn y_snapshot_pair(
    params: &ModelParams,
    ctx: &PrecisionContext,
    cache: Option<&MomentCache>,
) -> Result<(YSnapshot, YSnapshot)> {
    let (table, data) = op_coefficients_cached(params, ctx, cache)?;
    Ok((
        y_snapshot_from(&data, &table, params.n, data.prec())?.rounded(ctx.bits),
        y_snapshot_from(&data, &table, params.n + 1, data.prec())?.rounded(ctx.bits),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::agreeing_digits;
    use rug::Float;

    #[test]
    fn snapshot_identities() {
        let ctx = PrecisionContext::new(256).unwrap();
        for &(n, re, im, t) in &[(1usize, 0.3, 0.0, 1.0), (4, 0.35, 0.1, 1.7), (7, -0.4, 0.0, 3.0)] {
            let p = ModelParams::from_f64(n, re, im, t, &ctx).unwrap();
            let (table, data) = op_coefficients_cached(&p, &ctx, None).unwrap();
            let y = y_snapshot_from(&data, &table, n, 256).unwrap();
            assert!(agreeing_digits(&y.y12_0, &data.h[n]) >= 70);
            let minus_inv = -Complex::with_val(256, data.h[n - 1].recip_ref());
            assert!(agreeing_digits(&y.y21_0, &minus_inv) >= 75);
            let r = Float::with_val(64, y.det_residual().abs_ref());
            assert!(r < 1e-60, "n={n} det residual {r}");
        }
    }

    #[test]
    fn first_ratio_vanishes() {
        let ctx = PrecisionContext::new(128).unwrap();
        let p = ModelParams::from_f64(1, 0.3, 0.0, 1.0, &ctx).unwrap();
        let y = y_snapshot(&p, &ctx).unwrap();
        assert!(y.ratio_y21.is_zero());
    }
}
