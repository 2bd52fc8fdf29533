//! Dense complex matrices and LU factorizations in big-float arithmetic.

use rug::{Complex, Float};

use crate::error::{GwwError, Result};
use crate::precision::{APComplex, APReal, PrecisionContext};
use crate::special::MomentTable;

/// Square complex matrix in row-major order.
#[derive(Clone, Debug)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<APComplex>,
}

impl CMatrix {
    pub fn zeros(n: usize, prec: u32) -> Self {
        CMatrix {
            n,
            data: vec![Complex::new(prec); n * n],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &APComplex {
        &self.data[i * self.n + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut APComplex {
        &mut self.data[i * self.n + j]
    }

    /// Toeplitz matrix `T_{ij} = m_{j-i}`, `0 ≤ i, j < n`.
    pub fn toeplitz(table: &MomentTable, n: usize) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(table.get(j as i64 - i as i64).clone());
            }
        }
        CMatrix { n, data }
    }

    fn max_abs(&self) -> APReal {
        let mut best = Float::with_val(64, 0u32);
        for z in &self.data {
            let a = Float::with_val(64, z.abs_ref());
            if a > best {
                best = a;
            }
        }
        best
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n {
            self.data.swap(a * self.n + j, b * self.n + j);
        }
    }
}

/// `|pivot|` below this fraction of the largest entry counts as zero.
fn pivot_floor(a: &CMatrix, ctx: &PrecisionContext) -> APReal {
    let shift = ctx.bits.saturating_sub(ctx.guard_bits).max(1);
    a.max_abs() >> shift
}

/// Eliminates below the pivot in column `k`.
fn eliminate(a: &mut CMatrix, k: usize, prec: u32) {
    let n = a.n;
    let inv = Complex::with_val(prec, a.get(k, k).recip_ref());
    for i in k + 1..n {
        let f = Complex::with_val(prec, a.get(i, k) * &inv);
        for j in k + 1..n {
            let prod = Complex::with_val(prec, &f * a.get(k, j));
            *a.get_mut(i, j) -= prod;
        }
        *a.get_mut(i, k) = f;
    }
}

/// `PA = LU` with partial pivoting by maximal modulus.
#[derive(Clone, Debug)]
pub struct PivotedLu {
    pub lu: CMatrix,
    pub perm: Vec<usize>,
    pub swaps: usize,
}

pub fn lu_pivoted(mut a: CMatrix, ctx: &PrecisionContext) -> Result<PivotedLu> {
    let n = a.n;
    let prec = ctx.bits;
    let floor = pivot_floor(&a, ctx);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    for k in 0..n {
        let mut best = k;
        let mut best_abs = Float::with_val(64, a.get(k, k).abs_ref());
        for i in k + 1..n {
            let v = Float::with_val(64, a.get(i, k).abs_ref());
            if v > best_abs {
                best = i;
                best_abs = v;
            }
        }
        if best_abs <= floor {
            return Err(GwwError::SingularMatrix { pivot: k });
        }
        if best != k {
            a.swap_rows(best, k);
            perm.swap(best, k);
            swaps += 1;
        }
        eliminate(&mut a, k, prec);
    }
    Ok(PivotedLu { lu: a, perm, swaps })
}

/// `A = LU` without row exchanges. Pivot `k` equals `D_{k+1}/D_k`, the
/// ratio of consecutive leading principal minors.
#[derive(Clone, Debug)]
pub struct UnpivotedLu {
    pub lu: CMatrix,
}

pub fn lu_unpivoted(mut a: CMatrix, ctx: &PrecisionContext) -> Result<UnpivotedLu> {
    let floor = pivot_floor(&a, ctx);
    for k in 0..a.n {
        let p = Float::with_val(64, a.get(k, k).abs_ref());
        if p <= floor {
            return Err(GwwError::VanishingMinor { k: k + 1 });
        }
        eliminate(&mut a, k, ctx.bits);
    }
    Ok(UnpivotedLu { lu: a })
}

impl UnpivotedLu {
    pub fn size(&self) -> usize {
        self.lu.n
    }

    pub fn pivot(&self, k: usize) -> &APComplex {
        self.lu.get(k, k)
    }

    /// Solves `A_k x = rhs` for the leading `k × k` block (`A_k = L_k U_k`).
    pub fn solve_leading(&self, k: usize, rhs: &[APComplex], prec: u32) -> Vec<APComplex> {
        assert!(k <= self.size() && rhs.len() == k);
        let mut y: Vec<APComplex> = Vec::with_capacity(k);
        for i in 0..k {
            let mut s = Complex::with_val(prec, &rhs[i]);
            for (j, yj) in y.iter().enumerate() {
                s -= Complex::with_val(prec, self.lu.get(i, j) * yj);
            }
            y.push(s);
        }
        for i in (0..k).rev() {
            let mut s = y[i].clone();
            for j in i + 1..k {
                s -= Complex::with_val(prec, self.lu.get(i, j) * &y[j]);
            }
            y[i] = s / self.lu.get(i, i);
        }
        y
    }

    /// Solves `A_kᵀ x = rhs` (`A_kᵀ = U_kᵀ L_kᵀ`).
    pub fn solve_leading_transposed(&self, k: usize, rhs: &[APComplex], prec: u32) -> Vec<APComplex> {
        assert!(k <= self.size() && rhs.len() == k);
        let mut y: Vec<APComplex> = Vec::with_capacity(k);
        for i in 0..k {
            let mut s = Complex::with_val(prec, &rhs[i]);
            for (j, yj) in y.iter().enumerate() {
                s -= Complex::with_val(prec, self.lu.get(j, i) * yj);
            }
            y.push(s / self.lu.get(i, i));
        }
        for i in (0..k).rev() {
            let mut s = y[i].clone();
            for j in i + 1..k {
                s -= Complex::with_val(prec, self.lu.get(j, i) * &y[j]);
            }
            y[i] = s;
        }
        y
    }
}

/// Determinant by Laplace expansion along the first row. Exponential cost,
/// kept as an independent oracle for small matrices.
pub fn cofactor_determinant(a: &CMatrix, prec: u32) -> APComplex {
    let cols: Vec<usize> = (0..a.n).collect();
    laplace(a, 0, &cols, prec)
}

fn laplace(a: &CMatrix, row: usize, cols: &[usize], prec: u32) -> APComplex {
    if cols.len() == 1 {
        return Complex::with_val(prec, a.get(row, cols[0]));
    }
    let mut acc = Complex::with_val(prec, 0u32);
    for (idx, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(a, row + 1, &rest, prec);
        let term = Complex::with_val(prec, a.get(row, c) * &minor);
        if idx % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, prec: u32) -> CMatrix {
        let mut m = CMatrix::zeros(n, prec);
        for i in 0..n {
            for j in 0..n {
                let re = ((i * 7 + j * 3) % 11) as f64 - 5.0;
                let im = ((i * 5 + j * 2) % 7) as f64 - 3.0;
                *m.get_mut(i, j) = Complex::with_val(prec, (re, im));
            }
        }
        m
    }

    fn product_of_pivots(lu: &CMatrix, prec: u32) -> APComplex {
        let mut d = Complex::with_val(prec, 1u32);
        for k in 0..lu.n {
            d *= lu.get(k, k);
        }
        d
    }

    #[test]
    fn pivoted_matches_cofactor() {
        let ctx = PrecisionContext::new(128).unwrap();
        let a = sample(5, 128);
        let expect = cofactor_determinant(&a, 128);
        let f = lu_pivoted(a, &ctx).unwrap();
        let mut d = product_of_pivots(&f.lu, 128);
        if f.swaps % 2 == 1 {
            d = -d;
        }
        let err = Float::with_val(128, Complex::with_val(128, &d - &expect).abs_ref());
        assert!(err < 1e-25);
    }

    #[test]
    fn leading_solves() {
        let ctx = PrecisionContext::new(128).unwrap();
        let a = sample(5, 128);
        let f = lu_unpivoted(a.clone(), &ctx).unwrap();
        for k in 1..=5 {
            let rhs: Vec<_> = (0..k).map(|i| Complex::with_val(128, (i as f64, 1.0))).collect();
            let x = f.solve_leading(k, &rhs, 128);
            let xt = f.solve_leading_transposed(k, &rhs, 128);
            for i in 0..k {
                let mut s = Complex::with_val(128, 0u32);
                let mut st = Complex::with_val(128, 0u32);
                for j in 0..k {
                    s += Complex::with_val(128, a.get(i, j) * &x[j]);
                    st += Complex::with_val(128, a.get(j, i) * &xt[j]);
                }
                let e = Float::with_val(64, Complex::with_val(128, &s - &rhs[i]).abs_ref());
                let et = Float::with_val(64, Complex::with_val(128, &st - &rhs[i]).abs_ref());
                assert!(e < 1e-30 && et < 1e-30);
            }
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let ctx = PrecisionContext::new(128).unwrap();
        let mut a = sample(3, 128);
        for j in 0..3 {
            let v = a.get(0, j).clone();
            *a.get_mut(2, j) = v;
        }
        assert!(matches!(
            lu_pivoted(a.clone(), &ctx),
            Err(GwwError::SingularMatrix { .. })
        ));
        assert!(matches!(lu_unpivoted(a, &ctx), Err(GwwError::VanishingMinor { .. })));
    }
}
