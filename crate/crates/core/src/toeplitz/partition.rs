use rug::Complex;

use crate::error::{GwwError, Result};
use crate::precision::{APComplex, APReal, PrecisionContext};
use crate::special::HankelContour;

/// The `n`-fold loop integral `(1/n!) ∫…∫ Δ(s)Δ(s⁻¹) ∏ w(s_j) ds_j/(2πi s_j)`
/// by tensor-product quadrature, for `n ∈ {1, 2}`.
///
/// At `n = 2` the Vandermonde product is used in the expanded form
/// `(s₁-s₂)(s₁⁻¹-s₂⁻¹) = 2 - s₁/s₂ - s₂/s₁`, which is exactly zero on the
/// diagonal instead of a difference of nearly equal numbers.
pub fn partition_direct(
    n: usize,
    nu: &APComplex,
    t: &APReal,
    contour: &HankelContour,
    ctx: &PrecisionContext,
) -> Result<APComplex> {
    if !(1..=2).contains(&n) {
        return Err(GwwError::OutOfRange(format!(
            "direct quadrature supports n = 1 or 2, got {n}"
        )));
    }
    contour.validate(nu, t, n, ctx)?;
    let wp = ctx.working_bits();
    let nodes = contour.nodes(nu, t, ctx);
    if n == 1 {
        let mut acc = Complex::with_val(wp, 0u32);
        for node in &nodes {
            acc += &node.weight;
        }
        return Ok(Complex::with_val(ctx.bits, acc));
    }
    let inv: Vec<APComplex> = nodes.iter().map(|q| Complex::with_val(wp, q.s.recip_ref())).collect();
    // Symmetric integrand with a vanishing diagonal: sum over i < j, the
    // factor 2 from symmetry cancelling the 1/2!.
    let mut acc = Complex::with_val(wp, 0u32);
    for i in 0..nodes.len() {
        let mut row = Complex::with_val(wp, 0u32);
        for j in i + 1..nodes.len() {
            let r = Complex::with_val(wp, &nodes[i].s * &inv[j]);
            let r_inv = Complex::with_val(wp, &nodes[j].s * &inv[i]);
            let mut v = Complex::with_val(wp, 2u32);
            v -= r;
            v -= r_inv;
            row += v * &nodes[j].weight;
        }
        acc += row * &nodes[i].weight;
    }
    Ok(Complex::with_val(ctx.bits, acc))
}
