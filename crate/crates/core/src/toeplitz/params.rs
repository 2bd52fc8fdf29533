use rug::{Complex, Float};

use crate::error::{GwwError, Result};
use crate::precision::{APComplex, APReal, PrecisionContext};

/// The model triple `(n, ν, t)`; `τ = t/n` is derived.
#[derive(Clone, Debug)]
pub struct ModelParams {
    pub n: usize,
    pub nu: APComplex,
    pub t: APReal,
}

impl ModelParams {
    /// Checks `n ≥ 1`, finite `ν` and finite `t ≥ 0`. The value `t = 0` is
    /// admitted because the weight degenerates to `s^ν`, whose Toeplitz
    /// matrix is the identity for integer `ν`.
    pub fn new(n: usize, nu: APComplex, t: APReal) -> Result<Self> {
        if n == 0 {
            return Err(GwwError::OutOfRange("matrix size n must be at least 1".into()));
        }
        if !nu.real().is_finite() || !nu.imag().is_finite() {
            return Err(GwwError::OutOfRange("ν must be finite".into()));
        }
        if !t.is_finite() || t.is_sign_negative() && !t.is_zero() {
            return Err(GwwError::OutOfRange(format!(
                "t must be finite and non-negative, got {t}"
            )));
        }
        Ok(ModelParams { n, nu, t })
    }

    /// Parameters with `t = nτ` computed at `ctx.bits`.
    pub fn from_tau(n: usize, nu: APComplex, tau: &APReal, ctx: &PrecisionContext) -> Result<Self> {
        let t = Float::with_val(ctx.bits, tau * n as u32);
        Self::new(n, nu, t)
    }

    /// Convenience constructor from `f64` inputs (used by tests and benches).
    pub fn from_f64(n: usize, nu_re: f64, nu_im: f64, t: f64, ctx: &PrecisionContext) -> Result<Self> {
        Self::new(
            n,
            Complex::with_val(ctx.bits, (nu_re, nu_im)),
            Float::with_val(ctx.bits, t),
        )
    }

    pub fn tau(&self) -> APReal {
        Float::with_val(self.t.prec(), &self.t / self.n as u32)
    }

    pub fn tau_f64(&self) -> f64 {
        self.tau().to_f64()
    }

    /// Same `ν` and `t` with a different matrix size.
    pub fn with_n(&self, n: usize) -> Self {
        ModelParams { n, ..self.clone() }
    }

    pub fn with_nu(&self, nu: APComplex) -> Self {
        ModelParams { nu, ..self.clone() }
    }

    pub fn with_t(&self, t: APReal) -> Self {
        ModelParams { t, ..self.clone() }
    }

    pub fn nu_is_real(&self) -> bool {
        self.nu.imag().is_zero()
    }

    /// Parameters rounded to `bits`, used when re-running at a new precision.
    pub fn at_bits(&self, bits: u32) -> Self {
        ModelParams {
            n: self.n,
            nu: Complex::with_val(bits, &self.nu),
            t: Float::with_val(bits, &self.t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let ctx = PrecisionContext::new(128).unwrap();
        assert!(ModelParams::from_f64(0, 0.0, 0.0, 1.0, &ctx).is_err());
        assert!(ModelParams::from_f64(3, 0.0, 0.0, -1.0, &ctx).is_err());
        assert!(ModelParams::from_f64(3, f64::NAN, 0.0, 1.0, &ctx).is_err());
        let p = ModelParams::from_f64(4, 0.3, 0.0, 2.0, &ctx).unwrap();
        assert_eq!(p.tau_f64(), 0.5);
        let q = ModelParams::from_tau(8, ctx.complex(0.3f64), &ctx.real(0.5f64), &ctx).unwrap();
        assert_eq!(q.t, 4u32);
    }
}
