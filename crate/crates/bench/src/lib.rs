//! Shared fixtures for the criterion benchmarks.

use gww_core::{APComplex, APReal, PrecisionContext};

/// Parameters used by every benchmark: `ν = 0.3`, `t = 16` at 256 bits.
pub fn fixture() -> (PrecisionContext, APComplex, APReal) {
    let ctx = PrecisionContext::new(256).expect("valid precision");
    let nu = ctx.complex(0.3f64);
    let t = ctx.real(16u32);
    (ctx, nu, t)
}
