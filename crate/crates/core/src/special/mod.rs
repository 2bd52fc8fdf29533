//! Gamma, Barnes G, constants, Bessel I of complex order and the Hankel-loop
//! moment oracle.

pub mod barnes;
pub mod bessel;
pub mod constants;
pub mod gamma;
pub mod hankel;
pub mod moments;
pub mod quadrature;

pub use barnes::log_barnes_g;
pub use bessel::{bessel_i, BesselSeriesReport};
pub use constants::{named_constant, CONSTANT_NAMES};
pub use gamma::{digamma, gamma, log_gamma, recip_gamma};
pub use hankel::{moment_quadrature, ContourNode, HankelContour};
pub use moments::{moment, MomentCache, MomentKey, MomentTable};
