//! Quadrature, finite differences, FFT multipliers, and the c-function oracle.

pub mod cfunc;
pub mod diff;
pub mod gauss;
pub mod quad;
pub mod spectral;

pub use cfunc::{c_density, CFunctionOracle};
pub use diff::{d_dp, iterated_r2_derivative, iterated_r2_derivative_above, Derivative, R2Derivative};
pub use gauss::{composite, composite_nodes, gauss_legendre, GaussRule};
pub use quad::{integrate_circle, integrate_line, weighted_tail_integral, LineSupport, TailIntegral, TailWeight};
pub use spectral::{apply_multiplier, convolve, EvenGridFunction, Multiplier, TGrid};
