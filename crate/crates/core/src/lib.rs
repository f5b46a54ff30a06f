//! Numerical integral geometry on Euclidean space, the hyperbolic plane and
//! space, and the product H²×H²: plane, geodesic, and horocycle transforms
//! with their inversion formulas, the Abel and spherical transforms, and the
//! Fourier transform on the hyperbolic plane.

pub mod abel;
pub mod config;
pub mod error;
pub mod euclid_radon;
pub mod geometry;
pub mod hfourier;
pub mod horocycle;
pub mod hyp_radon;
pub mod numerics;
pub mod oracle;
pub mod report;
pub mod suite;
pub mod xray_product;

pub use config::{Constants, QuadratureSpec};
pub use error::{Error, Result};
