//! Model spaces, their integration submanifolds, and test functions.

pub mod disk;
pub mod euclid;
pub mod field;
pub mod hyperboloid;
pub mod phantom;
pub mod product;
pub mod space3;

pub use disk::{busemann, hyp_distance, poisson_kernel, DiskIsometry, Horocycle, HypGeodesic, HypPoint};
pub use euclid::{plane_at_distance, DPlane, EuclidPoint};
pub use field::{Decay, DecayKind, MetricPoint, ScalarField};
pub use phantom::{radial_field, PhantomKind, PhantomSpec, RadialProfile};
pub use product::{FlatGeodesic, ProductIsometry, ProductPoint};
pub use space3::{H3Geodesic, H3Plane, H3Point};

use num_complex::Complex64;

/// Hyperbolic Laplacian of `g` at `z` by the five-point stencil in disk
/// coordinates, `Δ = ((1 - |z|²)²/4)(∂x² + ∂y²)`.
pub fn disk_laplacian<F: Fn(&HypPoint) -> Complex64>(g: F, z: &HypPoint, h: f64) -> Complex64 {
    let at = |dx: f64, dy: f64| {
        g(&HypPoint::new(z.z() + Complex64::new(dx, dy)).expect("stencil inside the disk"))
    };
    let flat = (at(h, 0.0) + at(-h, 0.0) + at(0.0, h) + at(0.0, -h) - at(0.0, 0.0) * 4.0) / (h * h);
    let conf = (1.0 - z.z().norm_sqr()).powi(2) / 4.0;
    flat * conf
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn plane_wave_eigen_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let z = HypPoint::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(0.0..6.3));
            let lambda: f64 = rng.gen_range(0.2..3.0);
            let theta: f64 = rng.gen_range(0.0..6.3);
            let s = Complex64::new(0.5, lambda);
            let wave = |p: &HypPoint| (s * busemann(p, theta)).exp();
            let lap = disk_laplacian(wave, &z, 1e-3);
            let want = wave(&z) * -(lambda * lambda + 0.25);
            assert!((lap - want).norm() <= 1e-4 * want.norm(), "{lap} vs {want}");
        }
    }

    #[test]
    fn triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p: Vec<HypPoint> = (0..3)
                .map(|_| HypPoint::from_polar(rng.gen_range(0.0..4.0), rng.gen_range(0.0..6.3)))
                .collect();
            let slack = hyp_distance(&p[0], &p[1]) + hyp_distance(&p[1], &p[2]) - hyp_distance(&p[0], &p[2]);
            assert!(slack >= -1e-12);
        }
    }
}
