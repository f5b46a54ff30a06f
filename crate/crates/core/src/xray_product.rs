//! X-ray transform on H²×H² and its inversion by averaging over geodesics
//! tangent to spheres in the flats through the origin.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::config::{QuadratureSpec, PRODUCT_P_CUTOFF};
use crate::error::Result;
use crate::euclid_radon::Reconstruction;
use crate::geometry::disk::{HypGeodesic, HypPoint};
use crate::geometry::field::ScalarField;
use crate::geometry::product::{FlatGeodesic, ProductIsometry, ProductPoint};
use crate::numerics::diff::d_dp;
use crate::numerics::quad::{integrate_line, weighted_tail_integral, LineSupport, TailWeight};
use crate::oracle::SinogramOracle;

pub type ProductSinogram = SinogramOracle<FlatGeodesic, ProductPoint>;

/// Parameters `s` with `d(γ_k(a + b·s), c) ≤ r`, where `γ_k` is the
/// unit-speed geodesic through the origin in direction `angle`.
fn factor_interval(angle: f64, a: f64, b: f64, c: &HypPoint, r: f64) -> Option<(f64, f64)> {
    let g = HypGeodesic::through(&HypPoint::origin(), angle);
    let (lo, hi) = g.inner.ball_interval(&c.to_hyperboloid(), r)?;
    if b.abs() < 1e-14 {
        return (lo <= a && a <= hi).then_some((f64::NEG_INFINITY, f64::INFINITY));
    }
    let (s1, s2) = ((lo - a) / b, (hi - a) / b);
    Some((s1.min(s2), s1.max(s2)))
}

/// `∫ f(γ(s)) ds` along a geodesic in a flat through the origin.
pub fn product_xray_forward(f: &ScalarField<ProductPoint>, gamma: &FlatGeodesic, spec: &QuadratureSpec) -> Result<f64> {
    let decay = f.decay()?;
    let r = decay.effective_radius();
    let (sp, cp) = gamma.phi.sin_cos();
    let support = match (
        factor_interval(gamma.alpha, gamma.p * cp, -sp, &decay.center.z1, r),
        factor_interval(gamma.beta, gamma.p * sp, cp, &decay.center.z2, r),
    ) {
        (Some((a1, b1)), Some((a2, b2))) if a1.max(a2) < b1.min(b2) => LineSupport::Interval {
            lo: a1.max(a2),
            hi: b1.min(b2),
        },
        _ => LineSupport::Empty,
    };
    integrate_line(|s| f.eval(&gamma.point(s)), Some(support), spec)
}

pub fn sinogram(f: &ScalarField<ProductPoint>, spec: &QuadratureSpec) -> ProductSinogram {
    let field = f.clone();
    let spec = *spec;
    SinogramOracle::new(
        move |g: &FlatGeodesic| product_xray_forward(&field, g, &spec),
        f.decay().ok().copied(),
    )
}

/// Geodesics at distance `p` from the origin lying in flats through the
/// origin, on an `m × m × m` grid of the two factor rotations and the
/// rotation within the flat.
pub fn gamma_p(p: f64, m: usize) -> Vec<FlatGeodesic> {
    let step = 2.0 * PI / m as f64;
    let mut out = Vec::with_capacity(m * m * m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                out.push(FlatGeodesic {
                    alpha: i as f64 * step,
                    beta: j as f64 * step,
                    phi: k as f64 * step,
                    p,
                });
            }
        }
    }
    out
}

/// `∫_{Γ_p} φ dω_p` by the triple trapezoid rule.
pub fn omega_average(phi: &ProductSinogram, p: f64, m: usize) -> Result<f64> {
    let family = gamma_p(p, m);
    let terms: Vec<Result<f64>> = family.par_chunks(m).map(|c| c.iter().map(|g| phi.eval(g)).sum()).collect();
    let mut acc = 0.0;
    for t in terms {
        acc += t?;
    }
    Ok(acc / family.len() as f64)
}

/// `-(1/π) ∫₀^∞ (d/dp ∫_{Γ_p} f̂ dω_p) dp/p`, which recovers `f(o)`.
pub fn invert_product_xray(phi: &ProductSinogram, spec: &QuadratureSpec, m: usize) -> Result<Reconstruction> {
    let cap = spec.p_cutoff_high.min(PRODUCT_P_CUTOFF);
    let upper = match phi.decay_opt() {
        Some(d) => (d.center.distance(&ProductPoint::origin()) + d.effective_radius() + 2.0 * spec.fd_step).min(cap),
        None => cap,
    };
    let mut err = None;
    let tail = weighted_tail_integral(
        |p| {
            d_dp(
                |q| {
                    omega_average(phi, q, m).unwrap_or_else(|e| {
                        err = Some(e);
                        0.0
                    })
                },
                p,
                spec.fd_step,
            )
            .value
        },
        TailWeight::InverseP,
        spec,
        Some(upper),
        1e-2,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(Reconstruction {
        value: -tail.value / PI,
        eps_sensitivity: tail.eps_sensitivity / PI,
        divergent: tail.divergent,
        upper,
    })
}

/// `y ↦ f(g·y)` for the product translation `g` taking the origin to `x`;
/// inverting its transform at the origin reconstructs `f(x)`.
pub fn recentered(f: &ScalarField<ProductPoint>, x: &ProductPoint) -> ScalarField<ProductPoint> {
    let g = ProductIsometry::translation_to(x);
    f.transported(move |y| g.apply_inverse(y), move |y| g.apply(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::phantom::{separable_field, PhantomSpec, RadialProfile};
    use crate::numerics::gauss::composite;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn separable_factorization() {
        let g1 = RadialProfile::Gaussian { amplitude: 1.0, width: 1.0 };
        let g2 = RadialProfile::Gaussian { amplitude: 1.0, width: 0.7 };
        let f = separable_field(ProductPoint::origin(), g1, g2);
        let p = 0.8;
        let gamma = FlatGeodesic { alpha: 0.3, beta: 1.9, phi: PI / 2.0, p };
        let got = product_xray_forward(&f, &gamma, &spec()).unwrap();
        let want = g2.eval(p) * composite(32, 16, -8.0, 8.0, |s: f64| g1.eval(s.abs()));
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn reversal_and_disjoint_support() {
        let f = PhantomSpec::bump(1.0, 1.0).at(&[0.2, 0.1, -0.1, 0.3]).product().unwrap();
        let g = FlatGeodesic { alpha: 0.5, beta: 2.0, phi: 0.7, p: 0.4 };
        let v = product_xray_forward(&f, &g, &spec()).unwrap();
        let rev = composite(32, 96, -6.0, 6.0, |s| f.eval(&g.point(-s)));
        assert!(v > 0.0);
        assert!((v - rev).abs() < 1e-6 * v);
        let far = FlatGeodesic { p: 4.0, ..g };
        assert_eq!(product_xray_forward(&f, &far, &spec()).unwrap(), 0.0);
    }

    #[test]
    fn constant_average() {
        let phi: ProductSinogram = SinogramOracle::new(|_| Ok(-0.4), None);
        assert!((omega_average(&phi, 1.0, 6).unwrap() + 0.4).abs() < 1e-14);
    }

    #[test]
    fn radial_average_is_grid_independent() {
        let f = PhantomSpec::gaussian(1.0, 1.0).product().unwrap();
        let phi = sinogram(&f, &spec());
        let a = omega_average(&phi, 0.9, 8).unwrap();
        let b = omega_average(&phi, 0.9, 10).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}
