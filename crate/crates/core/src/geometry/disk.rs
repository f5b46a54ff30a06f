//! Poincaré disk model of the hyperbolic plane, curvature -1.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::hyperboloid::{self, HGeodesic};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypPoint {
    z: Complex64,
}

fn one_minus_abs2(z: Complex64) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

impl HypPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(format!("|z| = {} is not < 1", z.norm())));
        }
        Ok(Self { z })
    }

    pub fn origin() -> Self {
        Self {
            z: Complex64::new(0.0, 0.0),
        }
    }

    /// Point at hyperbolic distance `r` from the origin in direction `angle`;
    /// negative `r` points the opposite way.
    pub fn from_polar(r: f64, angle: f64) -> Self {
        Self {
            z: Complex64::from_polar((0.5 * r).tanh(), angle),
        }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn to_half_plane(&self) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        Complex64::i() * (one + self.z) / (one - self.z)
    }

    pub fn from_half_plane(w: Complex64) -> Result<Self> {
        if !(w.im > 0.0) {
            return Err(Error::Domain(format!("Im w = {} is not > 0", w.im)));
        }
        let i = Complex64::i();
        Self::new((w - i) / (w + i))
    }

    /// Coordinates `(x0, x1, x2)` on the hyperboloid.
    pub fn to_hyperboloid(&self) -> [f64; 3] {
        let d = one_minus_abs2(self.z);
        let n2 = self.z.norm_sqr();
        [(1.0 + n2) / d, 2.0 * self.z.re / d, 2.0 * self.z.im / d]
    }

    pub fn from_hyperboloid(x: &[f64; 3]) -> Self {
        let s = 1.0 + x[0];
        Self {
            z: Complex64::new(x[1] / s, x[2] / s),
        }
    }

    pub fn distance_from_origin(&self) -> f64 {
        2.0 * self.z.norm().atanh()
    }
}

/// `A(z, e^{iθ}) = log((1 - |z|²)/|z - e^{iθ}|²)`, the signed distance from
/// the origin to the horocycle through `z` tangent at `e^{iθ}`.
pub fn busemann(z: &HypPoint, theta: f64) -> f64 {
    let b = Complex64::from_polar(1.0, theta);
    (one_minus_abs2(z.z) / (z.z - b).norm_sqr()).ln()
}

/// Poisson kernel `P(z, e^{iθ}) = e^{A(z, e^{iθ})}`.
pub fn poisson_kernel(z: &HypPoint, theta: f64) -> f64 {
    let b = Complex64::from_polar(1.0, theta);
    one_minus_abs2(z.z) / (z.z - b).norm_sqr()
}

pub fn hyp_distance(z: &HypPoint, w: &HypPoint) -> f64 {
    let num = (z.z - w.z).norm();
    let den = (one_minus_abs2(z.z) * one_minus_abs2(w.z)).sqrt();
    2.0 * (num / den).asinh()
}

/// Distance in the upper half-plane.
pub fn half_plane_distance(a: Complex64, b: Complex64) -> f64 {
    2.0 * ((a - b).norm() / (2.0 * (a.im * b.im).sqrt())).asinh()
}

/// Orientation-preserving isometry `z ↦ e^{iφ}(z + a)/(1 + ā z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskIsometry {
    pub a: Complex64,
    pub rotation: f64,
}

impl DiskIsometry {
    /// Hyperbolic translation taking the origin to `p`.
    pub fn translation_to(p: &HypPoint) -> Self {
        Self {
            a: p.z,
            rotation: 0.0,
        }
    }

    pub fn rotation(angle: f64) -> Self {
        Self {
            a: Complex64::new(0.0, 0.0),
            rotation: angle,
        }
    }

    pub fn apply(&self, p: &HypPoint) -> HypPoint {
        let one = Complex64::new(1.0, 0.0);
        let w = (p.z + self.a) / (one + self.a.conj() * p.z);
        HypPoint {
            z: Complex64::from_polar(1.0, self.rotation) * w,
        }
    }

    pub fn apply_inverse(&self, p: &HypPoint) -> HypPoint {
        let one = Complex64::new(1.0, 0.0);
        let u = Complex64::from_polar(1.0, -self.rotation) * p.z;
        HypPoint {
            z: (u - self.a) / (one - self.a.conj() * u),
        }
    }
}

/// Horocycle tangent to the boundary at `e^{iθ}` at signed distance `t`
/// from the origin; `t > 0` means the origin lies outside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horocycle {
    pub t: f64,
    pub theta: f64,
}

impl Horocycle {
    pub fn new(t: f64, theta: f64) -> Self {
        Self {
            t,
            theta: theta.rem_euclid(2.0 * PI),
        }
    }

    /// The horocycle through `z` tangent at `e^{iθ}`.
    pub fn through(z: &HypPoint, theta: f64) -> Self {
        Self::new(busemann(z, theta), theta)
    }

    /// Unit-speed arc-length parametrization: in the half-plane picture with
    /// tangency at infinity the horocycle is `{e^t(s + i)}`.
    pub fn point(&self, s: f64) -> HypPoint {
        let w = Complex64::new(s, 1.0) * self.t.exp();
        let i = Complex64::i();
        let z = (w - i) / (w + i) * Complex64::from_polar(1.0, self.theta);
        HypPoint { z }
    }

    /// Arclength parameters where the horocycle meets the closed ball
    /// `B(c, r)`, or `None`.
    pub fn ball_interval(&self, c: &HypPoint, r: f64) -> Option<(f64, f64)> {
        let rotated = HypPoint {
            z: c.z * Complex64::from_polar(1.0, -self.theta),
        };
        let wc = rotated.to_half_plane();
        let et = self.t.exp();
        // (x - xc)² + (e^t - yc)² ≤ 2(cosh r - 1) e^t yc
        let rhs = 2.0 * (r.cosh() - 1.0) * et * wc.im - (et - wc.im).powi(2);
        if rhs < 0.0 {
            return None;
        }
        let half = rhs.sqrt();
        Some(((wc.re - half) / et, (wc.re + half) / et))
    }
}

/// Complete geodesic of the hyperbolic plane, stored on the hyperboloid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypGeodesic {
    pub inner: HGeodesic<3>,
}

impl HypGeodesic {
    /// Geodesic through `z` leaving in direction `angle`, measured in the
    /// frame transported from the origin by the translation to `z`.
    pub fn through(z: &HypPoint, angle: f64) -> Self {
        let x = z.to_hyperboloid();
        let e1 = hyperboloid::boost_basis(&x, 1);
        let e2 = hyperboloid::boost_basis(&x, 2);
        Self {
            inner: HGeodesic {
                base: x,
                tangent: hyperboloid::add(&e1, angle.cos(), &e2, angle.sin()),
            },
        }
    }

    /// Geodesic at distance `p` from `z` whose closest point lies in
    /// direction `alpha` from `z`.
    pub fn at_distance(z: &HypPoint, p: f64, alpha: f64) -> Self {
        let x = z.to_hyperboloid();
        let e1 = hyperboloid::boost_basis(&x, 1);
        let e2 = hyperboloid::boost_basis(&x, 2);
        let u = hyperboloid::add(&e1, alpha.cos(), &e2, alpha.sin());
        let w = hyperboloid::add(&e1, -alpha.sin(), &e2, alpha.cos());
        Self {
            inner: HGeodesic {
                base: hyperboloid::exp_map(&x, &u, p),
                tangent: w,
            },
        }
    }

    pub fn point(&self, s: f64) -> HypPoint {
        HypPoint::from_hyperboloid(&self.inner.point(s))
    }

    /// Distance to `z`.
    pub fn distance_to(&self, z: &HypPoint) -> f64 {
        let (_, cosh_d) = self.inner.closest_approach(&z.to_hyperboloid());
        cosh_d.acosh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn busemann_on_rays() {
        for &(t, th) in &[(0.7, 0.3), (2.5, 4.0), (-1.2, 1.0)] {
            let z = HypPoint::from_polar(t, th);
            assert!((busemann(&z, th) - t).abs() < 1e-12);
            let zo = HypPoint::from_polar(t, th + PI);
            assert!((busemann(&zo, th) + t).abs() < 1e-12);
        }
        assert!(busemann(&HypPoint::origin(), 1.234).abs() < 1e-15);
    }

    #[test]
    fn distance_examples() {
        let half = HypPoint::new(Complex64::new(0.5, 0.0)).unwrap();
        assert!((hyp_distance(&HypPoint::origin(), &half) - 3f64.ln()).abs() < 1e-14);
        assert_eq!(hyp_distance(&half, &half), 0.0);
    }

    #[test]
    fn cayley_round_trip_and_isometry() {
        let a = HypPoint::new(Complex64::new(0.3, -0.55)).unwrap();
        let b = HypPoint::new(Complex64::new(-0.2, 0.7)).unwrap();
        let back = HypPoint::from_half_plane(a.to_half_plane()).unwrap();
        assert!((back.z() - a.z()).norm() < 1e-12);
        let dh = half_plane_distance(a.to_half_plane(), b.to_half_plane());
        assert!((dh - hyp_distance(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(HypPoint::new(Complex64::new(1.0, 0.0)).is_err());
        assert!(HypPoint::from_half_plane(Complex64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn horocycle_basics() {
        let h = Horocycle::new(0.0, 0.0);
        assert!(h.point(0.0).z().norm() < 1e-15);
        let h = Horocycle::new(1.4, 2.0);
        let z0 = h.point(0.0);
        assert!((z0.z() - HypPoint::from_polar(1.4, 2.0).z()).norm() < 1e-14);
        for s in [-3.0, -0.5, 0.2, 2.0] {
            assert!((busemann(&h.point(s), 2.0) - 1.4).abs() < 1e-10);
            let step = 1e-5;
            let d = hyp_distance(&h.point(s - step), &h.point(s + step)) / (2.0 * step);
            assert!((d - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn horocycle_ball_interval_is_exact() {
        let h = Horocycle::new(0.4, 1.0);
        let c = HypPoint::from_polar(0.8, 2.2);
        let (lo, hi) = h.ball_interval(&c, 1.0).unwrap();
        assert!((hyp_distance(&h.point(lo), &c) - 1.0).abs() < 1e-10);
        assert!((hyp_distance(&h.point(hi), &c) - 1.0).abs() < 1e-10);
        assert!(hyp_distance(&h.point(0.5 * (lo + hi)), &c) < 1.0);
        assert!(Horocycle::new(2.0, 0.0).ball_interval(&HypPoint::origin(), 1.0).is_none());
    }

    #[test]
    fn isometry_round_trip() {
        let g = DiskIsometry {
            a: Complex64::new(0.3, 0.4),
            rotation: 0.9,
        };
        let p = HypPoint::new(Complex64::new(-0.5, 0.1)).unwrap();
        let q = HypPoint::new(Complex64::new(0.2, 0.6)).unwrap();
        assert!((g.apply_inverse(&g.apply(&p)).z() - p.z()).norm() < 1e-14);
        assert!((hyp_distance(&g.apply(&p), &g.apply(&q)) - hyp_distance(&p, &q)).abs() < 1e-12);
    }

    #[test]
    fn geodesic_at_distance() {
        let z = HypPoint::new(Complex64::new(0.2, -0.3)).unwrap();
        let g = HypGeodesic::at_distance(&z, 0.9, 1.1);
        assert!((g.distance_to(&z) - 0.9).abs() < 1e-12);
        let step = 1e-5;
        for s in [-1.0, 0.0, 2.0] {
            let v = hyp_distance(&g.point(s - step), &g.point(s + step)) / (2.0 * step);
            assert!((v - 1.0).abs() < 1e-8);
        }
    }
}
