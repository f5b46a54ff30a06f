//! Hyperbolic 3-space on the hyperboloid, with its geodesics and totally
//! geodesic planes.

use crate::error::{Error, Result};
use crate::geometry::hyperboloid::{self, HGeodesic, Vector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3Point {
    pub x: Vector<4>,
}

impl H3Point {
    pub fn origin() -> Self {
        Self {
            x: hyperboloid::origin(),
        }
    }

    /// Point at distance `r` from the origin in the Euclidean unit direction `dir`.
    pub fn from_polar(r: f64, dir: [f64; 3]) -> Self {
        Self {
            x: hyperboloid::from_polar(r, &dir),
        }
    }

    /// From Poincaré ball coordinates `|b| < 1`.
    pub fn from_ball(b: [f64; 3]) -> Result<Self> {
        let n2: f64 = b.iter().map(|v| v * v).sum();
        if !(n2 < 1.0) {
            return Err(Error::Domain(format!("ball coordinate with |b|² = {n2}")));
        }
        let d = 1.0 - n2;
        Ok(Self {
            x: [(1.0 + n2) / d, 2.0 * b[0] / d, 2.0 * b[1] / d, 2.0 * b[2] / d],
        })
    }

    pub fn distance(&self, other: &Self) -> f64 {
        hyperboloid::distance(&self.x, &other.x)
    }
}

pub type H3Geodesic = HGeodesic<4>;

/// Totally geodesic plane `{y : ⟨y, normal⟩ = 0}` with a marked point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3Plane {
    pub foot: Vector<4>,
    pub normal: Vector<4>,
}

impl H3Plane {
    /// Plane at distance `p` from `x` whose closest point lies in the unit
    /// direction `omega` (tangent at `x`).
    pub fn at_distance(x: &Vector<4>, omega: &Vector<4>, p: f64) -> Self {
        Self {
            foot: hyperboloid::exp_map(x, omega, p),
            normal: hyperboloid::add(x, p.sinh(), omega, p.cosh()),
        }
    }

    /// Signed `sinh` of the distance from `y` to the plane.
    pub fn sinh_distance(&self, y: &Vector<4>) -> f64 {
        hyperboloid::mink(y, &self.normal)
    }

    /// Closest point of the plane to `y` and the distance.
    pub fn project(&self, y: &Vector<4>) -> (Vector<4>, f64) {
        let sh = self.sinh_distance(y);
        let ch = (1.0 + sh * sh).sqrt();
        let proj = hyperboloid::add(y, 1.0 / ch, &self.normal, -sh / ch);
        (proj, sh.asinh().abs())
    }

    /// Orthonormal tangent frame of the plane at the in-plane point `q`.
    pub fn frame_at(&self, q: &Vector<4>) -> (Vector<4>, Vector<4>) {
        let mut basis: Vec<Vector<4>> = Vec::with_capacity(2);
        for i in 1..4 {
            let mut v = hyperboloid::boost_basis(q, i);
            let c = hyperboloid::mink(&v, &self.normal);
            v = hyperboloid::add(&v, 1.0, &self.normal, -c);
            for b in &basis {
                let c = hyperboloid::mink(&v, b);
                v = hyperboloid::add(&v, 1.0, b, -c);
            }
            let l = hyperboloid::mink(&v, &v);
            if l > 1e-6 {
                basis.push(hyperboloid::add(&v, 1.0 / l.sqrt(), &[0.0; 4], 0.0));
            }
            if basis.len() == 2 {
                break;
            }
        }
        (basis[0], basis[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hyperboloid::{boost_basis, mink};

    #[test]
    fn plane_distance_and_geodesics() {
        let x = H3Point::from_polar(0.6, [0.0, 0.6, 0.8]).x;
        let omega = boost_basis(&x, 1);
        let plane = H3Plane::at_distance(&x, &omega, 1.3);
        assert!((mink(&plane.normal, &plane.normal) - 1.0).abs() < 1e-12);
        let (_, d) = plane.project(&x);
        assert!((d - 1.3).abs() < 1e-12);
        let (e1, e2) = plane.frame_at(&plane.foot);
        // every geodesic tangent to the plane stays in it
        for a in [0.0, 0.9, 2.5] {
            let v = hyperboloid::add(&e1, f64::cos(a), &e2, f64::sin(a));
            let g = HGeodesic { base: plane.foot, tangent: v };
            for s in [-1.5, 0.7, 3.0] {
                assert!(plane.sinh_distance(&g.point(s)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn ball_coordinates() {
        let p = H3Point::from_ball([0.5, 0.0, 0.0]).unwrap();
        assert!((p.distance(&H3Point::origin()) - 3f64.ln()).abs() < 1e-14);
        assert!(H3Point::from_ball([0.8, 0.8, 0.0]).is_err());
    }
}
