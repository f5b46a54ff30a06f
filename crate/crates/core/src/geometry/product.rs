//! The rank-two product H² × H² and its geodesics lying in flats through the
//! origin.

use crate::geometry::disk::{hyp_distance, DiskIsometry, HypPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductPoint {
    pub z1: HypPoint,
    pub z2: HypPoint,
}

impl ProductPoint {
    pub fn origin() -> Self {
        Self {
            z1: HypPoint::origin(),
            z2: HypPoint::origin(),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        hyp_distance(&self.z1, &other.z1).hypot(hyp_distance(&self.z2, &other.z2))
    }
}

/// Pair of disk isometries acting factorwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductIsometry {
    pub g1: DiskIsometry,
    pub g2: DiskIsometry,
}

impl ProductIsometry {
    pub fn translation_to(x: &ProductPoint) -> Self {
        Self {
            g1: DiskIsometry::translation_to(&x.z1),
            g2: DiskIsometry::translation_to(&x.z2),
        }
    }

    pub fn apply(&self, x: &ProductPoint) -> ProductPoint {
        ProductPoint {
            z1: self.g1.apply(&x.z1),
            z2: self.g2.apply(&x.z2),
        }
    }

    pub fn apply_inverse(&self, x: &ProductPoint) -> ProductPoint {
        ProductPoint {
            z1: self.g1.apply_inverse(&x.z1),
            z2: self.g2.apply_inverse(&x.z2),
        }
    }
}

/// Geodesic at distance `p` from the origin inside the flat
/// `γ_α × γ_β` through the origin, where `γ_α` is the geodesic through the
/// factor origin at angle `α`. In flat coordinates it is the line
/// `(p cos φ - s sin φ, p sin φ + s cos φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatGeodesic {
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
    pub p: f64,
}

impl FlatGeodesic {
    pub fn flat_coords(&self, s: f64) -> (f64, f64) {
        let (sp, cp) = self.phi.sin_cos();
        (self.p * cp - s * sp, self.p * sp + s * cp)
    }

    pub fn point(&self, s: f64) -> ProductPoint {
        let (u, v) = self.flat_coords(s);
        ProductPoint {
            z1: HypPoint::from_polar(u, self.alpha),
            z2: HypPoint::from_polar(v, self.beta),
        }
    }

    /// Parameter interval inside the product-distance ball of radius `r`
    /// about the origin.
    pub fn origin_ball_interval(&self, r: f64) -> Option<(f64, f64)> {
        if self.p > r {
            return None;
        }
        let half = (r * r - self.p * self.p).sqrt();
        Some((-half, half))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_speed_and_distance() {
        let g = FlatGeodesic {
            alpha: 0.4,
            beta: 2.1,
            phi: 0.9,
            p: 1.3,
        };
        let h = 1e-5;
        for s in [-2.0, 0.0, 0.5, 3.0] {
            let v = g.point(s - h).distance(&g.point(s + h)) / (2.0 * h);
            assert!((v - 1.0).abs() < 1e-8);
        }
        // closest point to the origin at s = 0
        let o = ProductPoint::origin();
        let mut best = f64::INFINITY;
        for k in -2000..=2000 {
            let s = k as f64 * 1e-3;
            best = best.min(g.point(s).distance(&o));
        }
        assert!((best - 1.3).abs() < 1e-6);
    }

    #[test]
    fn isometry_round_trip() {
        let x = ProductPoint {
            z1: HypPoint::from_polar(0.5, 1.0),
            z2: HypPoint::from_polar(1.2, -0.3),
        };
        let g = ProductIsometry::translation_to(&x);
        let back = g.apply(&ProductPoint::origin());
        assert!(back.distance(&x) < 1e-12);
        assert!(g.apply_inverse(&x).distance(&ProductPoint::origin()) < 1e-12);
    }
}
