//! Test functions ("phantoms") on every model space.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::disk::HypPoint;
use crate::geometry::euclid::EuclidPoint;
use crate::geometry::field::{Decay, DecayKind, MetricPoint, ScalarField};
use crate::geometry::product::ProductPoint;
use crate::geometry::space3::H3Point;

/// Smooth (or, for the indicator, rough) profile of a distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialProfile {
    /// `A e^{-(d/w)²}`
    Gaussian { amplitude: f64, width: f64 },
    /// `A e·exp(-1/(1 - (d/R)²))` for `d < R`, else 0; peak value `A`.
    Bump { amplitude: f64, radius: f64 },
    /// `A exp(-((d² - r0²)/(2 r0 w))²)`, a smooth shell near `d = r0`.
    Ring { amplitude: f64, radius: f64, width: f64 },
    /// `A` for `d < R`, else 0.
    Indicator { amplitude: f64, radius: f64 },
}

impl RadialProfile {
    pub fn eval(&self, d: f64) -> f64 {
        match *self {
            RadialProfile::Gaussian { amplitude, width } => amplitude * (-(d / width).powi(2)).exp(),
            RadialProfile::Bump { amplitude, radius } => {
                let q = (d / radius).powi(2);
                if q >= 1.0 {
                    0.0
                } else {
                    amplitude * (1.0 - 1.0 / (1.0 - q)).exp()
                }
            }
            RadialProfile::Ring {
                amplitude,
                radius,
                width,
            } => amplitude * (-((d * d - radius * radius) / (2.0 * radius * width)).powi(2)).exp(),
            RadialProfile::Indicator { amplitude, radius } => {
                if d < radius {
                    amplitude
                } else {
                    0.0
                }
            }
        }
    }

    pub fn amplitude(&self) -> f64 {
        match *self {
            RadialProfile::Gaussian { amplitude, .. }
            | RadialProfile::Bump { amplitude, .. }
            | RadialProfile::Ring { amplitude, .. }
            | RadialProfile::Indicator { amplitude, .. } => amplitude,
        }
    }

    pub fn decay_kind(&self) -> DecayKind {
        match *self {
            RadialProfile::Gaussian { width, .. } => DecayKind::Gaussian {
                rate: 1.0 / (width * width),
                offset: 0.0,
            },
            RadialProfile::Bump { radius, .. } | RadialProfile::Indicator { radius, .. } => {
                DecayKind::Compact { support_radius: radius }
            }
            RadialProfile::Ring { radius, width, .. } => DecayKind::Gaussian {
                rate: 1.0 / (width * width),
                offset: radius,
            },
        }
    }

    /// Distance beyond which the profile is negligible (or exactly zero).
    pub fn extent(&self) -> f64 {
        Decay {
            center: (),
            kind: self.decay_kind(),
            bound: self.amplitude().abs(),
        }
        .effective_radius()
    }

    pub fn scaled(&self, c: f64) -> Self {
        match *self {
            RadialProfile::Gaussian { amplitude, width } => RadialProfile::Gaussian {
                amplitude: c * amplitude,
                width,
            },
            RadialProfile::Bump { amplitude, radius } => RadialProfile::Bump {
                amplitude: c * amplitude,
                radius,
            },
            RadialProfile::Ring {
                amplitude,
                radius,
                width,
            } => RadialProfile::Ring {
                amplitude: c * amplitude,
                radius,
                width,
            },
            RadialProfile::Indicator { amplitude, radius } => RadialProfile::Indicator {
                amplitude: c * amplitude,
                radius,
            },
        }
    }
}

/// Field `x ↦ profile(d(center, x))`.
pub fn radial_field<P: MetricPoint>(center: P, profile: RadialProfile) -> ScalarField<P> {
    let decay = Decay {
        center,
        kind: profile.decay_kind(),
        bound: profile.amplitude().abs(),
    };
    ScalarField::new(move |x: &P| profile.eval(center.distance(x)), Some(decay))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhantomKind {
    GaussianOfDistance,
    CompactBump,
    TranslatedBump,
    Ring,
    SeparableProduct,
    BallIndicator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhantomSpec {
    pub kind: PhantomKind,
    /// Model coordinates of the center: ℝⁿ coordinates; `[re, im]` of the disk
    /// point; Poincaré-ball coordinates in H³; `[re1, im1, re2, im2]` on
    /// H²×H². Empty means the origin.
    #[serde(default)]
    pub center: Vec<f64>,
    #[serde(default = "one")]
    pub width: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub support_radius: Option<f64>,
    #[serde(default)]
    pub ring_radius: Option<f64>,
    /// Width of the second factor of a separable product.
    #[serde(default)]
    pub secondary_width: Option<f64>,
}

fn one() -> f64 {
    1.0
}

impl PhantomSpec {
    pub fn gaussian(amplitude: f64, width: f64) -> Self {
        Self {
            kind: PhantomKind::GaussianOfDistance,
            center: Vec::new(),
            width,
            amplitude,
            support_radius: None,
            ring_radius: None,
            secondary_width: None,
        }
    }

    pub fn bump(amplitude: f64, radius: f64) -> Self {
        Self {
            kind: PhantomKind::CompactBump,
            support_radius: Some(radius),
            ..Self::gaussian(amplitude, 1.0)
        }
    }

    pub fn indicator(amplitude: f64, radius: f64) -> Self {
        Self {
            kind: PhantomKind::BallIndicator,
            support_radius: Some(radius),
            ..Self::gaussian(amplitude, 1.0)
        }
    }

    pub fn at(mut self, center: &[f64]) -> Self {
        self.center = center.to_vec();
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.width > 0.0) || !self.amplitude.is_finite() {
            return Err(Error::Validation("phantom width must be positive".into()));
        }
        if let Some(r) = self.support_radius {
            if !(r > 0.0) {
                return Err(Error::Validation("support radius must be positive".into()));
            }
        }
        Ok(())
    }

    /// The distance profile, for every kind but the separable product.
    pub fn profile(&self) -> Result<RadialProfile> {
        self.validate()?;
        let a = self.amplitude;
        let need_radius = || {
            self.support_radius
                .ok_or_else(|| Error::Validation(format!("{:?} needs support_radius", self.kind)))
        };
        Ok(match self.kind {
            PhantomKind::GaussianOfDistance => RadialProfile::Gaussian {
                amplitude: a,
                width: self.width,
            },
            PhantomKind::CompactBump | PhantomKind::TranslatedBump => RadialProfile::Bump {
                amplitude: a,
                radius: need_radius()?,
            },
            PhantomKind::Ring => RadialProfile::Ring {
                amplitude: a,
                radius: self
                    .ring_radius
                    .ok_or_else(|| Error::Validation("ring needs ring_radius".into()))?,
                width: self.width,
            },
            PhantomKind::BallIndicator => RadialProfile::Indicator {
                amplitude: a,
                radius: need_radius()?,
            },
            PhantomKind::SeparableProduct => {
                return Err(Error::Validation(
                    "separable-product has no single distance profile".into(),
                ))
            }
        })
    }

    fn center_coords<const K: usize>(&self) -> Result<[f64; K]> {
        if self.center.is_empty() {
            return Ok([0.0; K]);
        }
        self.center.as_slice().try_into().map_err(|_| {
            Error::Validation(format!(
                "phantom center has {} coordinates, expected {K}",
                self.center.len()
            ))
        })
    }

    pub fn euclid<const N: usize>(&self) -> Result<ScalarField<EuclidPoint<N>>> {
        let center = EuclidPoint::new(self.center_coords::<N>()?)?;
        if self.kind != PhantomKind::SeparableProduct {
            return Ok(radial_field(center, self.profile()?));
        }
        self.validate()?;
        let (a, w1) = (self.amplitude, self.width);
        let w2 = self.secondary_width.unwrap_or(w1);
        let c = center.coords;
        let wmax = w1.max(w2);
        let decay = Decay {
            center,
            kind: DecayKind::Gaussian {
                rate: 1.0 / (wmax * wmax),
                offset: 0.0,
            },
            bound: a.abs(),
        };
        Ok(ScalarField::new(
            move |x: &EuclidPoint<N>| {
                let d0 = (x.coords[0] - c[0]) / w1;
                let rest: f64 = (1..N).map(|i| (x.coords[i] - c[i]).powi(2)).sum::<f64>() / (w2 * w2);
                a * (-d0 * d0 - rest).exp()
            },
            Some(decay),
        ))
    }

    pub fn disk(&self) -> Result<ScalarField<HypPoint>> {
        let [re, im] = self.center_coords::<2>()?;
        let center = HypPoint::new(Complex64::new(re, im))?;
        Ok(radial_field(center, self.profile()?))
    }

    pub fn h3(&self) -> Result<ScalarField<H3Point>> {
        let center = H3Point::from_ball(self.center_coords::<3>()?)?;
        Ok(radial_field(center, self.profile()?))
    }

    pub fn product(&self) -> Result<ScalarField<ProductPoint>> {
        let [a1, b1, a2, b2] = self.center_coords::<4>()?;
        let center = ProductPoint {
            z1: HypPoint::new(Complex64::new(a1, b1))?,
            z2: HypPoint::new(Complex64::new(a2, b2))?,
        };
        if self.kind != PhantomKind::SeparableProduct {
            return Ok(radial_field(center, self.profile()?));
        }
        self.validate()?;
        let g1 = RadialProfile::Gaussian {
            amplitude: self.amplitude,
            width: self.width,
        };
        let w2 = self.secondary_width.unwrap_or(self.width);
        let g2 = RadialProfile::Gaussian {
            amplitude: 1.0,
            width: w2,
        };
        Ok(separable_field(center, g1, g2))
    }
}

/// `(z1, z2) ↦ g1(d(c1, z1))·g2(d(c2, z2))`.
pub fn separable_field(center: ProductPoint, g1: RadialProfile, g2: RadialProfile) -> ScalarField<ProductPoint> {
    let kind = match (g1.decay_kind(), g2.decay_kind()) {
        (DecayKind::Compact { support_radius: r1 }, DecayKind::Compact { support_radius: r2 }) => {
            DecayKind::Compact {
                support_radius: r1.hypot(r2),
            }
        }
        (k1, k2) => {
            let rate = |k: DecayKind| match k {
                DecayKind::Gaussian { rate, .. } => rate,
                DecayKind::Compact { .. } => f64::INFINITY,
            };
            let off = |k: DecayKind| match k {
                DecayKind::Gaussian { offset, .. } => offset,
                DecayKind::Compact { support_radius } => support_radius,
            };
            // d1² + d2² = d² forces one factor distance ≥ d/√2
            DecayKind::Gaussian {
                rate: 0.5 * rate(k1).min(rate(k2)),
                offset: std::f64::consts::SQRT_2 * off(k1).max(off(k2)),
            }
        }
    };
    let bound = g1.amplitude().abs() * g2.amplitude().abs();
    ScalarField::new(
        move |x: &ProductPoint| {
            g1.eval(center.z1.distance(&x.z1)) * g2.eval(center.z2.distance(&x.z2))
        },
        Some(Decay { center, kind, bound }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_of_distance() {
        let f = PhantomSpec::gaussian(1.0, 1.0).disk().unwrap();
        assert_eq!(f.eval(&HypPoint::origin()), 1.0);
        let z = HypPoint::from_polar(0.8, 0.3);
        assert!((f.eval(&z) - (-0.64f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn bump_support_contract() {
        let f = PhantomSpec::bump(2.0, 1.0).disk().unwrap();
        assert_eq!(f.eval(&HypPoint::from_polar(1.0, 0.0)), 0.0);
        assert_eq!(f.eval(&HypPoint::from_polar(1.3, 2.0)), 0.0);
        assert!(f.eval(&HypPoint::from_polar(0.99, 2.0)) > 0.0);
        assert_eq!(f.eval(&HypPoint::origin()), 2.0);
    }

    #[test]
    fn translated_bump_peak() {
        let mut s = PhantomSpec::bump(1.5, 0.7).at(&[0.3, -0.2]);
        s.kind = PhantomKind::TranslatedBump;
        let f = s.disk().unwrap();
        let c = HypPoint::new(Complex64::new(0.3, -0.2)).unwrap();
        assert!((f.eval(&c) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip_and_kebab_names() {
        let s: PhantomSpec = serde_json::from_str(
            r#"{"kind": "compact-bump", "support_radius": 1.0, "center": [0.1, 0.0]}"#,
        )
        .unwrap();
        assert_eq!(s.kind, PhantomKind::CompactBump);
        assert!(serde_json::from_str::<PhantomSpec>(r#"{"kind": "gaussian-of-distance", "colour": 1}"#).is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(PhantomSpec::gaussian(1.0, -1.0).disk().is_err());
        let mut s = PhantomSpec::gaussian(1.0, 1.0);
        s.kind = PhantomKind::CompactBump;
        assert!(s.disk().is_err());
        assert!(PhantomSpec::gaussian(1.0, 1.0).at(&[1.0, 0.0]).disk().is_err());
    }

    #[test]
    fn ring_is_smooth_at_center() {
        let p = RadialProfile::Ring {
            amplitude: 1.0,
            radius: 1.0,
            width: 0.4,
        };
        let h = 1e-4;
        assert!(((p.eval(h) - p.eval(0.0)) / h).abs() < 1e-3);
    }
}
