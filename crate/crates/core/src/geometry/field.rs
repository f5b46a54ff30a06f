use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::disk::{hyp_distance, HypPoint};
use crate::geometry::euclid::EuclidPoint;
use crate::geometry::product::ProductPoint;
use crate::geometry::space3::H3Point;

pub trait MetricPoint: Copy + Send + Sync + 'static {
    fn distance(&self, other: &Self) -> f64;
}

impl<const N: usize> MetricPoint for EuclidPoint<N> {
    fn distance(&self, other: &Self) -> f64 {
        EuclidPoint::distance(self, other)
    }
}

impl MetricPoint for HypPoint {
    fn distance(&self, other: &Self) -> f64 {
        hyp_distance(self, other)
    }
}

impl MetricPoint for H3Point {
    fn distance(&self, other: &Self) -> f64 {
        H3Point::distance(self, other)
    }
}

impl MetricPoint for ProductPoint {
    fn distance(&self, other: &Self) -> f64 {
        ProductPoint::distance(self, other)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayKind {
    /// Zero at distance `≥ support_radius` from the center.
    Compact { support_radius: f64 },
    /// `|f| ≤ bound·exp(-rate·(d - offset)²)` for `d > offset`.
    Gaussian { rate: f64, offset: f64 },
}

/// Decay metadata: how fast a field vanishes away from `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decay<P> {
    pub center: P,
    pub kind: DecayKind,
    /// Bound on `|f|`.
    pub bound: f64,
}

/// Relative size below which a field is treated as zero.
pub const TAIL: f64 = 1e-17;

impl<P: Copy> Decay<P> {
    /// Radius outside which `|f| ≤ tail·bound`.
    pub fn radius(&self, tail: f64) -> f64 {
        match self.kind {
            DecayKind::Compact { support_radius } => support_radius,
            DecayKind::Gaussian { rate, offset } => offset + ((1.0 / tail).ln() / rate).sqrt(),
        }
    }

    pub fn effective_radius(&self) -> f64 {
        self.radius(TAIL)
    }

    pub fn is_compact(&self) -> bool {
        matches!(self.kind, DecayKind::Compact { .. })
    }

    pub fn with_center(&self, center: P) -> Self {
        Self { center, ..*self }
    }
}

type Oracle<P> = Arc<dyn Fn(&P) -> f64 + Send + Sync>;

/// Evaluation oracle with decay metadata.
#[derive(Clone)]
pub struct ScalarField<P> {
    eval: Oracle<P>,
    decay: Option<Decay<P>>,
}

impl<P: fmt::Debug> fmt::Debug for ScalarField<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField").field("decay", &self.decay).finish()
    }
}

impl<P: MetricPoint> ScalarField<P> {
    pub fn new<F>(eval: F, decay: Option<Decay<P>>) -> Self
    where
        F: Fn(&P) -> f64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            decay,
        }
    }

    pub fn zero(center: P) -> Self {
        Self::new(
            |_| 0.0,
            Some(Decay {
                center,
                kind: DecayKind::Compact { support_radius: 0.0 },
                bound: 0.0,
            }),
        )
    }

    #[inline]
    pub fn eval(&self, x: &P) -> f64 {
        (self.eval)(x)
    }

    pub fn decay(&self) -> Result<&Decay<P>> {
        self.decay.as_ref().ok_or(Error::MissingDecay)
    }

    pub fn without_decay(&self) -> Self {
        Self {
            eval: self.eval.clone(),
            decay: None,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let inner = self.eval.clone();
        Self {
            eval: Arc::new(move |x| c * inner(x)),
            decay: self.decay.map(|d| Decay {
                bound: d.bound * c.abs(),
                ..d
            }),
        }
    }

    /// `x ↦ f(g⁻¹ x)` for an isometry given by its forward and inverse maps.
    pub fn transported<G, H>(&self, forward: G, inverse: H) -> Self
    where
        G: Fn(&P) -> P,
        H: Fn(&P) -> P + Send + Sync + 'static,
    {
        let inner = self.eval.clone();
        Self {
            eval: Arc::new(move |x| inner(&inverse(x))),
            decay: self.decay.map(|d| d.with_center(forward(&d.center))),
        }
    }

    /// `a·f + b·g`, with decay metadata covering both.
    pub fn combination(a: f64, f: &Self, b: f64, g: &Self) -> Result<Self> {
        let df = *f.decay()?;
        let dg = *g.decay()?;
        let gap = df.center.distance(&dg.center);
        let kind = match (df.kind, dg.kind) {
            (DecayKind::Compact { support_radius: r1 }, DecayKind::Compact { support_radius: r2 }) => {
                DecayKind::Compact {
                    support_radius: r1.max(gap + r2),
                }
            }
            _ => {
                let (rate, off_f) = match df.kind {
                    DecayKind::Gaussian { rate, offset } => (rate, offset),
                    DecayKind::Compact { support_radius } => (f64::INFINITY, support_radius),
                };
                let (rate_g, off_g) = match dg.kind {
                    DecayKind::Gaussian { rate, offset } => (rate, offset),
                    DecayKind::Compact { support_radius } => (f64::INFINITY, support_radius),
                };
                DecayKind::Gaussian {
                    rate: rate.min(rate_g),
                    offset: off_f.max(gap + off_g),
                }
            }
        };
        let (fe, ge) = (f.eval.clone(), g.eval.clone());
        Ok(Self {
            eval: Arc::new(move |x| a * fe(x) + b * ge(x)),
            decay: Some(Decay {
                center: df.center,
                kind,
                bound: a.abs() * df.bound + b.abs() * dg.bound,
            }),
        })
    }
}
