use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::field::{Decay, DecayKind};

type Eval<S> = Arc<dyn Fn(&S) -> Result<f64> + Send + Sync>;

/// Lazily evaluated function on a space of submanifolds `S` (planes,
/// geodesics, flats), carrying the decay metadata of the field it came from.
#[derive(Clone)]
pub struct SinogramOracle<S, P> {
    eval: Eval<S>,
    decay: Option<Decay<P>>,
}

impl<S, P: fmt::Debug> fmt::Debug for SinogramOracle<S, P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SinogramOracle").field("decay", &self.decay).finish()
    }
}

impl<S: 'static, P: Copy> SinogramOracle<S, P> {
    pub fn new<F>(eval: F, decay: Option<Decay<P>>) -> Self
    where
        F: Fn(&S) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            decay,
        }
    }

    /// Sinogram that vanishes identically.
    pub fn zero(center: P) -> Self {
        Self::new(
            |_| Ok(0.0),
            Some(Decay {
                center,
                kind: DecayKind::Compact { support_radius: 0.0 },
                bound: 0.0,
            }),
        )
    }

    pub fn eval(&self, s: &S) -> Result<f64> {
        (self.eval)(s)
    }

    pub fn decay(&self) -> Result<&Decay<P>> {
        self.decay.as_ref().ok_or(Error::MissingDecay)
    }

    pub fn decay_opt(&self) -> Option<&Decay<P>> {
        self.decay.as_ref()
    }
}
