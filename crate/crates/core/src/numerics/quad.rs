use std::f64::consts::PI;

use crate::config::QuadratureSpec;
use crate::error::{Error, Result};
use crate::numerics::gauss::{composite, gauss_legendre};

/// Where a line integrand can be nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineSupport {
    /// Negligible outside `[-half_length, half_length]`.
    Symmetric { half_length: f64 },
    /// Negligible outside `[lo, hi]`.
    Interval { lo: f64, hi: f64 },
    /// Identically zero.
    Empty,
}

const MAX_LINE_PANEL: f64 = 6.0;

/// Composite Gauss–Legendre integral over the real line, truncated where the
/// decay metadata says the integrand is negligible.
pub fn integrate_line<F: FnMut(f64) -> f64>(
    g: F,
    support: Option<LineSupport>,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let support = support.ok_or(Error::MissingDecay)?;
    let (lo, hi) = match support {
        LineSupport::Empty => return Ok(0.0),
        LineSupport::Symmetric { half_length } => (-half_length, half_length),
        LineSupport::Interval { lo, hi } => (lo, hi),
    };
    let lo = lo.max(-spec.line_cutoff);
    let hi = hi.min(spec.line_cutoff);
    if hi <= lo {
        return Ok(0.0);
    }
    let panels = spec
        .panel_count
        .max(((hi - lo) / MAX_LINE_PANEL).ceil() as usize);
    Ok(composite(spec.gauss_order, panels, lo, hi, g))
}

/// Normalized trapezoid average `(1/2π) ∫ g(θ) dθ` with `m` equispaced samples.
pub fn integrate_circle<F: FnMut(f64) -> f64>(mut g: F, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let step = 2.0 * PI / m as f64;
    let mut acc = 0.0;
    for k in 0..m {
        acc += g(k as f64 * step);
    }
    acc / m as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailWeight {
    /// `dp / p`
    InverseP,
    /// `dp / sinh p`
    InverseSinh,
}

impl TailWeight {
    pub fn eval(self, p: f64) -> f64 {
        match self {
            TailWeight::InverseP => 1.0 / p,
            TailWeight::InverseSinh => 1.0 / p.sinh(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIntegral {
    /// Integral over `[0, P]`, with the `[0, ε]` piece filled in by
    /// extrapolating the weighted integrand to `p = 0`.
    pub value: f64,
    /// Plain integral over `[ε, P]`.
    pub truncated: f64,
    /// Change of `value` when `ε` is halved.
    pub eps_sensitivity: f64,
    pub divergent: bool,
}

const GEOMETRIC_ORDER: usize = 6;
const UNIFORM_ORDER: usize = 12;
const UNIFORM_PANEL: f64 = 1.0;

/// `∫ F(p)·weight(p) dp` over `[ε, upper]` with panels refined geometrically
/// toward `ε`; `upper` defaults to the `QuadratureSpec` cutoff.
///
/// `tolerance` sets the divergence threshold: halving `ε` must not move the
/// result by more than `100·tolerance`.
pub fn weighted_tail_integral<F: FnMut(f64) -> f64>(
    mut f: F,
    weight: TailWeight,
    spec: &QuadratureSpec,
    upper: Option<f64>,
    tolerance: f64,
) -> TailIntegral {
    let eps = spec.p_cutoff_low;
    let top = upper.map_or(spec.p_cutoff_high, |u| u.min(spec.p_cutoff_high));
    let mut integrand = |p: f64| f(p) * weight.eval(p);
    if top <= eps {
        return TailIntegral {
            value: 0.0,
            truncated: 0.0,
            eps_sensitivity: 0.0,
            divergent: false,
        };
    }
    let geo_rule = gauss_legendre(GEOMETRIC_ORDER);
    let uni_rule = gauss_legendre(UNIFORM_ORDER);
    let mut truncated = 0.0;
    let mut lo = eps;
    let knee = top.min(1.0);
    while lo < knee {
        let hi = (2.0 * lo).min(knee);
        truncated += geo_rule.integrate(lo, hi, &mut integrand);
        lo = hi;
    }
    if top > knee {
        let panels = ((top - knee) / UNIFORM_PANEL).ceil() as usize;
        let width = (top - knee) / panels as f64;
        for k in 0..panels {
            let a = knee + k as f64 * width;
            truncated += uni_rule.integrate(a, a + width, &mut integrand);
        }
    }
    let i_half = integrand(0.5 * eps);
    let i_eps = integrand(eps);
    let i_two = integrand(2.0 * eps);
    // linear extrapolation of the integrand to 0, trapezoid on [0, ε]
    let head = |a: f64, fa: f64, f2a: f64| {
        let f0 = 2.0 * fa - f2a;
        0.5 * a * (f0 + fa)
    };
    let value = truncated + head(eps, i_eps, i_two);
    let strip = geo_rule.integrate(0.5 * eps, eps, &mut integrand);
    let value_half = truncated + strip + head(0.5 * eps, i_half, i_eps);
    let sens = (value_half - value).abs();
    let divergent = !value.is_finite() || sens > 100.0 * tolerance;
    TailIntegral {
        value,
        truncated,
        eps_sensitivity: sens,
        divergent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn gaussian_line() {
        let v = integrate_line(
            |s: f64| (-s * s).exp(),
            Some(LineSupport::Symmetric { half_length: 7.0 }),
            &spec(),
        )
        .unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn odd_line_vanishes() {
        let v = integrate_line(
            |s: f64| s * (-s * s).exp(),
            Some(LineSupport::Symmetric { half_length: 7.0 }),
            &spec(),
        )
        .unwrap();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn missing_decay_refused() {
        assert_eq!(
            integrate_line(|_| 1.0, None, &spec()),
            Err(Error::MissingDecay)
        );
    }

    #[test]
    fn circle_rules() {
        assert!((integrate_circle(|_| 3.5, 16) - 3.5).abs() < 1e-15);
        assert!(integrate_circle(|t| (5.0 * t).cos(), 16).abs() < 1e-14);
        assert!((integrate_circle(|t| t.cos().powi(2), 16) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tail_identity_with_head_correction() {
        let mut s = spec();
        s.p_cutoff_high = 1.0;
        let r = weighted_tail_integral(|p| p, TailWeight::InverseP, &s, None, 1e-6);
        assert!((r.value - 1.0).abs() < 1e-13, "{}", r.value);
        assert!((r.truncated - (1.0 - s.p_cutoff_low)).abs() < 1e-13);
        assert!(!r.divergent);
    }

    #[test]
    fn tail_zero() {
        let r = weighted_tail_integral(|_| 0.0, TailWeight::InverseSinh, &spec(), None, 1e-6);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn divergent_integrand_flagged() {
        let r = weighted_tail_integral(|_| 1.0, TailWeight::InverseP, &spec(), Some(2.0), 1e-6);
        assert!(r.divergent);
    }
}
