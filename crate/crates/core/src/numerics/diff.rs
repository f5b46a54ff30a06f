use std::collections::HashMap;

use log::{debug, warn};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub step: f64,
    /// The stencil would have crossed `p = 0` and the step was shrunk.
    pub shrunk: bool,
}

/// Fourth-order central difference `F'(p)`; the stencil is kept inside
/// `p > 0` by shrinking `h`.
pub fn d_dp<F: FnMut(f64) -> f64>(mut f: F, p: f64, h: f64) -> Derivative {
    let mut step = h;
    let mut shrunk = false;
    if p - 2.0 * step <= 0.0 {
        step = p / 2.5;
        shrunk = true;
        debug!("d_dp: stencil at p={p} leaves the domain, step shrunk to {step:.3e}");
    }
    let value = (f(p - 2.0 * step) - 8.0 * f(p - step) + 8.0 * f(p + step) - f(p + 2.0 * step))
        / (12.0 * step);
    Derivative {
        value,
        step,
        shrunk,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R2Derivative {
    pub value: f64,
    pub error_estimate: f64,
    /// Richardson estimate too large compared to the value.
    pub unstable: bool,
}

const CENTRAL: [(i64, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];
const CENTRAL_DENOM: f64 = 12.0;
const FORWARD: [(i64, f64); 5] = [(0, -25.0), (1, 48.0), (2, -36.0), (3, 16.0), (4, -3.0)];
const FORWARD_DENOM: f64 = 12.0;

fn compose(stencil: &[(i64, f64)], times: usize) -> Vec<(i64, f64)> {
    let mut acc: HashMap<i64, f64> = HashMap::from([(0, 1.0)]);
    for _ in 0..times {
        let mut next = HashMap::new();
        for (&o, &c) in &acc {
            for &(s, w) in stencil {
                *next.entry(o + s).or_insert(0.0) += c * w;
            }
        }
        acc = next;
    }
    let mut out: Vec<(i64, f64)> = acc.into_iter().collect();
    out.sort_by_key(|&(o, _)| o);
    out
}

/// `(d/d(r²))^d F` at `r0`, via the substitution `q = r²` and composed
/// fourth-order differences in `q`, with one Richardson step (`h`, `h/2`).
/// Central stencils are used when they stay inside `q ≥ 0`; otherwise
/// one-sided forward stencils starting at `q0`.
pub fn iterated_r2_derivative<F: FnMut(f64) -> f64>(f: F, d: usize, r0: f64, h: f64) -> R2Derivative {
    iterated_r2_derivative_above(f, d, r0, h, 0.0)
}

/// As [`iterated_r2_derivative`], with `F` only available for `r² ≥ q_floor`.
pub fn iterated_r2_derivative_above<F: FnMut(f64) -> f64>(
    mut f: F,
    d: usize,
    r0: f64,
    h: f64,
    q_floor: f64,
) -> R2Derivative {
    let q0 = r0 * r0;
    let reach = 2 * d as i64;
    let central = q0 - reach as f64 * h >= q_floor;
    let (base, denom) = if central {
        (&CENTRAL[..], CENTRAL_DENOM)
    } else {
        (&FORWARD[..], FORWARD_DENOM)
    };
    let stencil = compose(base, d);
    // offsets measured in units of h/2 so both step sizes share evaluations
    let mut cache: HashMap<i64, f64> = HashMap::new();
    let mut sample = |k: i64| -> f64 {
        *cache.entry(k).or_insert_with(|| {
            let q = (q0 + k as f64 * 0.5 * h).max(q_floor);
            f(q.sqrt())
        })
    };
    let mut apply = |unit: i64, step: f64| -> f64 {
        let mut acc = 0.0;
        for &(o, c) in &stencil {
            acc += c * sample(o * unit);
        }
        acc / (denom * step).powi(d as i32)
    };
    let coarse = apply(2, h);
    let fine = apply(1, 0.5 * h);
    let value = fine + (fine - coarse) / 15.0;
    let error_estimate = (fine - coarse).abs() / 15.0;
    let unstable = !value.is_finite() || error_estimate > 1e-3 * value.abs() + 1e-12;
    if unstable {
        warn!("iterated_r2_derivative: Richardson estimate {error_estimate:.3e} vs value {value:.3e}");
    }
    R2Derivative {
        value,
        error_estimate,
        unstable,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_derivative_examples() {
        assert!((d_dp(|p| p * p, 1.0, 1e-2).value - 2.0).abs() < 1e-10);
        assert!(d_dp(|_| 4.2, 1.0, 1e-2).value.abs() < 1e-12);
        let want = -2.0 * 0.7 * (-0.49f64).exp();
        assert!((d_dp(|p: f64| (-p * p).exp(), 0.7, 1e-2).value - want).abs() < 1e-8);
    }

    #[test]
    fn shrinks_near_zero() {
        let d = d_dp(|p| p * p * p, 0.01, 1e-2);
        assert!(d.shrunk);
        assert!((d.value - 3e-4).abs() < 1e-12);
    }

    #[test]
    fn r2_derivative_examples() {
        for r0 in [0.0, 0.3, 1.0, 2.0] {
            let v = iterated_r2_derivative(|r| r * r, 1, r0, 1e-2);
            assert!((v.value - 1.0).abs() < 1e-9, "r0={r0}: {v:?}");
            let v = iterated_r2_derivative(|r| r.powi(4), 2, r0, 1e-2);
            assert!((v.value - 2.0).abs() < 1e-7, "r0={r0}: {v:?}");
        }
        let v = iterated_r2_derivative(|r: f64| (-r * r).exp(), 1, 0.0, 1e-2);
        assert!((v.value + 1.0).abs() < 1e-8, "{v:?}");
        assert!(!v.unstable);
    }

    #[test]
    fn one_sided_above_floor() {
        // G(q) = e^{-(q-1)}, second q-derivative at q=1 is 1
        let v = iterated_r2_derivative_above(|r: f64| (-(r * r - 1.0)).exp(), 2, 1.0, 1e-2, 1.0);
        assert!((v.value - 1.0).abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn composed_forward_stencil_coefficients() {
        // square of the 5-point forward stencil, integer numerators over 144
        let s = compose(&FORWARD, 2);
        assert_eq!(s.len(), 9);
        assert!((s[0].1 - 625.0).abs() < 1e-12);
        let total: f64 = s.iter().map(|&(_, c)| c).sum();
        assert!(total.abs() < 1e-12);
    }
}
