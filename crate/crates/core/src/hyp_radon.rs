//! Geodesic and totally geodesic plane transforms on H² and H³, their duals
//! at distance `p`, and the hyperbolic inversion formulas.

use std::f64::consts::PI;

use log::debug;
use rayon::prelude::*;

use crate::config::{QuadratureSpec, HYPERBOLIC_P_CUTOFF};
use crate::error::{Error, Result};
use crate::euclid_radon::{sphere_rule, DirectionRule, Reconstruction};
use crate::geometry::disk::{HypGeodesic, HypPoint};
use crate::geometry::euclid::orthonormal_complement;
use crate::geometry::field::{Decay, MetricPoint, ScalarField};
use crate::geometry::hyperboloid::{self, HGeodesic, Vector};
use crate::geometry::space3::{H3Geodesic, H3Plane, H3Point};
use crate::numerics::diff::{d_dp, iterated_r2_derivative_above};
use crate::numerics::gauss::{composite_nodes, gauss_legendre};
use crate::numerics::quad::{integrate_line, weighted_tail_integral, LineSupport, TailWeight};
use crate::oracle::SinogramOracle;

pub type HypSinogram = SinogramOracle<HypGeodesic, HypPoint>;
pub type H3LineSinogram = SinogramOracle<H3Geodesic, H3Point>;
pub type H3PlaneSinogram = SinogramOracle<H3Plane, H3Point>;

/// Angular samples for plane integrals in H³.
const PLANE_ANGLES: usize = 32;

fn geodesic_integral<const D: usize, F: Fn(&Vector<D>) -> f64>(
    g: F,
    gamma: &HGeodesic<D>,
    center: &Vector<D>,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let support = match gamma.ball_interval(center, radius) {
        Some((lo, hi)) => LineSupport::Interval { lo, hi },
        None => LineSupport::Empty,
    };
    integrate_line(|s| g(&gamma.point(s)), Some(support), spec)
}

/// Integral of `f` along the geodesic `γ` with respect to arc length.
pub fn geodesic_forward(f: &ScalarField<HypPoint>, gamma: &HypGeodesic, spec: &QuadratureSpec) -> Result<f64> {
    let decay = f.decay()?;
    geodesic_integral(
        |x: &Vector<3>| f.eval(&HypPoint::from_hyperboloid(x)),
        &gamma.inner,
        &decay.center.to_hyperboloid(),
        decay.effective_radius(),
        spec,
    )
}

pub fn h3_geodesic_forward(f: &ScalarField<H3Point>, gamma: &H3Geodesic, spec: &QuadratureSpec) -> Result<f64> {
    let decay = f.decay()?;
    geodesic_integral(
        |x: &Vector<4>| f.eval(&H3Point { x: *x }),
        gamma,
        &decay.center.x,
        decay.effective_radius(),
        spec,
    )
}

/// Integral of `f` over a totally geodesic plane, in geodesic polar
/// coordinates `sinh r dr dθ` about the point of the plane closest to the
/// center of `f`.
pub fn h3_plane_forward(f: &ScalarField<H3Point>, plane: &H3Plane, spec: &QuadratureSpec) -> Result<f64> {
    let decay = f.decay()?;
    let big_r = decay.effective_radius();
    let (q, delta) = plane.project(&decay.center.x);
    if delta >= big_r {
        return Ok(0.0);
    }
    // cosh R = cosh δ · cosh ρ on the boundary of the disc of intersection
    let rho = (big_r.cosh() / delta.cosh()).acosh();
    let (e1, e2) = plane.frame_at(&q);
    let panels = (rho.ceil() as usize).max(1);
    let mut acc = 0.0;
    for (r, w) in composite_nodes(spec.gauss_order.clamp(8, 16), panels, 0.0, rho) {
        let (ch, sh) = (r.cosh(), r.sinh());
        let mut ring = 0.0;
        for k in 0..PLANE_ANGLES {
            let a = 2.0 * PI * k as f64 / PLANE_ANGLES as f64;
            let v = hyperboloid::add(&e1, a.cos(), &e2, a.sin());
            let y = hyperboloid::add(&q, ch, &v, sh);
            ring += f.eval(&H3Point { x: y });
        }
        acc += w * sh * ring * 2.0 * PI / PLANE_ANGLES as f64;
    }
    Ok(acc)
}

pub fn sinogram_h2(f: &ScalarField<HypPoint>, spec: &QuadratureSpec) -> HypSinogram {
    let field = f.clone();
    let spec = *spec;
    SinogramOracle::new(move |g: &HypGeodesic| geodesic_forward(&field, g, &spec), f.decay().ok().copied())
}

pub fn sinogram_h3_lines(f: &ScalarField<H3Point>, spec: &QuadratureSpec) -> H3LineSinogram {
    let field = f.clone();
    let spec = *spec;
    SinogramOracle::new(move |g: &H3Geodesic| h3_geodesic_forward(&field, g, &spec), f.decay().ok().copied())
}

pub fn sinogram_h3_planes(f: &ScalarField<H3Point>, spec: &QuadratureSpec) -> H3PlaneSinogram {
    let field = f.clone();
    let spec = *spec;
    SinogramOracle::new(move |pl: &H3Plane| h3_plane_forward(&field, pl, &spec), f.decay().ok().copied())
}

fn weighted_sum<T: Sync>(items: &[(T, f64)], eval: impl Fn(&T) -> Result<f64> + Sync) -> Result<f64> {
    let terms: Vec<Result<f64>> = items.par_iter().map(|(s, w)| eval(s).map(|v| v * w)).collect();
    let mut acc = 0.0;
    for t in terms {
        acc += t?;
    }
    Ok(acc)
}

/// Average of `φ` over the geodesics at distance `p` from `x` (`m` angles).
pub fn hyp_dual_at_distance(phi: &HypSinogram, x: &HypPoint, p: f64, m: usize) -> Result<f64> {
    let family: Vec<(HypGeodesic, f64)> = (0..m)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / m as f64;
            (HypGeodesic::at_distance(x, p, a), 1.0 / m as f64)
        })
        .collect();
    weighted_sum(&family, |g| phi.eval(g))
}

fn tangent(x: &Vector<4>, v: &[f64; 3]) -> Vector<4> {
    let mut out = [0.0; 4];
    for (i, c) in v.iter().enumerate() {
        out = hyperboloid::add(&out, 1.0, &hyperboloid::boost_basis(x, i + 1), *c);
    }
    out
}

/// Geodesics of H³ at distance `p` from `x` with averaging weights: a
/// hemisphere of directions times a circle of offsets.
pub fn h3_geodesics_at_distance(x: &H3Point, p: f64, rule: &DirectionRule) -> Vec<(H3Geodesic, f64)> {
    let mut out = Vec::with_capacity(rule.polar * rule.azimuth * rule.circle);
    for (sigma, w) in sphere_rule(rule.polar, rule.azimuth, true) {
        let (e1, e2) = orthonormal_complement(&sigma);
        let dir = tangent(&x.x, &sigma);
        for k in 0..rule.circle {
            let a = 2.0 * PI * k as f64 / rule.circle as f64;
            let u: [f64; 3] = std::array::from_fn(|i| a.cos() * e1[i] + a.sin() * e2[i]);
            // `dir` is orthogonal to the plane of `x` and `u`, so it is its
            // own parallel transport along the offset geodesic
            let base = hyperboloid::exp_map(&x.x, &tangent(&x.x, &u), p);
            out.push((HGeodesic { base, tangent: dir }, w / rule.circle as f64));
        }
    }
    out
}

pub fn h3_planes_at_distance(x: &H3Point, p: f64, rule: &DirectionRule) -> Vec<(H3Plane, f64)> {
    sphere_rule(rule.polar, rule.azimuth, false)
        .into_iter()
        .map(|(omega, w)| (H3Plane::at_distance(&x.x, &tangent(&x.x, &omega), p), w))
        .collect()
}

pub fn h3_line_dual_at_distance(phi: &H3LineSinogram, x: &H3Point, p: f64, rule: &DirectionRule) -> Result<f64> {
    weighted_sum(&h3_geodesics_at_distance(x, p, rule), |g| phi.eval(g))
}

pub fn h3_plane_dual_at_distance(phi: &H3PlaneSinogram, x: &H3Point, p: f64, rule: &DirectionRule) -> Result<f64> {
    weighted_sum(&h3_planes_at_distance(x, p, rule), |pl| phi.eval(pl))
}

fn upper_limit<P: MetricPoint>(x: &P, decay: Option<&Decay<P>>, spec: &QuadratureSpec) -> f64 {
    let cap = spec.p_cutoff_high.min(HYPERBOLIC_P_CUTOFF);
    match decay {
        Some(d) => {
            let reach = x.distance(&d.center) + d.effective_radius() + 2.0 * spec.fd_step;
            if reach > cap {
                debug!("distance integral truncated at {cap}; support reaches {reach:.3}");
            }
            reach.min(cap)
        }
        None => cap,
    }
}

fn xray_tail<F: Fn(f64) -> Result<f64>>(dual: F, spec: &QuadratureSpec, upper: f64) -> Result<Reconstruction> {
    let mut err = None;
    let tail = weighted_tail_integral(
        |p| {
            d_dp(
                |q| {
                    dual(q).unwrap_or_else(|e| {
                        err = Some(e);
                        0.0
                    })
                },
                p,
                spec.fd_step,
            )
            .value
        },
        TailWeight::InverseSinh,
        spec,
        Some(upper),
        5e-3,
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

/// `-(1/π) ∫₀^∞ F'(p) dp / sinh p` on H², `F` the geodesic average at
/// distance `p` from `x`.
pub fn invert_hyp_xray(phi: &HypSinogram, x: &HypPoint, spec: &QuadratureSpec, m: usize) -> Result<Reconstruction> {
    let upper = upper_limit(x, phi.decay_opt(), spec);
    xray_tail(|p| hyp_dual_at_distance(phi, x, p, m), spec, upper)
}

/// The same formula on H³.
pub fn invert_h3_xray(
    phi: &H3LineSinogram,
    x: &H3Point,
    spec: &QuadratureSpec,
    rule: &DirectionRule,
) -> Result<Reconstruction> {
    let upper = upper_limit(x, phi.decay_opt(), spec);
    xray_tail(|p| h3_line_dual_at_distance(phi, x, p, rule), spec, upper)
}

/// `(d/d(r²))² ∫_r^∞ t²·F(cosh⁻¹ t) dt` at `r = 1`, `F` the plane average at
/// distance `cosh⁻¹ t` from `x`; computed in the distance variable
/// `t = cosh p`.
pub fn hyp_tg_bracket(
    phi: &H3PlaneSinogram,
    x: &H3Point,
    spec: &QuadratureSpec,
    rule: &DirectionRule,
) -> Result<Reconstruction> {
    let upper = upper_limit(x, phi.decay_opt(), spec);
    let weighted = |p: f64| -> Result<f64> {
        let (ch, sh) = (p.cosh(), p.sinh());
        Ok(ch * ch * sh * h3_plane_dual_at_distance(phi, x, p, rule)?)
    };
    let knee = upper.min(1.0);
    let mut head = 0.0;
    for (p, w) in composite_nodes(16, 2, 0.0, knee) {
        head += w * weighted(p)?;
    }
    if upper > knee {
        for (p, w) in composite_nodes(12, (upper - knee).ceil() as usize, knee, upper) {
            head += w * weighted(p)?;
        }
    }
    let short = gauss_legendre(8);
    let mut err = None;
    let deriv = iterated_r2_derivative_above(
        |r| {
            let s = r.max(1.0).acosh();
            if s == 0.0 {
                return head;
            }
            let mut acc = 0.0;
            for (p, w) in short.mapped(0.0, s) {
                match weighted(p) {
                    Ok(v) => acc += w * v,
                    Err(e) => err = Some(e),
                }
            }
            head - acc
        },
        2,
        1.0,
        spec.fd_step,
        1.0,
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(Reconstruction {
        value: deriv.value,
        eps_sensitivity: deriv.error_estimate,
        divergent: deriv.unstable,
        upper,
    })
}

/// Plane inversion on H³ with the frozen constant `C(2)`.
pub fn invert_hyp_tg(
    phi: &H3PlaneSinogram,
    x: &H3Point,
    spec: &QuadratureSpec,
    rule: &DirectionRule,
    big_c2: Option<f64>,
) -> Result<Reconstruction> {
    let c = big_c2.ok_or(Error::NotCalibrated("C_d_3_2"))?;
    let b = hyp_tg_bracket(phi, x, spec, rule)?;
    Ok(Reconstruction {
        value: c * b.value,
        eps_sensitivity: c.abs() * b.eps_sensitivity,
        ..b
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::phantom::PhantomSpec;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    /// `∫ e^{-d(o, γ(s))²} ds` with `cosh d = cosh p · cosh s`.
    fn pythagoras(p: f64) -> f64 {
        let g = |s: f64| {
            let d = (p.cosh() * s.cosh()).acosh();
            (-d * d).exp()
        };
        2.0 * crate::numerics::gauss::composite(32, 40, 0.0, 8.0, g)
    }

    #[test]
    fn gaussian_geodesic_integrals() {
        let f = PhantomSpec::gaussian(1.0, 1.0).disk().unwrap();
        for (p, a) in [(0.0, 0.3), (0.8, 2.0), (1.7, 5.0)] {
            let g = HypGeodesic::at_distance(&HypPoint::origin(), p, a);
            let v = geodesic_forward(&f, &g, &spec()).unwrap();
            assert!((v - pythagoras(p)).abs() < 1e-9, "p={p}: {v} vs {}", pythagoras(p));
        }
        let f3 = PhantomSpec::gaussian(1.0, 1.0).h3().unwrap();
        let lines = h3_geodesics_at_distance(&H3Point::origin(), 1.1, &DirectionRule { circle: 3, polar: 2, azimuth: 2 });
        for (g, _) in lines {
            let v = h3_geodesic_forward(&f3, &g, &spec()).unwrap();
            assert!((v - pythagoras(1.1)).abs() < 1e-9);
        }
    }

    #[test]
    fn geodesic_through_origin() {
        let f = PhantomSpec::bump(1.0, 1.5).disk().unwrap();
        let g = HypGeodesic::through(&HypPoint::origin(), 0.4);
        let v = geodesic_forward(&f, &g, &spec()).unwrap();
        let want = 2.0 * crate::numerics::gauss::composite(32, 8, 0.0, 1.5, |r| {
            f.eval(&HypPoint::from_polar(r, 0.0))
        });
        assert!((v - want).abs() < 1e-7, "{v} vs {want}");
    }

    #[test]
    fn disjoint_geodesic_is_zero() {
        let f = PhantomSpec::bump(1.0, 1.0).disk().unwrap();
        let g = HypGeodesic::at_distance(&HypPoint::origin(), 2.0, 0.0);
        assert_eq!(geodesic_forward(&f, &g, &spec()).unwrap(), 0.0);
    }

    #[test]
    fn plane_integral_of_radial_gaussian() {
        let f = PhantomSpec::gaussian(1.0, 1.0).h3().unwrap();
        for p in [0.0f64, 0.9] {
            let want = 2.0 * PI
                * crate::numerics::gauss::composite(32, 20, 0.0, 8.0, |r: f64| {
                    let d = (p.cosh() * r.cosh()).acosh();
                    r.sinh() * (-d * d).exp()
                });
            for (pl, _) in h3_planes_at_distance(&H3Point::origin(), p, &DirectionRule { circle: 0, polar: 2, azimuth: 3 }) {
                let v = h3_plane_forward(&f, &pl, &spec()).unwrap();
                assert!((v - want).abs() < 1e-9 * want, "p={p}: {v} vs {want}");
            }
        }
    }

    #[test]
    fn dual_of_constant_and_zero_inversion() {
        let phi: HypSinogram = SinogramOracle::new(|_| Ok(1.75), None);
        let x = HypPoint::from_polar(0.9, 1.0);
        assert!((hyp_dual_at_distance(&phi, &x, 0.4, 16).unwrap() - 1.75).abs() < 1e-14);
        let zero: HypSinogram = SinogramOracle::zero(HypPoint::origin());
        assert_eq!(invert_hyp_xray(&zero, &x, &spec(), 32).unwrap().value, 0.0);
    }

    #[test]
    fn uncalibrated_refused() {
        let zero: H3PlaneSinogram = SinogramOracle::zero(H3Point::origin());
        let r = invert_hyp_tg(&zero, &H3Point::origin(), &spec(), &DirectionRule::planes_3d(), None);
        assert_eq!(r, Err(Error::NotCalibrated("C_d_3_2")));
    }
}
