//! Line and plane transforms on ℝ² and ℝ³, their duals at distance `p`, and
//! the inversion formulas built from them.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::QuadratureSpec;
use crate::error::{Error, Result};
use crate::geometry::euclid::{axpy, dot, orthonormal_complement, DPlane, EuclidPoint};
use crate::geometry::field::{MetricPoint, ScalarField};
use crate::numerics::diff::{d_dp, iterated_r2_derivative};
use crate::numerics::gauss::{composite_nodes, gauss_legendre};
use crate::numerics::quad::{integrate_line, weighted_tail_integral, LineSupport, TailWeight};
use crate::oracle::SinogramOracle;

pub type EuclidSinogram<const N: usize> = SinogramOracle<DPlane<N>, EuclidPoint<N>>;

fn vec_n<const N: usize>(src: &[f64]) -> [f64; N] {
    let mut v = [0.0; N];
    v.copy_from_slice(&src[..N]);
    v
}

/// Support of `s ↦ f(base + s·dir)` given decay about `center` with radius `r`.
fn chord(base: &[f64], dir: &[f64], center: &[f64], r: f64) -> Option<LineSupport> {
    let rel: Vec<f64> = center.iter().zip(base).map(|(c, b)| c - b).collect();
    let s0: f64 = rel.iter().zip(dir).map(|(a, b)| a * b).sum();
    let dist2 = rel.iter().map(|a| a * a).sum::<f64>() - s0 * s0;
    let h2 = r * r - dist2;
    if h2 <= 0.0 {
        Some(LineSupport::Empty)
    } else {
        let h = h2.sqrt();
        Some(LineSupport::Interval {
            lo: s0 - h,
            hi: s0 + h,
        })
    }
}

/// Integral of `f` over the `d`-plane `ξ` (Lebesgue measure, iterated lines
/// for `d = 2`).
pub fn dplane_forward<const N: usize>(
    f: &ScalarField<EuclidPoint<N>>,
    xi: &DPlane<N>,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let decay = f.decay()?;
    let r = decay.effective_radius();
    let c = decay.center.coords;
    match xi.dim() {
        1 => {
            let e = xi.frame[0];
            let support = chord(&xi.base.coords, &e, &c, r);
            integrate_line(
                |s| f.eval(&EuclidPoint { coords: axpy(&xi.base.coords, s, &e) }),
                support,
                spec,
            )
        }
        2 => {
            let (e1, e2) = (xi.frame[0], xi.frame[1]);
            let proj = xi.project(&decay.center);
            let off = proj.distance(&decay.center);
            if off >= r {
                return Ok(0.0);
            }
            let rho = (r * r - off * off).sqrt();
            let rel = axpy(&proj.coords, -1.0, &xi.base.coords);
            let (a1, a2) = (dot(&rel, &e1), dot(&rel, &e2));
            let mut inner_err = None;
            let outer = integrate_line(
                |s1| {
                    let w = rho * rho - (s1 - a1).powi(2);
                    if w <= 0.0 {
                        return 0.0;
                    }
                    let h = w.sqrt();
                    let row = axpy(&xi.base.coords, s1, &e1);
                    match integrate_line(
                        |s2| f.eval(&EuclidPoint { coords: axpy(&row, s2, &e2) }),
                        Some(LineSupport::Interval { lo: a2 - h, hi: a2 + h }),
                        spec,
                    ) {
                        Ok(v) => v,
                        Err(e) => {
                            inner_err = Some(e);
                            0.0
                        }
                    }
                },
                Some(LineSupport::Interval { lo: a1 - rho, hi: a1 + rho }),
                spec,
            )?;
            match inner_err {
                Some(e) => Err(e),
                None => Ok(outer),
            }
        }
        d => Err(Error::Validation(format!("unsupported plane dimension {d}"))),
    }
}

/// Lazily evaluated plane transform of `f`.
pub fn sinogram<const N: usize>(f: &ScalarField<EuclidPoint<N>>, spec: &QuadratureSpec) -> EuclidSinogram<N> {
    let field = f.clone();
    let spec = *spec;
    SinogramOracle::new(move |xi: &DPlane<N>| dplane_forward(&field, xi, &spec), f.decay().ok().copied())
}

/// Sample counts for averages over plane families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectionRule {
    /// Trapezoid points on circles (normals in ℝ², normals about a line
    /// direction in ℝ³).
    pub circle: usize,
    /// Gauss–Legendre nodes in the polar angle cosine.
    pub polar: usize,
    /// Trapezoid points in azimuth.
    pub azimuth: usize,
}

impl DirectionRule {
    pub fn lines_2d() -> Self {
        Self {
            circle: 64,
            polar: 0,
            azimuth: 0,
        }
    }

    pub fn lines_3d() -> Self {
        Self {
            circle: 12,
            polar: 8,
            azimuth: 16,
        }
    }

    pub fn planes_3d() -> Self {
        Self {
            circle: 0,
            polar: 12,
            azimuth: 24,
        }
    }

    pub fn default_for(n: usize, d: usize) -> Self {
        match (n, d) {
            (3, 1) => Self::lines_3d(),
            (3, 2) => Self::planes_3d(),
            _ => Self::lines_2d(),
        }
    }
}

/// Unit vectors and weights (summing to 1) on the sphere; the upper
/// hemisphere only when `hemisphere` is set.
pub fn sphere_rule(polar: usize, azimuth: usize, hemisphere: bool) -> Vec<([f64; 3], f64)> {
    let rule = gauss_legendre(polar);
    let (lo, total) = if hemisphere { (0.0, 1.0) } else { (-1.0, 2.0) };
    let mut out = Vec::with_capacity(polar * azimuth);
    for (u, w) in rule.mapped(lo, 1.0) {
        let s = (1.0 - u * u).max(0.0).sqrt();
        for k in 0..azimuth {
            let a = 2.0 * PI * k as f64 / azimuth as f64;
            out.push(([s * a.cos(), s * a.sin(), u], w / total / azimuth as f64));
        }
    }
    out
}

/// Planes of dimension `d` at distance `p` from `x`, with averaging weights.
pub fn planes_at_distance<const N: usize>(
    x: &EuclidPoint<N>,
    p: f64,
    d: usize,
    rule: &DirectionRule,
) -> Result<Vec<(DPlane<N>, f64)>> {
    let mut out = Vec::new();
    match (N, d) {
        (2, 1) => {
            for k in 0..rule.circle {
                let a = 2.0 * PI * k as f64 / rule.circle as f64;
                let u = vec_n::<N>(&[a.cos(), a.sin()]);
                let e = vec_n::<N>(&[-a.sin(), a.cos()]);
                let base = EuclidPoint { coords: axpy(&x.coords, p, &u) };
                out.push((DPlane { base, frame: vec![e] }, 1.0 / rule.circle as f64));
            }
        }
        (3, 1) => {
            // a line and its reversal coincide, so directions cover a hemisphere
            for (sigma, w) in sphere_rule(rule.polar, rule.azimuth, true) {
                let (e1, e2) = orthonormal_complement(&sigma);
                for k in 0..rule.circle {
                    let a = 2.0 * PI * k as f64 / rule.circle as f64;
                    let u: Vec<f64> = (0..3).map(|i| a.cos() * e1[i] + a.sin() * e2[i]).collect();
                    let base = EuclidPoint {
                        coords: axpy(&x.coords, p, &vec_n::<N>(&u)),
                    };
                    out.push((
                        DPlane {
                            base,
                            frame: vec![vec_n::<N>(&sigma)],
                        },
                        w / rule.circle as f64,
                    ));
                }
            }
        }
        (3, 2) => {
            for (omega, w) in sphere_rule(rule.polar, rule.azimuth, false) {
                let (e1, e2) = orthonormal_complement(&omega);
                let base = EuclidPoint {
                    coords: axpy(&x.coords, p, &vec_n::<N>(&omega)),
                };
                out.push((
                    DPlane {
                        base,
                        frame: vec![vec_n::<N>(&e1), vec_n::<N>(&e2)],
                    },
                    w,
                ));
            }
        }
        _ => {
            return Err(Error::Validation(format!("unsupported (n, d) = ({N}, {d})")));
        }
    }
    Ok(out)
}

/// Average of `φ` over the `d`-planes at distance `p` from `x`.
pub fn dual_at_distance<const N: usize>(
    phi: &EuclidSinogram<N>,
    x: &EuclidPoint<N>,
    p: f64,
    d: usize,
    rule: &DirectionRule,
) -> Result<f64> {
    let planes = planes_at_distance(x, p, d, rule)?;
    let terms: Vec<Result<f64>> = planes
        .par_iter()
        .map(|(xi, w)| phi.eval(xi).map(|v| v * w))
        .collect();
    let mut acc = 0.0;
    for t in terms {
        acc += t?;
    }
    Ok(acc)
}

/// Value of an inversion formula with its quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    pub value: f64,
    /// Change under halving the lower distance cutoff.
    pub eps_sensitivity: f64,
    pub divergent: bool,
    /// Upper distance cutoff actually used.
    pub upper: f64,
}

/// Upper limit of distance integrals: beyond it every plane at distance `p`
/// from `x` misses the effective support.
fn upper_limit<P: MetricPoint>(x: &P, decay: Option<&crate::geometry::field::Decay<P>>, spec: &QuadratureSpec) -> f64 {
    match decay {
        Some(d) => (x.distance(&d.center) + d.effective_radius() + 2.0 * spec.fd_step).min(spec.p_cutoff_high),
        None => spec.p_cutoff_high,
    }
}

/// `-(1/π) ∫₀^∞ F'(p) dp/p` with `F(p)` the line average at distance `p`
/// from `x` (Radon's inversion in the plane and its analogue in ℝ³).
pub fn invert_xray<const N: usize>(
    phi: &EuclidSinogram<N>,
    x: &EuclidPoint<N>,
    spec: &QuadratureSpec,
    rule: &DirectionRule,
) -> Result<Reconstruction> {
    let upper = upper_limit(x, phi.decay_opt(), spec);
    let mut err = None;
    let h = spec.fd_step;
    let tail = weighted_tail_integral(
        |p| {
            d_dp(
                |q| match dual_at_distance(phi, x, q, 1, rule) {
                    Ok(v) => v,
                    Err(e) => {
                        err = Some(e);
                        0.0
                    }
                },
                p,
                h,
            )
            .value
        },
        TailWeight::InverseP,
        spec,
        Some(upper),
        1e-3,
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

/// `(d/d(r²))² ∫_r^∞ p·F(p) dp` at `r = 0`, `F` the plane average at
/// distance `p` from `x`; the inversion formula for planes in ℝ³ up to its
/// constant.
pub fn dplane_bracket(
    phi: &EuclidSinogram<3>,
    x: &EuclidPoint<3>,
    spec: &QuadratureSpec,
    rule: &DirectionRule,
) -> Result<Reconstruction> {
    let upper = upper_limit(x, phi.decay_opt(), spec);
    let dual = |p: f64| dual_at_distance(phi, x, p, 2, rule);
    let mut head = 0.0;
    let knee = upper.min(1.0);
    for (p, w) in composite_nodes(16, 2, 0.0, knee) {
        head += w * p * dual(p)?;
    }
    if upper > knee {
        let panels = (upper - knee).ceil() as usize;
        for (p, w) in composite_nodes(12, panels, knee, upper) {
            head += w * p * dual(p)?;
        }
    }
    let short = gauss_legendre(8);
    let mut err = None;
    let deriv = iterated_r2_derivative(
        |r| {
            if r == 0.0 {
                return head;
            }
            let mut acc = 0.0;
            for (p, w) in short.mapped(0.0, r) {
                match dual(p) {
                    Ok(v) => acc += w * p * v,
                    Err(e) => err = Some(e),
                }
            }
            head - acc
        },
        2,
        0.0,
        spec.fd_step,
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

/// Plane inversion in ℝ³ with the frozen constant `c(2)`.
pub fn invert_dplane(
    phi: &EuclidSinogram<3>,
    x: &EuclidPoint<3>,
    spec: &QuadratureSpec,
    rule: &DirectionRule,
    c2: Option<f64>,
) -> Result<Reconstruction> {
    let c2 = c2.ok_or(Error::NotCalibrated("c_d_3_2"))?;
    let b = dplane_bracket(phi, x, spec, rule)?;
    Ok(Reconstruction {
        value: c2 * b.value,
        eps_sensitivity: c2.abs() * b.eps_sensitivity,
        ..b
    })
}

/// Both sides of `∫_X f·φ̌ dx = ∫_Ξ f̂·φ dξ` for hyperplanes (`d = N - 1`),
/// where `φ(ω, s)` is a function on hyperplanes `{y·ω = s}` with
/// `φ(-ω, -s) = φ(ω, s)` and `dξ` is the normalized measure on normals
/// times Lebesgue measure on offsets.
pub fn duality_check<const N: usize, Phi>(
    f: &ScalarField<EuclidPoint<N>>,
    phi: Phi,
    spec: &QuadratureSpec,
    rule: &DirectionRule,
) -> Result<(f64, f64)>
where
    Phi: Fn(&[f64; N], f64) -> f64 + Sync,
{
    let decay = f.decay()?;
    let r = decay.effective_radius();
    let c = decay.center.coords;
    let normals: Vec<([f64; N], f64)> = match N {
        2 => (0..rule.circle)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / rule.circle as f64;
                (vec_n::<N>(&[a.cos(), a.sin()]), 1.0 / rule.circle as f64)
            })
            .collect(),
        3 => sphere_rule(rule.polar, rule.azimuth, false)
            .into_iter()
            .map(|(w, q)| (vec_n::<N>(&w), q))
            .collect(),
        _ => return Err(Error::Validation(format!("duality check needs N in {{2, 3}}, got {N}"))),
    };
    let phi_check = |x: &[f64; N]| -> f64 { normals.iter().map(|(w, q)| q * phi(w, dot(x, w))).sum() };

    let radial = composite_nodes(16, 4, 0.0, r);
    let lhs: f64 = if N == 2 {
        let m = 64;
        radial
            .par_iter()
            .map(|&(rr, wr)| {
                let mut acc = 0.0;
                for k in 0..m {
                    let a = 2.0 * PI * k as f64 / m as f64;
                    let x = vec_n::<N>(&[c[0] + rr * a.cos(), c[1] + rr * a.sin()]);
                    acc += f.eval(&EuclidPoint { coords: x }) * phi_check(&x);
                }
                acc * wr * rr * 2.0 * PI / m as f64
            })
            .collect::<Vec<f64>>()
            .iter()
            .sum()
    } else {
        let dirs = sphere_rule(16, 32, false);
        radial
            .par_iter()
            .map(|&(rr, wr)| {
                let mut acc = 0.0;
                for (u, q) in &dirs {
                    let x = vec_n::<N>(&[c[0] + rr * u[0], c[1] + rr * u[1], c[2] + rr * u[2]]);
                    acc += q * f.eval(&EuclidPoint { coords: x }) * phi_check(&x);
                }
                acc * wr * rr * rr * 4.0 * PI
            })
            .collect::<Vec<f64>>()
            .iter()
            .sum()
    };

    let rhs_terms: Vec<Result<f64>> = normals
        .par_iter()
        .map(|(w, q)| {
            let s0 = dot(&c, w);
            let frame: Vec<[f64; N]> = if N == 2 {
                vec![vec_n::<N>(&[-w[1], w[0]])]
            } else {
                let (e1, e2) = orthonormal_complement(&[w[0], w[1], w[2]]);
                vec![vec_n::<N>(&e1), vec_n::<N>(&e2)]
            };
            let mut acc = 0.0;
            for (s, ws) in composite_nodes(16, 4, s0 - r, s0 + r) {
                let mut base = [0.0; N];
                for i in 0..N {
                    base[i] = s * w[i];
                }
                let xi = DPlane {
                    base: EuclidPoint { coords: base },
                    frame: frame.clone(),
                };
                acc += ws * phi(w, s) * dplane_forward(f, &xi, spec)?;
            }
            Ok(q * acc)
        })
        .collect();
    let mut rhs = 0.0;
    for t in rhs_terms {
        rhs += t?;
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::phantom::PhantomSpec;
    use crate::geometry::plane_at_distance;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn gaussian_line_and_plane_integrals() {
        let f2 = PhantomSpec::gaussian(1.0, 1.0).euclid::<2>().unwrap();
        for p in [0.0, 0.7, 2.0] {
            let l = plane_at_distance(&EuclidPoint::origin(), &[[0.6, 0.8]], &[0.8, -0.6], p).unwrap();
            let v = dplane_forward(&f2, &l, &spec()).unwrap();
            assert!((v - PI.sqrt() * (-p * p).exp()).abs() < 1e-12, "p={p}");
        }
        let f3 = PhantomSpec::gaussian(1.0, 1.0).euclid::<3>().unwrap();
        let u = [0.0, 0.6, 0.8];
        let (e1, e2) = orthonormal_complement(&u);
        for p in [0.0, 1.1] {
            let pl = plane_at_distance(&EuclidPoint::origin(), &[e1, e2], &u, p).unwrap();
            let v = dplane_forward(&f3, &pl, &spec()).unwrap();
            assert!((v - PI * (-p * p).exp()).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn disjoint_support_is_zero() {
        let f = PhantomSpec::bump(1.0, 1.0).euclid::<2>().unwrap();
        let l = plane_at_distance(&EuclidPoint::origin(), &[[0.0, 1.0]], &[1.0, 0.0], 2.0).unwrap();
        assert_eq!(dplane_forward(&f, &l, &spec()).unwrap(), 0.0);
    }

    #[test]
    fn dual_of_constant() {
        let phi: EuclidSinogram<3> = SinogramOracle::new(|_| Ok(2.5), None);
        let x = EuclidPoint::new([0.3, -1.0, 2.0]).unwrap();
        for d in [1, 2] {
            let v = dual_at_distance(&phi, &x, 0.7, d, &DirectionRule::default_for(3, d)).unwrap();
            assert!((v - 2.5).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_sinogram_inverts_to_zero() {
        let phi: EuclidSinogram<2> = SinogramOracle::zero(EuclidPoint::origin());
        let r = invert_xray(&phi, &EuclidPoint::origin(), &spec(), &DirectionRule::lines_2d()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn uncalibrated_plane_inversion_refused() {
        let phi: EuclidSinogram<3> = SinogramOracle::zero(EuclidPoint::origin());
        let r = invert_dplane(&phi, &EuclidPoint::origin(), &spec(), &DirectionRule::planes_3d(), None);
        assert_eq!(r, Err(Error::NotCalibrated("c_d_3_2")));
    }
}
