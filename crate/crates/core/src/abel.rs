//! Radial analysis on the hyperbolic plane: the Abel transform, spherical
//! functions and the spherical transform, the multiplier `L`, the dual
//! Abel transform, and radial convolution.

use std::f64::consts::PI;
use std::sync::Arc;

use log::debug;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::QuadratureSpec;
use crate::error::{Error, Result};
use crate::geometry::disk::{busemann, poisson_kernel, HypPoint};
use crate::geometry::field::{Decay, ScalarField};
use crate::geometry::phantom::RadialProfile;
use crate::horocycle::{lambda_multiplier, RHO, W};
use crate::numerics::cfunc::spherical_laplace;
use crate::numerics::gauss::composite_nodes;
use crate::numerics::quad::{integrate_circle, integrate_line, LineSupport};
use crate::numerics::spectral::{apply_multiplier, interpolate_uniform, EvenGridFunction, TGrid};

/// A function of the distance to the origin, with the radius beyond which
/// it is negligible.
#[derive(Clone)]
pub struct RadialField {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    radius: f64,
}

impl std::fmt::Debug for RadialField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialField").field("radius", &self.radius).finish()
    }
}

impl RadialField {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(eval: F, radius: f64) -> Self {
        Self {
            eval: Arc::new(eval),
            radius,
        }
    }

    pub fn from_profile(p: RadialProfile) -> Self {
        Self::new(move |r| p.eval(r), p.extent())
    }

    /// Samples `g` on `[0, radius]` with step `dr` and interpolates; the even
    /// extension keeps the interpolant smooth at `r = 0`.
    pub fn tabulate<F: Fn(f64) -> f64 + Sync>(g: F, radius: f64, dr: f64) -> Self {
        let n = (radius / dr).ceil() as usize;
        let half: Vec<f64> = (0..=n).into_par_iter().map(|k| g(k as f64 * dr)).collect();
        let samples: Vec<f64> = (0..=2 * n).map(|k| half[k.abs_diff(n)]).collect();
        let x0 = -(n as f64) * dr;
        Self::new(move |r| interpolate_uniform(&samples, x0, dr, r.abs()), n as f64 * dr)
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.eval)(r.abs())
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `z ↦ f(d(o, z))` with compact decay metadata at the radius.
    pub fn to_field(&self) -> ScalarField<HypPoint> {
        let inner = self.eval.clone();
        let bound = composite_nodes(8, 16, 0.0, self.radius)
            .iter()
            .fold(0.0f64, |m, (r, _)| m.max(inner(*r).abs()));
        ScalarField::new(
            move |z: &HypPoint| inner(z.distance_from_origin()),
            Some(Decay {
                center: HypPoint::origin(),
                kind: crate::geometry::field::DecayKind::Compact {
                    support_radius: self.radius,
                },
                bound,
            }),
        )
    }
}

/// `φ_λ(t) = ∫_B e^{(iλ+ρ)A(x,b)} db` at distance `t`, evaluated through the
/// line-integral form of the boundary average (uniformly accurate in `t`).
pub fn spherical_function(lambda: Complex64, t: f64) -> Complex64 {
    spherical_laplace(lambda, t)
}

/// The same boundary average by the trapezoid rule on `m` boundary points.
pub fn spherical_function_circle(lambda: Complex64, t: f64, m: usize) -> Complex64 {
    let z = HypPoint::from_polar(t, 0.0);
    let s = Complex64::new(RHO, 0.0) + Complex64::i() * lambda;
    let re = integrate_circle(|th| (s * busemann(&z, th)).exp().re, m);
    let im = integrate_circle(|th| (s * busemann(&z, th)).exp().im, m);
    Complex64::new(re, im)
}

/// `(Af)(t) = e^{ρt} ∫ f(n_s a_t·o) ds`. In `u = e^{t/2}s` the distance is
/// `cosh r = cosh t + u²/2`, so `Af(t) = ∫ f(r(t, u)) du`, even in `t`.
pub fn abel_forward(f: &RadialField, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    let ch = t.cosh();
    let room = f.radius.cosh() - ch;
    if room <= 0.0 {
        return Ok(0.0);
    }
    let half = (2.0 * room).sqrt();
    let unbounded = QuadratureSpec {
        line_cutoff: f64::INFINITY,
        ..*spec
    };
    integrate_line(
        |u| f.eval((ch + 0.5 * u * u).acosh()),
        Some(LineSupport::Symmetric { half_length: half }),
        &unbounded,
    )
}

/// `Af` sampled on the grid.
pub fn abel_grid(f: &RadialField, grid: TGrid, spec: &QuadratureSpec) -> Result<EvenGridFunction> {
    let half: Vec<Result<f64>> = (0..=grid.n / 2)
        .into_par_iter()
        .map(|k| abel_forward(f, grid.t(grid.n / 2 + k), spec))
        .collect();
    let half: Vec<f64> = half.into_iter().collect::<Result<_>>()?;
    let samples = (0..grid.n)
        .map(|k| half[(k as isize - (grid.n / 2) as isize).unsigned_abs().min(grid.n / 2)])
        .collect();
    let g = EvenGridFunction::even(grid, samples)?;
    g.check_decay()?;
    Ok(g)
}

/// `f̃(λ) = ∫_X f(x) φ_{-λ}(x) dx = 2π ∫₀^R f(r) φ_{-λ}(r) sinh r dr`.
pub fn spherical_transform(f: &RadialField, lambda: Complex64) -> Complex64 {
    let r_max = f.radius;
    debug!("spherical transform truncated at radius {r_max:.3}");
    composite_nodes(16, (2.0 * r_max).ceil().max(1.0) as usize, 0.0, r_max)
        .iter()
        .map(|&(r, w)| w * f.eval(r) * r.sinh() * spherical_function(-lambda, r))
        .sum::<Complex64>()
        * (2.0 * PI)
}

/// `Lg`, the multiplier `2πκ|c(λ)|^{-2}` on the grid.
pub fn l_apply(g: &EvenGridFunction, kappa: f64) -> Result<EvenGridFunction> {
    if !g.even {
        return Err(Error::Validation("L acts on even grid functions".into()));
    }
    apply_multiplier(g, &lambda_multiplier(g.grid, kappa, false))
}

/// Boundary samples sufficient for the peaked kernel `e^{ρA(z,·)}` at
/// distance `d` from the origin.
fn dual_angles(d: f64) -> usize {
    ((64.0 * d.exp()).ceil() as usize).max(256).next_power_of_two()
}

/// `(A*g)(z) = ∫_B g(A(z,b)) e^{ρA(z,b)} db`.
pub fn abel_dual<G: Fn(f64) -> f64>(g: G, z: &HypPoint) -> f64 {
    let m = dual_angles(z.distance_from_origin());
    integrate_circle(
        |th| {
            let a = busemann(z, th);
            g(a) * (RHO * a).exp()
        },
        m,
    )
}

/// `(1/w)·A*(L g)` as a function of the radius.
#[derive(Debug, Clone)]
pub struct AbelInverse {
    lg: EvenGridFunction,
}

impl AbelInverse {
    pub fn new(g: &EvenGridFunction, kappa: f64) -> Result<Self> {
        Ok(Self { lg: l_apply(g, kappa)? })
    }

    pub fn eval(&self, r: f64) -> f64 {
        abel_dual(|t| self.lg.eval(t), &HypPoint::from_polar(r, 0.0)) / W
    }

    pub fn dual_of_lg(&self, r: f64) -> f64 {
        W * self.eval(r)
    }
}

pub fn abel_invert(g: &EvenGridFunction, kappa: f64) -> Result<AbelInverse> {
    AbelInverse::new(g, kappa)
}

/// `(f1 × f2)(z) = ∫ f1(d(o,y)) f2(d(y,z)) dA(y)` with `d(o,z) = a`, by
/// brute force in Fermi coordinates along the geodesic from `o` to `z`:
/// `cosh d(o,y) = cosh u cosh v`, `cosh d(z,y) = cosh(u - a) cosh v`,
/// `dA = cosh v du dv`.
pub fn radial_convolution(f1: &RadialField, f2: &RadialField, a: f64) -> f64 {
    let (r1, r2) = (f1.radius, f2.radius);
    let u_lo = (-r1).max(a - r2);
    let u_hi = r1.min(a + r2);
    if u_hi <= u_lo {
        return 0.0;
    }
    let v_hi = r1.min(r2);
    let u_nodes = composite_nodes(16, (2.0 * (u_hi - u_lo)).ceil() as usize, u_lo, u_hi);
    let v_nodes = composite_nodes(16, (2.0 * v_hi).ceil().max(1.0) as usize, 0.0, v_hi);
    u_nodes
        .par_iter()
        .map(|&(u, wu)| {
            let (c0, c1) = (u.cosh(), (u - a).cosh());
            wu * v_nodes
                .iter()
                .map(|&(v, wv)| {
                    let cv = v.cosh();
                    wv * cv * f1.eval((c0 * cv).acosh()) * f2.eval((c1 * cv).acosh())
                })
                .sum::<f64>()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum::<f64>()
        * 2.0
}

/// `sup_λ |(Af)*(λ) - f̃(λ)| / max |f̃|` over the given frequencies.
pub fn intertwining_residual(f: &RadialField, grid: TGrid, lambdas: &[f64], spec: &QuadratureSpec) -> Result<f64> {
    let af = abel_grid(f, grid, spec)?;
    let pairs: Vec<(Complex64, Complex64)> = lambdas
        .par_iter()
        .map(|&l| (af.fourier_at(l), spherical_transform(f, Complex64::new(l, 0.0))))
        .collect();
    let max = pairs.iter().fold(0.0f64, |m, (_, s)| m.max(s.norm()));
    Ok(pairs.iter().fold(0.0f64, |m, (a, s)| m.max((a - s).norm())) / max)
}

/// Smooth even window: 1 on `|t| ≤ inner`, 0 on `|t| ≥ outer`.
pub fn plateau_window(t: f64, inner: f64, outer: f64) -> f64 {
    let x = (t.abs() - inner) / (outer - inner);
    if x <= 0.0 {
        return 1.0;
    }
    if x >= 1.0 {
        return 0.0;
    }
    let bump = |y: f64| if y > 0.0 { (-1.0 / y).exp() } else { 0.0 };
    bump(1.0 - x) / (bump(1.0 - x) + bump(x))
}

/// `cos(λt)` under the plateau window on the grid.
pub fn windowed_cosine(grid: TGrid, lambda: f64, inner: f64, outer: f64) -> Result<EvenGridFunction> {
    EvenGridFunction::even_from_fn(grid, |t| (lambda * t).cos() * plateau_window(t, inner, outer))
}

/// `λ = 0, 1/16, …, 8`.
pub fn lambda_grid() -> Vec<f64> {
    (0..=128).map(|k| k as f64 / 16.0).collect()
}

/// Residuals of `A*(Lφ) = w·f₀` (for `φ = Af₀`) and of
/// `A*(φ * ψ) = (1/w)·A*(Lφ) × A*ψ` at the probe radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LOperatorReport {
    pub residual_inverse: f64,
    pub residual_convolution: f64,
    /// `max |A*(φ * ψ)|` over the probes, for scale.
    pub convolution_scale: f64,
}

pub fn l_operator_identities(
    f0: &RadialField,
    psi: &EvenGridFunction,
    probes: &[f64],
    kappa: f64,
    spec: &QuadratureSpec,
) -> Result<LOperatorReport> {
    let phi = abel_grid(f0, psi.grid, spec)?;
    let inv = AbelInverse::new(&phi, kappa)?;
    let residual_inverse = probes
        .iter()
        .map(|&r| (inv.dual_of_lg(r) - W * f0.eval(r)).abs())
        .fold(0.0, f64::max);

    let conv = crate::numerics::spectral::convolve(&phi, psi)?;
    let reach = f0.radius + probes.iter().fold(0.0f64, |m, r| m.max(*r)) + 0.5;
    let dual_lphi = RadialField::tabulate(|r| inv.dual_of_lg(r), f0.radius, 0.01);
    let dual_psi = RadialField::tabulate(|r| abel_dual(|t| psi.eval(t), &HypPoint::from_polar(r, 0.0)), reach, 0.01);
    let mut residual_convolution = 0.0f64;
    let mut scale = 0.0f64;
    for &r in probes {
        let lhs = abel_dual(|t| conv.eval(t), &HypPoint::from_polar(r, 0.0));
        let rhs = radial_convolution(&dual_lphi, &dual_psi, r) / W;
        residual_convolution = residual_convolution.max((lhs - rhs).abs());
        scale = scale.max(lhs.abs());
    }
    Ok(LOperatorReport {
        residual_inverse,
        residual_convolution,
        convolution_scale: scale,
    })
}

/// Relative error of `(f1 × f2)~(λ) = f̃1(λ) f̃2(λ)` over `lambdas`, with
/// `f1 × f2` tabulated from the brute-force convolution.
pub fn convolution_homomorphism(f1: &RadialField, f2: &RadialField, lambdas: &[f64]) -> f64 {
    let conv = RadialField::tabulate(|r| radial_convolution(f1, f2, r), f1.radius + f2.radius, 0.02);
    let rows: Vec<(Complex64, Complex64)> = lambdas
        .par_iter()
        .map(|&l| {
            let lam = Complex64::new(l, 0.0);
            (
                spherical_transform(&conv, lam),
                spherical_transform(f1, lam) * spherical_transform(f2, lam),
            )
        })
        .collect();
    let max = rows.iter().fold(0.0f64, |m, (_, b)| m.max(b.norm()));
    rows.iter().fold(0.0f64, |m, (a, b)| m.max((a - b).norm())) / max
}

/// Relative error of `A(f1 × f2) = Af1 * Af2` on the grid.
pub fn abel_convolution_residual(f1: &RadialField, f2: &RadialField, grid: TGrid, spec: &QuadratureSpec) -> Result<f64> {
    let conv = RadialField::tabulate(|r| radial_convolution(f1, f2, r), f1.radius + f2.radius, 0.02);
    let lhs = abel_grid(&conv, grid, spec)?;
    let rhs = crate::numerics::spectral::convolve(&abel_grid(f1, grid, spec)?, &abel_grid(f2, grid, spec)?)?;
    let max = rhs.max_abs();
    Ok(lhs
        .samples
        .iter()
        .zip(&rhs.samples)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        / max)
}

/// `(1/2π) ∫ P(z, e^{iθ}) dθ`, which equals 1.
pub fn poisson_mean(z: &HypPoint) -> f64 {
    integrate_circle(|th| poisson_kernel(z, th), dual_angles(z.distance_from_origin()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn gaussian() -> RadialField {
        RadialField::from_profile(RadialProfile::Gaussian {
            amplitude: 1.0,
            width: 1.0,
        })
    }

    #[test]
    fn spherical_function_basics() {
        for l in [0.0, 0.7, 3.0] {
            let lam = Complex64::new(l, 0.0);
            assert!((spherical_function(lam, 0.0) - 1.0).norm() < 1e-12);
            for t in [0.4, 2.0] {
                assert!((spherical_function(lam, t) - spherical_function(-lam, t)).norm() < 1e-12);
                let circ = spherical_function_circle(lam, t, 4096);
                assert!((spherical_function(lam, t) - circ).norm() < 1e-10);
            }
        }
        for t in [0.5, 1.5, 3.0] {
            let one = spherical_function_circle(Complex64::new(0.0, -0.5), t, 4096);
            assert!((one - 1.0).norm() < 1e-12);
            assert!((poisson_mean(&HypPoint::from_polar(t, 0.3)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn abel_parametrization_matches_distance() {
        // d(i, e^t(s + i)) in the half-plane
        for (t, s) in [(0.3, 1.2), (-1.1, 0.4), (2.0, -3.0)] {
            let w = Complex64::new(s, 1.0) * f64::exp(t);
            let d = crate::geometry::disk::half_plane_distance(Complex64::i(), w);
            let formula = (f64::cosh(t) + 0.5 * s * s * f64::exp(t)).acosh();
            assert!((d - formula).abs() < 1e-12);
        }
    }

    #[test]
    fn abel_even_and_compact() {
        let f = gaussian();
        for t in [0.3, 1.7, 4.0] {
            let a = abel_forward(&f, t, &spec()).unwrap();
            let b = abel_forward(&f, -t, &spec()).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        let bump = RadialField::from_profile(RadialProfile::Bump {
            amplitude: 1.0,
            radius: 1.0,
        });
        assert_eq!(abel_forward(&bump, 1.0, &spec()).unwrap(), 0.0);
        assert_eq!(abel_forward(&bump, -1.5, &spec()).unwrap(), 0.0);
        assert!(abel_forward(&bump, 0.99, &spec()).unwrap() > 0.0);
    }

    #[test]
    fn abel_matches_horocycle_transform() {
        let f = gaussian();
        let field = f.to_field();
        for t in [-2.0, -0.3, 0.0, 1.4] {
            let a = abel_forward(&f, t, &spec()).unwrap();
            let h = crate::horocycle::horocycle_forward(&field, &crate::geometry::Horocycle::new(t, 0.0), &spec()).unwrap();
            assert!((a - (RHO * t).exp() * h).abs() < 1e-10);
        }
    }

    #[test]
    fn dual_at_origin_and_of_constant() {
        assert!((abel_dual(|t| (t - 3.0).cos(), &HypPoint::origin()) - 3f64.cos()).abs() < 1e-14);
        for t in [0.5, 2.0] {
            let z = HypPoint::from_polar(t, 1.0);
            let want = spherical_function(Complex64::new(0.0, 0.0), t).re;
            assert!((abel_dual(|_| 1.0, &z) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn dual_of_windowed_cosine_is_spherical_function() {
        let grid = TGrid::new(24.0, 4096).unwrap();
        let psi = windowed_cosine(grid, 2.5, 4.0, 8.0).unwrap();
        for r in [0.0, 0.7, 1.5, 3.0] {
            let got = abel_dual(|t| psi.eval(t), &HypPoint::from_polar(r, 2.0));
            let want = spherical_function(Complex64::new(2.5, 0.0), r).re;
            assert!((got - want).abs() < 1e-10, "r={r}: {got} vs {want}");
        }
    }

    #[test]
    fn convolution_is_symmetric() {
        let f1 = gaussian();
        let f2 = RadialField::from_profile(RadialProfile::Bump {
            amplitude: 1.0,
            radius: 1.5,
        });
        for a in [0.0, 0.8, 2.0] {
            let x = radial_convolution(&f1, &f2, a);
            let y = radial_convolution(&f2, &f1, a);
            assert!((x - y).abs() < 1e-8 * x.abs(), "{x} vs {y}");
        }
    }
}
