//! Fourier transform on the hyperbolic plane, `f̃(λ,b) = ∫ f(x) e^{(-iλ+ρ)A(x,b)} dx`,
//! with inversion, Plancherel, the Poisson transform, and the tube scan.

use std::f64::consts::PI;
use std::io::Write;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::disk::{busemann, DiskIsometry, HypPoint};
use crate::geometry::field::ScalarField;
use crate::horocycle::{RHO, W};
use crate::numerics::cfunc::c_density;
use crate::numerics::gauss::composite_nodes;
use crate::numerics::quad::integrate_circle;

/// `(λ, b)` with `λ = ξ + iη`; the tube is `|η| ≤ ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam {
    pub lambda: Complex64,
    pub theta: f64,
}

impl SpectralParam {
    pub fn new(xi: f64, eta: f64, theta: f64) -> Result<Self> {
        if eta.abs() > RHO + 1e-15 {
            return Err(Error::Validation(format!("η = {eta} outside the tube |η| ≤ 1/2")));
        }
        Ok(Self {
            lambda: Complex64::new(xi, eta),
            theta,
        })
    }
}

/// Relative field size dropped from the polar quadrature; kernel growth
/// `e^{|A|}` at most doubles the effective exponent.
const NEGLIGIBLE: f64 = 1e-15;

#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: HypPoint,
    pub area: f64,
    pub value: f64,
}

/// Quadrature nodes in geodesic polar coordinates about the decay center,
/// resolved for kernels with `|Re λ| ≤ lambda_max`; nodes where `f = 0` are
/// dropped.
#[derive(Debug, Clone)]
pub struct DiskNodes {
    pub nodes: Vec<Node>,
}

impl DiskNodes {
    pub fn new(f: &ScalarField<HypPoint>, lambda_max: f64) -> Result<Self> {
        let decay = f.decay()?;
        let r_max = decay.radius(NEGLIGIBLE);
        let offset = decay.center.distance_from_origin();
        let to_center = DiskIsometry::translation_to(&decay.center);
        let panels = (2.0 * r_max + 0.25 * lambda_max * r_max).ceil().max(1.0) as usize;
        let radial = composite_nodes(16, panels, 0.0, r_max);
        let rings: Vec<Vec<Node>> = radial
            .par_iter()
            .map(|&(r, w)| {
                // the kernel's angular bandwidth grows like e^{d(o,x)}
                let d = offset + r;
                let m = ((8.0 * d.exp() + 4.0 * lambda_max * d + 32.0).ceil() as usize).min(16384);
                let wa = w * r.sinh() * 2.0 * PI / m as f64;
                (0..m)
                    .filter_map(|k| {
                        let x = to_center.apply(&HypPoint::from_polar(r, 2.0 * PI * k as f64 / m as f64));
                        let value = f.eval(&x);
                        (value != 0.0).then_some(Node { x, area: wa, value })
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            nodes: rings.into_iter().flatten().collect(),
        })
    }

    fn transform(&self, lambda: Complex64, theta: f64) -> Complex64 {
        let s = Complex64::new(RHO, 0.0) - Complex64::i() * lambda;
        self.nodes
            .par_iter()
            .map(|n| n.area * n.value * (s * busemann(&n.x, theta)).exp())
            .sum()
    }

    /// `∫ |f|^p dA`.
    pub fn lp_norm(&self, p: i32) -> f64 {
        self.nodes.iter().map(|n| n.area * n.value.abs().powi(p)).sum()
    }
}

/// `f̃(λ, b)` by polar quadrature.
pub fn hfourier_forward(f: &ScalarField<HypPoint>, sp: SpectralParam) -> Result<Complex64> {
    Ok(DiskNodes::new(f, sp.lambda.re.abs())?.transform(sp.lambda, sp.theta))
}

/// `f̃` on `λ_k = k·δλ` (`0 ≤ k ≤ K`) times `θ_j = 2πj/J`, row-major in λ.
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    pub dlambda: f64,
    pub n_lambda: usize,
    pub n_theta: usize,
    pub values: Vec<Complex64>,
}

impl SpectralGrid {
    pub fn from_field(f: &ScalarField<HypPoint>, lambda_max: f64, dlambda: f64, n_theta: usize) -> Result<Self> {
        if n_theta == 0 || dlambda <= 0.0 || lambda_max < 0.0 {
            return Err(Error::Validation("spectral grid needs J > 0 and δλ > 0".into()));
        }
        let n_lambda = (lambda_max / dlambda).round() as usize + 1;
        let nodes = DiskNodes::new(f, lambda_max)?;
        let step = -Complex64::i() * dlambda;
        let columns: Vec<Vec<Complex64>> = (0..n_theta)
            .into_par_iter()
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / n_theta as f64;
                let mut col = vec![Complex64::new(0.0, 0.0); n_lambda];
                for n in &nodes.nodes {
                    let a = busemann(&n.x, theta);
                    let rot = (step * a).exp();
                    let mut term = Complex64::new(n.area * n.value * (RHO * a).exp(), 0.0);
                    for c in col.iter_mut() {
                        *c += term;
                        term *= rot;
                    }
                }
                col
            })
            .collect();
        let mut values = vec![Complex64::new(0.0, 0.0); n_lambda * n_theta];
        for (j, col) in columns.iter().enumerate() {
            for (k, v) in col.iter().enumerate() {
                values[k * n_theta + j] = *v;
            }
        }
        let grid = Self {
            dlambda,
            n_lambda,
            n_theta,
            values,
        };
        let tail = grid.tail_fraction();
        if tail > 1e-6 {
            warn!("spectral band at λ = {lambda_max} carries {tail:.2e} of the spectral mass");
        }
        Ok(grid)
    }

    pub fn lambda(&self, k: usize) -> f64 {
        k as f64 * self.dlambda
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_theta as f64
    }

    pub fn value(&self, k: usize, j: usize) -> Complex64 {
        self.values[k * self.n_theta + j]
    }

    /// Trapezoid weights on `[0, λ_max]`.
    fn lambda_weight(&self, k: usize) -> f64 {
        if k == 0 || k + 1 == self.n_lambda {
            0.5 * self.dlambda
        } else {
            self.dlambda
        }
    }

    /// `∫_B |f̃(λ_k, b)|² db` at each `k`.
    fn band_energy(&self) -> Vec<f64> {
        (0..self.n_lambda)
            .map(|k| (0..self.n_theta).map(|j| self.value(k, j).norm_sqr()).sum::<f64>() / self.n_theta as f64)
            .collect()
    }

    /// Share of `∫|f̃|² c_density` in the last λ band.
    pub fn tail_fraction(&self) -> f64 {
        let e = self.band_energy();
        let total: f64 = e
            .iter()
            .enumerate()
            .map(|(k, v)| v * c_density(self.lambda(k)) * self.dlambda)
            .sum();
        if total == 0.0 {
            return 0.0;
        }
        let k = self.n_lambda - 1;
        e[k] * c_density(self.lambda(k)) * self.dlambda / total
    }

    /// `κ ∫_{λ>0} ∫_B |f̃|² |c(λ)|^{-2} dλ db`.
    pub fn spectral_norm_sq(&self, kappa: f64) -> f64 {
        let e = self.band_energy();
        kappa
            * e.iter()
                .enumerate()
                .map(|(k, v)| self.lambda_weight(k) * v * c_density(self.lambda(k)))
                .sum::<f64>()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "lambda,theta,re,im")?;
        for k in 0..self.n_lambda {
            for j in 0..self.n_theta {
                let v = self.value(k, j);
                writeln!(out, "{},{},{},{}", self.lambda(k), self.theta(j), v.re, v.im)?;
            }
        }
        Ok(())
    }
}

/// `f(z) = (κ/w) ∫_ℝ ∫_B f̃(λ,b) e^{(iλ+ρ)A(z,b)} |c(λ)|^{-2} dλ db`, with
/// negative `λ` supplied by `f̃(-λ,b) = conj f̃(λ,b)` for real `f`.
pub fn hfourier_invert(grid: &SpectralGrid, z: &HypPoint, kappa: f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..grid.n_theta {
        let a = busemann(z, grid.theta(j));
        let ea = (RHO * a).exp();
        for k in 1..grid.n_lambda {
            let l = grid.lambda(k);
            let kernel = Complex64::from_polar(ea, l * a);
            acc += grid.lambda_weight(k) * c_density(l) * (grid.value(k, j) * kernel).re;
        }
    }
    // both halves of the line, each weighted 1/w
    2.0 * kappa / W * acc / grid.n_theta as f64
}

/// `(‖f‖², κ ∫∫|f̃|² |c|^{-2}, ratio)`; `ratio` is `None` for `f = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlancherelCheck {
    pub norm_sq: f64,
    pub spectral_sq: f64,
    pub ratio: Option<f64>,
}

pub fn plancherel_check(
    f: &ScalarField<HypPoint>,
    kappa: f64,
    lambda_max: f64,
    dlambda: f64,
    n_theta: usize,
) -> Result<(PlancherelCheck, SpectralGrid)> {
    let grid = SpectralGrid::from_field(f, lambda_max, dlambda, n_theta)?;
    let norm_sq = l2_norm_sq(f)?;
    let spectral_sq = grid.spectral_norm_sq(kappa);
    let ratio = (norm_sq > 0.0).then(|| spectral_sq / norm_sq);
    Ok((
        PlancherelCheck {
            norm_sq,
            spectral_sq,
            ratio,
        },
        grid,
    ))
}

pub fn l2_norm_sq(f: &ScalarField<HypPoint>) -> Result<f64> {
    Ok(DiskNodes::new(f, 0.0)?.lp_norm(2))
}

pub fn l1_norm(f: &ScalarField<HypPoint>) -> Result<f64> {
    Ok(DiskNodes::new(f, 0.0)?.lp_norm(1))
}

/// `∫_B e^{(iλ+ρ)A(z,b)} F(b) db` with `m` boundary samples.
pub fn poisson_transform<F: Fn(f64) -> Complex64>(boundary: F, lambda: Complex64, z: &HypPoint, m: usize) -> Complex64 {
    let s = Complex64::new(RHO, 0.0) + Complex64::i() * lambda;
    let term = |th: f64| (s * busemann(z, th)).exp() * boundary(th);
    Complex64::new(integrate_circle(|th| term(th).re, m), integrate_circle(|th| term(th).im, m))
}

/// Laplace–Beltrami operator of the disk, `(1-|z|²)²/4 · Δ_euclid`, by the
/// fourth-order five-point-per-axis stencil.
pub fn disk_laplacian<F: Fn(&HypPoint) -> Complex64>(u: F, z: &HypPoint, h: f64) -> Result<Complex64> {
    let at = |dx: f64, dy: f64| -> Result<Complex64> { Ok(u(&HypPoint::new(z.z() + Complex64::new(dx, dy))?)) };
    let c0 = u(z);
    let mut lap = Complex64::new(0.0, 0.0);
    for (ex, ey) in [(1.0, 0.0), (0.0, 1.0)] {
        let p1 = at(ex * h, ey * h)? + at(-ex * h, -ey * h)?;
        let p2 = at(2.0 * ex * h, 2.0 * ey * h)? + at(-2.0 * ex * h, -2.0 * ey * h)?;
        lap += (-p2 + 16.0 * p1 - 30.0 * c0) / (12.0 * h * h);
    }
    let s = 1.0 - z.z().norm_sqr();
    Ok(lap * s * s / 4.0)
}

/// `|Δu + (λ² + 1/4)u| / |(λ² + 1/4)u|` for the Poisson transform `u` of
/// `boundary` at `z`.
pub fn eigenfunction_residual<F: Fn(f64) -> Complex64 + Copy>(
    boundary: F,
    lambda: Complex64,
    z: &HypPoint,
    m: usize,
) -> Result<f64> {
    let h = 1e-2 * (1.0 - z.z().norm());
    let u = |x: &HypPoint| poisson_transform(boundary, lambda, x, m);
    let lap = disk_laplacian(u, z, h)?;
    let ev = lambda * lambda + RHO * RHO;
    let v = u(z);
    Ok((lap + ev * v).norm() / (ev * v).norm())
}

/// One row of the tube scan: `sup |f̃(ξ + iη, b)|` over the η and b lists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub xi: f64,
    pub sup: f64,
}

/// `sup_{η, b} |f̃(ξ+iη, b)|` for each `ξ`, plus the running-max envelope
/// from the right (the smallest non-increasing majorant).
#[derive(Debug, Clone, PartialEq)]
pub struct DecayTable {
    pub rows: Vec<DecayRow>,
    pub envelope: Vec<f64>,
}

impl DecayTable {
    pub fn sup_at(&self, xi: f64) -> Option<f64> {
        self.rows.iter().find(|r| (r.xi - xi).abs() < 1e-12).map(|r| r.sup)
    }

    /// `sup(ξ_last) / sup(ξ_first)`.
    pub fn decay_ratio(&self) -> Option<f64> {
        let (a, b) = (self.rows.first()?, self.rows.last()?);
        (a.sup > 0.0).then(|| b.sup / a.sup)
    }
}

pub fn riemann_lebesgue_scan(
    f: &ScalarField<HypPoint>,
    xis: &[f64],
    etas: &[f64],
    thetas: &[f64],
) -> Result<DecayTable> {
    if etas.iter().any(|e| e.abs() > RHO + 1e-15) {
        return Err(Error::Validation("η outside the tube".into()));
    }
    let mut rows = Vec::with_capacity(xis.len());
    for &xi in xis {
        let nodes = DiskNodes::new(f, xi.abs())?;
        let mut sup = 0.0f64;
        for &eta in etas {
            for &th in thetas {
                sup = sup.max(nodes.transform(Complex64::new(xi, eta), th).norm());
            }
        }
        rows.push(DecayRow { xi, sup });
    }
    let mut envelope = vec![0.0; rows.len()];
    let mut run = 0.0f64;
    for (i, r) in rows.iter().enumerate().rev() {
        run = run.max(r.sup);
        envelope[i] = run;
    }
    Ok(DecayTable { rows, envelope })
}

/// `(∫_B |f̃(λ,b)| db, ‖f‖₁)` at a tube point.
pub fn tube_l1_bound(f: &ScalarField<HypPoint>, lambda: Complex64, n_theta: usize) -> Result<(f64, f64)> {
    let nodes = DiskNodes::new(f, lambda.re.abs())?;
    let lhs = (0..n_theta)
        .into_par_iter()
        .map(|j| nodes.transform(lambda, 2.0 * PI * j as f64 / n_theta as f64).norm())
        .sum::<f64>()
        / n_theta as f64;
    Ok((lhs, nodes.lp_norm(1)))
}

/// `|∂_η F - i ∂_ξ F| / (|F| + |∂_ξ F|)` for `F(λ) = f̃(λ, b)`, with
/// fourth-order central differences of step `h`.
pub fn cauchy_riemann_residual(f: &ScalarField<HypPoint>, lambda: Complex64, theta: f64, h: f64) -> Result<f64> {
    let nodes = DiskNodes::new(f, lambda.re.abs() + 2.0 * h)?;
    let big_f = |l: Complex64| nodes.transform(l, theta);
    let diff = |dir: Complex64| {
        let e = |k: f64| big_f(lambda + dir * (k * h));
        (e(-2.0) - 8.0 * e(-1.0) + 8.0 * e(1.0) - e(2.0)) / (12.0 * h)
    };
    let d_xi = diff(Complex64::new(1.0, 0.0));
    let d_eta = diff(Complex64::i());
    Ok((d_eta - Complex64::i() * d_xi).norm() / (big_f(lambda).norm() + d_xi.norm()))
}

/// `|∫_B f̃(λ,b) e^{(iλ+ρ)A(z,b)} db - ∫_B f̃(-λ,b) e^{(-iλ+ρ)A(z,b)} db|`,
/// both sides transformed directly; relative to the larger side.
pub fn w_invariance_defect(f: &ScalarField<HypPoint>, lambda: f64, z: &HypPoint, n_theta: usize) -> Result<f64> {
    let nodes = DiskNodes::new(f, lambda.abs())?;
    let side = |l: f64| -> Complex64 {
        let lam = Complex64::new(l, 0.0);
        let s = Complex64::new(RHO, 0.0) + Complex64::i() * lam;
        (0..n_theta)
            .into_par_iter()
            .map(|j| {
                let th = 2.0 * PI * j as f64 / n_theta as f64;
                nodes.transform(lam, th) * (s * busemann(z, th)).exp()
            })
            .sum::<Complex64>()
            / n_theta as f64
    };
    let (a, b) = (side(lambda), side(-lambda));
    Ok((a - b).norm() / a.norm().max(b.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abel::{spherical_transform, RadialField};
    use crate::geometry::phantom::{PhantomSpec, RadialProfile};

    #[test]
    fn kernel_anchor_at_minus_i_rho() {
        let f = PhantomSpec::gaussian(1.0, 1.0).at(&[0.3, -0.2]).disk().unwrap();
        let total = l1_norm(&f).unwrap();
        for th in [0.0, 2.0] {
            let v = hfourier_forward(&f, SpectralParam::new(0.0, -0.5, th).unwrap()).unwrap();
            assert!((v.re - total).abs() < 1e-10 * total && v.im.abs() < 1e-10);
        }
    }

    #[test]
    fn radial_field_matches_spherical_transform() {
        let p = RadialProfile::Gaussian { amplitude: 1.0, width: 1.0 };
        let f = PhantomSpec::gaussian(1.0, 1.0).disk().unwrap();
        for l in [0.0, 1.3, 4.0] {
            let want = spherical_transform(&RadialField::from_profile(p), Complex64::new(l, 0.0));
            for th in [0.0, 1.0] {
                let v = hfourier_forward(&f, SpectralParam::new(l, 0.0, th).unwrap()).unwrap();
                assert!((v - want).norm() < 1e-10, "λ={l}: {v} vs {want}");
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let f = PhantomSpec::bump(1.0, 1.2).at(&[0.2, 0.1]).disk().unwrap();
        for l in [0.7, 3.0] {
            let a = hfourier_forward(&f, SpectralParam::new(l, 0.0, 0.4).unwrap()).unwrap();
            let b = hfourier_forward(&f, SpectralParam::new(-l, 0.0, 0.4).unwrap()).unwrap();
            assert!((a.conj() - b).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_field() {
        let f = ScalarField::zero(HypPoint::origin());
        let (p, grid) = plancherel_check(&f, 0.1, 1.0, 0.25, 4).unwrap();
        assert_eq!(p.ratio, None);
        assert_eq!(hfourier_invert(&grid, &HypPoint::from_polar(0.5, 0.0), 0.1), 0.0);
    }

    #[test]
    fn poisson_transform_basics() {
        let lam = Complex64::new(1.7, 0.0);
        let one = |_: f64| Complex64::new(1.0, 0.0);
        for t in [0.0, 1.1] {
            let got = poisson_transform(one, lam, &HypPoint::from_polar(t, 0.6), 1024);
            assert!((got - crate::abel::spherical_function(lam, t)).norm() < 1e-12);
        }
        let e1 = |b: f64| Complex64::from_polar(1.0, b);
        assert!(poisson_transform(e1, lam, &HypPoint::origin(), 64).norm() < 1e-14);
    }

    #[test]
    fn tube_bounds() {
        assert!(SpectralParam::new(1.0, 0.6, 0.0).is_err());
        assert!(SpectralParam::new(1.0, -0.5, 0.0).is_ok());
    }
}
