//! Horocycle transform on the disk: forward and dual transforms, inversion
//! and Plancherel through the c-function multiplier, the range law relating
//! `t` and `-t`, and support checks.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::config::QuadratureSpec;
use crate::error::{Error, Result};
use crate::geometry::disk::{busemann, poisson_kernel, Horocycle, HypPoint};
use crate::geometry::field::ScalarField;
use crate::numerics::cfunc::CFunctionOracle;
use crate::numerics::gauss::composite_nodes;
use crate::numerics::quad::{integrate_line, LineSupport};
use crate::numerics::spectral::{apply_multiplier, EvenGridFunction, Multiplier, TGrid};

/// Half the curvature dimension of the disk, `ρ = 1/2`.
pub const RHO: f64 = 0.5;
/// Order of the Weyl group.
pub const W: f64 = 2.0;

/// Arc-length integral of `f` over `ξ`.
///
/// Along `ξ_{t,θ}` the natural scale is `u = e^{t/2}s`, in which the part of
/// the horocycle inside a ball has bounded length for every `t`.
pub fn horocycle_forward(f: &ScalarField<HypPoint>, xi: &Horocycle, spec: &QuadratureSpec) -> Result<f64> {
    let decay = f.decay()?;
    let Some((lo, hi)) = xi.ball_interval(&decay.center, decay.effective_radius()) else {
        return Ok(0.0);
    };
    let scale = (0.5 * xi.t).exp();
    let unbounded = QuadratureSpec {
        line_cutoff: f64::INFINITY,
        ..*spec
    };
    let v = integrate_line(
        |u| f.eval(&xi.point(u / scale)),
        Some(LineSupport::Interval {
            lo: lo * scale,
            hi: hi * scale,
        }),
        &unbounded,
    )?;
    Ok(v / scale)
}

/// Samples `ψ(ξ_{t_k, θ_j})` with `θ_j = 2πj/J`; row-major in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct HorocycleSinogram {
    pub grid: TGrid,
    pub thetas: usize,
    pub values: Vec<f64>,
}

impl HorocycleSinogram {
    pub fn new(grid: TGrid, thetas: usize, values: Vec<f64>) -> Result<Self> {
        if !thetas.is_power_of_two() {
            return Err(Error::Validation(format!("angle count {thetas} is not a power of two")));
        }
        if values.len() != grid.n * thetas {
            return Err(Error::Validation(format!(
                "{} samples for a {}×{thetas} sinogram",
                values.len(),
                grid.n
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("non-finite sinogram sample".into()));
        }
        Ok(Self { grid, thetas, values })
    }

    /// Forward transform of `f` on the grid.
    pub fn from_field(f: &ScalarField<HypPoint>, grid: TGrid, thetas: usize, spec: &QuadratureSpec) -> Result<Self> {
        let decay = f.decay()?;
        let reach = decay.center.distance_from_origin() + decay.effective_radius();
        let rows: Vec<Result<Vec<f64>>> = (0..grid.n)
            .into_par_iter()
            .map(|k| {
                let t = grid.t(k);
                if t.abs() > reach {
                    return Ok(vec![0.0; thetas]);
                }
                (0..thetas)
                    .map(|j| horocycle_forward(f, &Horocycle::new(t, theta(j, thetas)), spec))
                    .collect()
            })
            .collect();
        let mut values = Vec::with_capacity(grid.n * thetas);
        for r in rows {
            values.extend(r?);
        }
        Self::new(grid, thetas, values)
    }

    pub fn value(&self, k: usize, j: usize) -> f64 {
        self.values[k * self.thetas + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.grid.n).map(|k| self.value(k, j)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// CSV with header `t,theta,value`, row-major in `t`.
    pub fn write_csv<Wr: Write>(&self, mut out: Wr) -> Result<()> {
        writeln!(out, "t,theta,value")?;
        for k in 0..self.grid.n {
            for j in 0..self.thetas {
                writeln!(out, "{},{},{:e}", self.grid.t(k), theta(j, self.thetas), self.value(k, j))?;
            }
        }
        Ok(())
    }
}

fn theta(j: usize, thetas: usize) -> f64 {
    2.0 * PI * j as f64 / thetas as f64
}

/// `(1/2π) ∫ φ(ξ(z, θ)) P(z, e^{iθ}) dθ` with `ξ(z, θ)` the horocycle through
/// `z` tangent at `e^{iθ}`, by the trapezoid rule on `J` angles. The
/// callback receives `(t, θ)`.
pub fn horocycle_dual<F: Fn(f64, f64) -> f64>(phi: F, z: &HypPoint, j: usize) -> f64 {
    (0..j)
        .map(|k| {
            let th = theta(k, j);
            phi(busemann(z, th), th) * poisson_kernel(z, th)
        })
        .sum::<f64>()
        / j as f64
}

/// `∫ g dA` over a ball about `center`, in geodesic polar coordinates.
fn ball_integral<F: Fn(&HypPoint) -> f64 + Sync>(g: F, center: &HypPoint, radius: f64, angles: usize) -> f64 {
    let to_center = crate::geometry::disk::DiskIsometry::translation_to(center);
    let nodes = composite_nodes(16, (2.0 * radius).ceil().max(1.0) as usize, 0.0, radius);
    nodes
        .par_iter()
        .map(|&(r, w)| {
            let ring: f64 = (0..angles)
                .map(|k| g(&to_center.apply(&HypPoint::from_polar(r, theta(k, angles)))))
                .sum();
            w * r.sinh() * ring * 2.0 * PI / angles as f64
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

/// `∫_X |f|² dA`.
pub fn l2_norm_sq(f: &ScalarField<HypPoint>) -> Result<f64> {
    let d = f.decay()?;
    Ok(ball_integral(|z| f.eval(z).powi(2), &d.center, d.effective_radius(), 128))
}

/// Both sides of `∫_X f·φ̌ dA = ∫∫ f̂(t,θ)·φ(t,θ)·e^{a t} dt dθ/2π` for each
/// candidate exponent `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityTable {
    pub lhs: f64,
    pub rhs: Vec<(f64, f64)>,
}

impl DualityTable {
    pub fn relative_mismatch(&self, exponent: f64) -> Option<f64> {
        self.rhs
            .iter()
            .find(|(a, _)| *a == exponent)
            .map(|(_, r)| (r - self.lhs).abs() / self.lhs.abs().max(f64::MIN_POSITIVE))
    }

    /// Candidate exponent with the smallest mismatch.
    pub fn best(&self) -> (f64, f64) {
        self.rhs
            .iter()
            .map(|&(a, _)| (a, self.relative_mismatch(a).unwrap_or(f64::INFINITY)))
            .fold((f64::NAN, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b })
    }
}

/// Evaluates the duality identity for each candidate measure exponent.
pub fn duality_table<Phi>(
    f: &ScalarField<HypPoint>,
    phi: Phi,
    candidates: &[f64],
    spec: &QuadratureSpec,
) -> Result<DualityTable>
where
    Phi: Fn(f64, f64) -> f64 + Sync,
{
    let decay = f.decay()?;
    let radius = decay.effective_radius();
    let lhs = ball_integral(|z| f.eval(z) * horocycle_dual(&phi, z, 1024), &decay.center, radius, 128);
    let reach = decay.center.distance_from_origin() + radius;
    let angles = 128;
    let t_nodes = composite_nodes(16, (2.0 * reach).ceil() as usize, -reach, reach);
    let samples: Vec<Result<Vec<(f64, f64, f64)>>> = t_nodes
        .par_iter()
        .map(|&(t, w)| {
            (0..angles)
                .map(|k| {
                    let th = theta(k, angles);
                    let v = horocycle_forward(f, &Horocycle::new(t, th), spec)?;
                    Ok((t, w / angles as f64, v * phi(t, th)))
                })
                .collect()
        })
        .collect();
    let mut flat = Vec::new();
    for s in samples {
        flat.extend(s?);
    }
    let rhs = candidates
        .iter()
        .map(|&a| (a, flat.iter().map(|(t, w, v)| w * v * (a * t).exp()).sum()))
        .collect();
    Ok(DualityTable { lhs, rhs })
}

/// `2πκ·|c(λ)|^{-2}`, or its square root when `half` is set.
pub fn lambda_multiplier(grid: TGrid, kappa: f64, half: bool) -> Multiplier {
    let m = CFunctionOracle::default().density_multiplier(grid);
    m.map(|v| {
        let s = 2.0 * PI * kappa * v.re;
        Complex64::new(if half { s.max(0.0).sqrt() } else { s }, 0.0)
    })
}

/// `t ↦ e^{-ρt}·M[e^{ρt} g](t)` for a column `g` of a sinogram.
fn conjugated(column: &[f64], grid: TGrid, m: &Multiplier) -> Result<Vec<f64>> {
    let lifted = EvenGridFunction::general(
        grid,
        column.iter().enumerate().map(|(k, v)| v * (RHO * grid.t(k)).exp()).collect(),
    );
    let out = apply_multiplier(&lifted, m)?;
    Ok(out
        .samples
        .iter()
        .enumerate()
        .map(|(k, v)| v * (-RHO * grid.t(k)).exp())
        .collect())
}

/// The columns of `ΛΛ̄ψ`, ready for the dual transform.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaInverse {
    grid: TGrid,
    columns: Vec<Vec<f64>>,
}

impl LambdaInverse {
    pub fn new(psi: &HorocycleSinogram, kappa: f64) -> Result<Self> {
        let m = lambda_multiplier(psi.grid, kappa, false);
        let columns: Vec<Result<Vec<f64>>> = (0..psi.thetas)
            .into_par_iter()
            .map(|j| conjugated(&psi.column(j), psi.grid, &m))
            .collect();
        Ok(Self {
            grid: psi.grid,
            columns: columns.into_iter().collect::<Result<_>>()?,
        })
    }

    /// `f(z) = (1/w)(ΛΛ̄ψ)ˇ(z)`.
    pub fn eval(&self, z: &HypPoint) -> f64 {
        let j = self.columns.len();
        let g = &self.columns;
        let grid = self.grid;
        horocycle_dual(
            |t, th| {
                let k = ((th / (2.0 * PI)) * j as f64).round() as usize % j;
                crate::numerics::spectral::interpolate_uniform(&g[k], -grid.half_width, grid.dt(), t)
            },
            z,
            j,
        ) / W
    }
}

pub fn lambda_invert(psi: &HorocycleSinogram, z: &HypPoint, kappa: f64) -> Result<f64> {
    Ok(LambdaInverse::new(psi, kappa)?.eval(z))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlancherelTriple {
    /// `w·‖f‖²_X`
    pub lhs: f64,
    /// `‖Λf̂‖²_Ξ`
    pub rhs: f64,
    /// `lhs / rhs`; `None` when both vanish.
    pub ratio: Option<f64>,
}

/// `‖Λψ‖²` with `dξ = e^{a t} dt dθ/2π`.
pub fn lambda_norm_sq(psi: &HorocycleSinogram, kappa: f64, exponent: f64) -> Result<f64> {
    let m = lambda_multiplier(psi.grid, kappa, true);
    let grid = psi.grid;
    let per_column: Vec<Result<f64>> = (0..psi.thetas)
        .into_par_iter()
        .map(|j| {
            let col = conjugated(&psi.column(j), grid, &m)?;
            Ok(grid.dt()
                * col
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * v * (exponent * grid.t(k)).exp())
                    .sum::<f64>())
        })
        .collect();
    let mut acc = 0.0;
    for c in per_column {
        acc += c?;
    }
    Ok(acc / psi.thetas as f64)
}

pub fn plancherel_horocycle(
    f: &ScalarField<HypPoint>,
    psi: &HorocycleSinogram,
    kappa: f64,
    exponent: f64,
) -> Result<PlancherelTriple> {
    let lhs = W * l2_norm_sq(f)?;
    let rhs = lambda_norm_sq(psi, kappa, exponent)?;
    let ratio = (rhs != 0.0).then(|| lhs / rhs);
    Ok(PlancherelTriple { lhs, rhs, ratio })
}

/// Angular Fourier coefficients `ψ_n(t_k)`, stored by FFT bin.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeCoefficients {
    pub grid: TGrid,
    bins: Vec<Vec<Complex64>>,
}

impl RangeCoefficients {
    pub fn thetas(&self) -> usize {
        self.bins.len()
    }

    pub fn n_max(&self) -> i64 {
        self.bins.len() as i64 / 2 - 1
    }

    pub fn coefficient(&self, n: i64) -> &[Complex64] {
        let j = self.bins.len() as i64;
        &self.bins[n.rem_euclid(j) as usize]
    }

    pub fn coefficient_mut(&mut self, n: i64) -> &mut Vec<Complex64> {
        let j = self.bins.len() as i64;
        &mut self.bins[n.rem_euclid(j) as usize]
    }

    /// `max |Σ_n ψ_n(t) e^{inθ} - ψ(t, θ)|`.
    pub fn reconstruction_residual(&self, psi: &HorocycleSinogram) -> f64 {
        let j = self.thetas();
        let inverse = FftPlanner::new().plan_fft_inverse(j);
        let mut worst = 0.0f64;
        let mut buf = vec![Complex64::new(0.0, 0.0); j];
        for k in 0..self.grid.n {
            for (b, v) in buf.iter_mut().enumerate() {
                *v = self.bins[b][k];
            }
            inverse.process(&mut buf);
            for (jj, v) in buf.iter().enumerate() {
                worst = worst.max((v - psi.value(k, jj)).norm());
            }
        }
        worst
    }
}

/// DFT in `θ` of every `t`-row, normalized so `ψ = Σ_n ψ_n e^{inθ}`.
pub fn range_coefficients(psi: &HorocycleSinogram) -> RangeCoefficients {
    let j = psi.thetas;
    let fft = FftPlanner::new().plan_fft_forward(j);
    let mut bins = vec![vec![Complex64::new(0.0, 0.0); psi.grid.n]; j];
    let mut buf = vec![Complex64::new(0.0, 0.0); j];
    for k in 0..psi.grid.n {
        for (jj, v) in buf.iter_mut().enumerate() {
            *v = Complex64::new(psi.value(k, jj), 0.0);
        }
        fft.process(&mut buf);
        for (b, v) in buf.iter().enumerate() {
            bins[b][k] = v / j as f64;
        }
    }
    RangeCoefficients { grid: psi.grid, bins }
}

/// `Ŝ_n(λ) = Π_{k=1}^{|n|} (iλ + 2k - 1)/(iλ - 2k + 1)`.
pub fn s_hat(n: i64, lambda: f64) -> Complex64 {
    let il = Complex64::new(0.0, lambda);
    (1..=n.unsigned_abs())
        .map(|k| {
            let c = (2 * k - 1) as f64;
            (il + c) / (il - c)
        })
        .product()
}

/// `∫ g(t) e^{-iλt} dt` on the DFT grid for complex samples, bin order.
fn complex_fourier(grid: TGrid, samples: &[Complex64]) -> Vec<Complex64> {
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(grid.n).process(&mut buf);
    let dt = grid.dt();
    for (m, v) in buf.iter_mut().enumerate() {
        *v *= dt * Complex64::from_polar(1.0, grid.lambda(m) * grid.half_width);
    }
    buf
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeCheck {
    /// `sup |FT(Ψ'_n) - (-1)^n Ŝ_n(μλ)·FT(Ψ_n)|` over the band, relative to
    /// `max |FT(Ψ_n)|`.
    pub residual: f64,
    pub band_bins: usize,
    pub inconclusive: bool,
}

/// Tests `Ψ'_n = S_n * Ψ_n` with `Ψ_n = e^{κ₀t}ψ_n`, `Ψ'_n(t) = Ψ_n(-t)`, in
/// the frequency domain with `λ` rescaled by `μ`.
///
/// The factor `(-1)^n` makes both sides agree at `λ = 0`, where
/// `FT(Ψ'_n) = FT(Ψ_n)` while `Ŝ_n(0) = (-1)^n`.
pub fn range_multiplier_check(coeffs: &RangeCoefficients, n: i64, kappa0: f64, mu: f64) -> RangeCheck {
    let grid = coeffs.grid;
    let psi = coeffs.coefficient(n);
    let lifted: Vec<Complex64> = psi
        .iter()
        .enumerate()
        .map(|(k, v)| v * (kappa0 * grid.t(k)).exp())
        .collect();
    let reflected: Vec<Complex64> = (0..grid.n)
        .map(|k| grid.mirror(k).map_or(Complex64::new(0.0, 0.0), |m| lifted[m]))
        .collect();
    let a = complex_fourier(grid, &lifted);
    let b = complex_fourier(grid, &reflected);
    let max = a.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut band = 0;
    let mut worst = 0.0f64;
    for m in 0..grid.n {
        if m == grid.n / 2 || a[m].norm() < 1e-8 * max {
            continue;
        }
        band += 1;
        let l = grid.lambda(m);
        worst = worst.max((b[m] - sign * s_hat(n, mu * l) * a[m]).norm());
    }
    RangeCheck {
        residual: if max > 0.0 { worst / max } else { 0.0 },
        band_bins: band,
        inconclusive: band == 0,
    }
}

/// Outcome of testing the candidate normalizations `(κ₀, μ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeResolution {
    /// `(κ₀, μ, evenness defect of e^{κ₀t}ψ_0, n = 1 residual)`.
    pub table: Vec<(f64, f64, f64, f64)>,
    pub accepted: Option<(f64, f64)>,
}

pub const RANGE_CANDIDATES_KAPPA0: [f64; 2] = [0.5, 1.0];
pub const RANGE_CANDIDATES_MU: [f64; 2] = [1.0, 2.0];

pub fn resolve_range_normalization(coeffs: &RangeCoefficients, tolerance: f64) -> RangeResolution {
    let grid = coeffs.grid;
    let psi0 = coeffs.coefficient(0);
    let mut table = Vec::new();
    for &k0 in &RANGE_CANDIDATES_KAPPA0 {
        let lifted: Vec<f64> = psi0.iter().enumerate().map(|(k, v)| v.re * (k0 * grid.t(k)).exp()).collect();
        let g = EvenGridFunction::general(grid, lifted);
        let defect = g.asymmetry() / g.max_abs().max(f64::MIN_POSITIVE);
        for &mu in &RANGE_CANDIDATES_MU {
            let r = range_multiplier_check(coeffs, 1, k0, mu);
            table.push((k0, mu, defect, r.residual));
        }
    }
    let accepted = table
        .iter()
        .filter(|(_, _, d, r)| *d <= tolerance && *r <= tolerance)
        .min_by(|a, b| a.3.total_cmp(&b.3))
        .map(|&(k, m, _, _)| (k, m));
    RangeResolution { table, accepted }
}

/// Adds a random even Gaussian bump of relative height 5–15% to `ψ_n`.
pub fn perturb_even(coeffs: &RangeCoefficients, n: i64, seed: u64) -> RangeCoefficients {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = coeffs.grid;
    let scale = coeffs.coefficient(n).iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let height = scale * rng.gen_range(0.05..0.15);
    let width: f64 = rng.gen_range(0.5..1.0);
    let mut out = coeffs.clone();
    for (k, v) in out.coefficient_mut(n).iter_mut().enumerate() {
        let t = grid.t(k);
        *v += height * (-(t / width).powi(2)).exp();
    }
    out
}

/// Sup norms behind the support theorem and its rank-one refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport {
    /// `sup |f̂(ξ_{t,θ})|` over `t > R + δ` (horocycles external to `B_R`).
    pub external_sup: f64,
    /// `sup |f̂(ξ_{t,θ})|` over `t < -(R + δ)` (horocycles enclosing `B_R`).
    pub enclosing_sup: f64,
    /// `sup |f|` outside `B_{R+δ}`, from the reconstruction.
    pub outside_sup: f64,
    /// The three equivalent conditions, each against the tolerance.
    pub conditions: [bool; 3],
    /// Vanishing on the external side comes with vanishing on the
    /// enclosing side.
    pub one_sided_pattern: bool,
}

impl SupportReport {
    pub fn consistent(&self) -> bool {
        self.conditions.iter().all(|&c| c == self.conditions[0]) && self.one_sided_pattern
    }
}

pub fn support_scan(
    psi: &HorocycleSinogram,
    r: f64,
    delta: f64,
    kappa: f64,
    probes: &[HypPoint],
    transform_tol: f64,
    reconstruction_tol: f64,
) -> Result<SupportReport> {
    let grid = psi.grid;
    let mut external = 0.0f64;
    let mut enclosing = 0.0f64;
    for k in 0..grid.n {
        let t = grid.t(k);
        let row = (0..psi.thetas).map(|j| psi.value(k, j).abs()).fold(0.0, f64::max);
        if t > r + delta {
            external = external.max(row);
        } else if t < -(r + delta) {
            enclosing = enclosing.max(row);
        }
    }
    let inverse = LambdaInverse::new(psi, kappa)?;
    let outside = probes
        .iter()
        .filter(|z| z.distance_from_origin() > r + delta)
        .map(|z| inverse.eval(z).abs())
        .fold(0.0, f64::max);
    let conditions = [
        external <= transform_tol,
        enclosing <= transform_tol,
        outside <= reconstruction_tol,
    ];
    Ok(SupportReport {
        external_sup: external,
        enclosing_sup: enclosing,
        outside_sup: outside,
        conditions,
        one_sided_pattern: !conditions[0] || conditions[1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::phantom::PhantomSpec;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn radial_transform_ignores_angle() {
        let f = PhantomSpec::gaussian(1.0, 1.0).disk().unwrap();
        for t in [-1.5, 0.0, 0.7] {
            let a = horocycle_forward(&f, &Horocycle::new(t, 0.0), &spec()).unwrap();
            let b = horocycle_forward(&f, &Horocycle::new(t, 2.3), &spec()).unwrap();
            assert!((a - b).abs() < 1e-12 * a.abs());
        }
    }

    #[test]
    fn compact_support_in_t() {
        let f = PhantomSpec::bump(1.0, 1.0).disk().unwrap();
        for t in [1.01, -1.01, 3.0] {
            assert_eq!(horocycle_forward(&f, &Horocycle::new(t, 0.4), &spec()).unwrap(), 0.0);
        }
        assert!(horocycle_forward(&f, &Horocycle::new(0.5, 0.4), &spec()).unwrap() > 0.0);
    }

    #[test]
    fn gaussian_matches_distance_formula() {
        // cosh d = cosh t + u²/2 along ξ_{t,θ} with u = e^{t/2}s
        let f = PhantomSpec::gaussian(1.0, 1.0).disk().unwrap();
        for t in [-3.0f64, -0.4, 0.0, 1.2] {
            let want = (-0.5 * t).exp()
                * crate::numerics::gauss::composite(32, 40, -30.0, 30.0, |u: f64| {
                    let d = (t.cosh() + 0.5 * u * u).acosh();
                    (-d * d).exp()
                });
            let got = horocycle_forward(&f, &Horocycle::new(t, 1.0), &spec()).unwrap();
            assert!((got - want).abs() < 1e-12, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn dual_of_constant_and_at_origin() {
        let z = HypPoint::from_polar(1.3, 0.6);
        assert!((horocycle_dual(|_, _| 2.0, &z, 256) - 2.0).abs() < 1e-12);
        let o = HypPoint::origin();
        let v = horocycle_dual(|t, th| t + th.cos(), &o, 64);
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn s_hat_unit_modulus() {
        for n in 1..=3 {
            for l in [-7.0, -0.3, 0.0, 0.9, 40.0] {
                assert!((s_hat(n, l).norm() - 1.0).abs() < 1e-12);
            }
        }
        assert!((s_hat(1, 0.0) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn sinogram_shape_checked() {
        let g = TGrid::new(4.0, 64).unwrap();
        assert!(HorocycleSinogram::new(g, 6, vec![0.0; 64 * 6]).is_err());
        assert!(HorocycleSinogram::new(g, 8, vec![0.0; 10]).is_err());
        let s = HorocycleSinogram::new(g, 8, vec![0.0; 64 * 8]).unwrap();
        let mut out = Vec::new();
        s.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("t,theta,value\n"));
        assert_eq!(text.lines().count(), 1 + 64 * 8);
    }
}
