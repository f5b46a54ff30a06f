//! Uniform t-grids, grid functions on them, and Fourier multipliers applied
//! through the FFT.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::config::QuadratureSpec;
use crate::error::{Error, Result};

/// Grid `t_k = -T + k·(2T/N)`, `k = 0..N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub half_width: f64,
    pub n: usize,
}

impl TGrid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0) || n < 16 || !n.is_power_of_two() {
            return Err(Error::Validation(format!(
                "t-grid needs T > 0 and N a power of two >= 16 (got T={half_width}, N={n})"
            )));
        }
        Ok(Self { half_width, n })
    }

    pub fn from_spec(spec: &QuadratureSpec) -> Result<Self> {
        Self::new(spec.grid_t, spec.grid_n)
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn t(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.dt()
    }

    pub fn ts(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.t(k)).collect()
    }

    /// Spacing of the dual λ-grid, `π/T`.
    pub fn dlambda(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    /// Signed frequency of DFT bin `m`; the Nyquist bin is taken positive.
    pub fn lambda(&self, m: usize) -> f64 {
        let signed = if m <= self.n / 2 {
            m as f64
        } else {
            m as f64 - self.n as f64
        };
        signed * self.dlambda()
    }

    /// Index of the sample at `-t_k`, if it lies on the grid.
    pub fn mirror(&self, k: usize) -> Option<usize> {
        if k == 0 {
            None
        } else {
            Some(self.n - k)
        }
    }
}

/// Samples of a function on a [`TGrid`], optionally flagged even.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenGridFunction {
    pub grid: TGrid,
    pub samples: Vec<f64>,
    pub even: bool,
}

const EDGE_BAND: usize = 4;
const WRAP_TOL: f64 = 1e-12;
const INTERP_POINTS: usize = 8;

impl EvenGridFunction {
    pub fn from_fn<F: FnMut(f64) -> f64>(grid: TGrid, mut f: F) -> Self {
        let samples = (0..grid.n).map(|k| f(grid.t(k))).collect();
        Self {
            grid,
            samples,
            even: false,
        }
    }

    /// Samples `f` on the grid and checks evenness.
    pub fn even_from_fn<F: FnMut(f64) -> f64>(grid: TGrid, f: F) -> Result<Self> {
        let g = Self::from_fn(grid, f);
        Self::even(grid, g.samples)
    }

    pub fn even(grid: TGrid, samples: Vec<f64>) -> Result<Self> {
        let g = Self {
            grid,
            samples,
            even: true,
        };
        let asym = g.asymmetry();
        if asym > 1e-10 * g.max_abs().max(f64::MIN_POSITIVE) {
            return Err(Error::Validation(format!(
                "grid function flagged even but |g(t) - g(-t)| reaches {asym:.3e}"
            )));
        }
        Ok(g)
    }

    pub fn general(grid: TGrid, samples: Vec<f64>) -> Self {
        Self {
            grid,
            samples,
            even: false,
        }
    }

    pub fn zero(grid: TGrid) -> Self {
        Self {
            grid,
            samples: vec![0.0; grid.n],
            even: true,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `max_k |g(t_k) - g(-t_k)|`.
    pub fn asymmetry(&self) -> f64 {
        (1..self.grid.n)
            .map(|k| (self.samples[k] - self.samples[self.grid.n - k]).abs())
            .fold(0.0, f64::max)
    }

    pub fn check_decay(&self) -> Result<()> {
        let max = self.max_abs();
        if max == 0.0 {
            return Ok(());
        }
        let n = self.grid.n;
        let edge = (0..EDGE_BAND)
            .chain(n - EDGE_BAND..n)
            .map(|k| self.samples[k].abs())
            .fold(0.0, f64::max);
        if edge <= WRAP_TOL * max {
            return Ok(());
        }
        let outermost = (0..n)
            .filter(|&k| self.samples[k].abs() > WRAP_TOL * max)
            .map(|k| self.grid.t(k).abs())
            .fold(0.0, f64::max);
        let mut required = self.grid.half_width;
        while required <= outermost * 1.25 {
            required *= 1.5;
        }
        Err(Error::Wraparound {
            edge_ratio: edge / max,
            required_half_width: required.ceil(),
        })
    }

    /// Eight-point Lagrange interpolation; zero outside the grid.
    pub fn eval(&self, t: f64) -> f64 {
        interpolate_uniform(&self.samples, -self.grid.half_width, self.grid.dt(), t)
    }

    /// `∫ g(t) e^{-iλt} dt` by the trapezoid rule on the grid.
    pub fn fourier_at(&self, lambda: f64) -> Complex64 {
        let dt = self.grid.dt();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &g) in self.samples.iter().enumerate() {
            if g != 0.0 {
                acc += g * Complex64::from_polar(1.0, -lambda * self.grid.t(k));
            }
        }
        acc * dt
    }

    /// Continuous-normalized transform on the DFT grid, bin order.
    pub fn fourier(&self) -> Vec<Complex64> {
        let n = self.grid.n;
        let mut buf: Vec<Complex64> = self.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let dt = self.grid.dt();
        let t0 = self.grid.half_width;
        for (m, v) in buf.iter_mut().enumerate() {
            *v *= dt * Complex64::from_polar(1.0, self.grid.lambda(m) * t0);
        }
        buf
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|v| c * v).collect(),
            even: self.even,
        }
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.grid.dt() * self.samples.iter().map(|v| v * v).sum::<f64>()
    }
}

/// Lagrange interpolation on the uniform grid `x0 + k·dx`; zero outside.
pub fn interpolate_uniform(samples: &[f64], x0: f64, dx: f64, x: f64) -> f64 {
    let n = samples.len();
    let pos = (x - x0) / dx;
    if !(pos >= -1e-9) || pos > (n - 1) as f64 + 1e-9 {
        return 0.0;
    }
    let nearest = pos.round();
    if (pos - nearest).abs() < 1e-12 {
        return samples[(nearest as usize).min(n - 1)];
    }
    let half = INTERP_POINTS as isize / 2;
    let mut start = pos.floor() as isize - half + 1;
    start = start.clamp(0, n as isize - INTERP_POINTS as isize);
    let start = start as usize;
    let mut acc = 0.0;
    for i in 0..INTERP_POINTS {
        let xi = (start + i) as f64;
        let mut w = 1.0;
        for j in 0..INTERP_POINTS {
            if j != i {
                let xj = (start + j) as f64;
                w *= (pos - xj) / (xi - xj);
            }
        }
        acc += w * samples[start + i];
    }
    acc
}

/// Samples of a spectral multiplier on the dual grid of a [`TGrid`], bin order.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplier {
    pub grid: TGrid,
    pub values: Arc<Vec<Complex64>>,
}

impl Multiplier {
    pub fn from_fn<F: FnMut(f64) -> Complex64>(grid: TGrid, mut m: F) -> Self {
        let values = (0..grid.n).map(|k| m(grid.lambda(k))).collect();
        Self {
            grid,
            values: Arc::new(values),
        }
    }

    pub fn real_from_fn<F: FnMut(f64) -> f64>(grid: TGrid, mut m: F) -> Self {
        Self::from_fn(grid, |l| Complex64::new(m(l), 0.0))
    }

    pub fn identity(grid: TGrid) -> Self {
        Self::real_from_fn(grid, |_| 1.0)
    }

    /// Largest violation of `m(-λ) = conj(m(λ))`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n;
        (1..n / 2)
            .map(|k| (self.values[n - k] - self.values[k].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_even(&self) -> bool {
        let n = self.grid.n;
        (1..n / 2).all(|k| (self.values[n - k] - self.values[k]).norm() <= 1e-14 * self.values[k].norm())
    }

    pub fn map<F: FnMut(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            grid: self.grid,
            values: Arc::new(self.values.iter().copied().map(f).collect()),
        }
    }
}

/// DFT, pointwise multiply, inverse DFT. The input must decay at the grid
/// ends and the multiplier must be Hermitian so the output is real.
pub fn apply_multiplier(g: &EvenGridFunction, m: &Multiplier) -> Result<EvenGridFunction> {
    if g.grid != m.grid {
        return Err(Error::Validation("multiplier and grid function use different grids".into()));
    }
    g.check_decay()?;
    let scale = m.values.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    if m.hermitian_defect() > 1e-12 * scale.max(1.0) {
        return Err(Error::Validation(
            "multiplier is not Hermitian; real output is not guaranteed".into(),
        ));
    }
    let out = apply_multiplier_complex(&g.samples, m);
    Ok(EvenGridFunction {
        grid: g.grid,
        samples: out.into_iter().map(|v| v.re).collect(),
        even: g.even && m.is_even(),
    })
}

/// Multiplier applied to raw samples without any checks.
pub fn apply_multiplier_complex(samples: &[f64], m: &Multiplier) -> Vec<Complex64> {
    let n = samples.len();
    let mut planner = FftPlanner::new();
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    for (v, w) in buf.iter_mut().zip(m.values.iter()) {
        *v *= w;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let inv = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= inv);
    buf
}

/// Euclidean convolution `(a * b)(t) = ∫ a(s) b(t - s) ds` on the grid.
pub fn convolve(a: &EvenGridFunction, b: &EvenGridFunction) -> Result<EvenGridFunction> {
    if a.grid != b.grid {
        return Err(Error::Validation("convolution of functions on different grids".into()));
    }
    a.check_decay()?;
    b.check_decay()?;
    let n = a.grid.n;
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let mut fa: Vec<Complex64> = a.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut fb: Vec<Complex64> = b.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    planner.plan_fft_inverse(n).process(&mut fa);
    let scale = a.grid.dt() / n as f64;
    let samples = (0..n).map(|k| fa[(k + n / 2) % n].re * scale).collect();
    Ok(EvenGridFunction {
        grid: a.grid,
        samples,
        even: a.even && b.even,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> TGrid {
        TGrid::new(24.0, 1024).unwrap()
    }

    fn gauss(grid: TGrid) -> EvenGridFunction {
        EvenGridFunction::even_from_fn(grid, |t| (-t * t).exp()).unwrap()
    }

    #[test]
    fn identity_multiplier() {
        let g = gauss(grid());
        let out = apply_multiplier(&g, &Multiplier::identity(grid())).unwrap();
        for (a, b) in out.samples.iter().zip(&g.samples) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(out.even);
    }

    #[test]
    fn parseval() {
        let g = gauss(grid());
        let n = g.grid.n as f64;
        let lhs: f64 = g.samples.iter().map(|v| v * v).sum();
        let mut buf: Vec<Complex64> = g.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(g.grid.n).process(&mut buf);
        let rhs: f64 = buf.iter().map(|v| v.norm_sqr()).sum::<f64>() / n;
        assert!((lhs - rhs).abs() < 1e-12 * lhs);
    }

    #[test]
    fn windowed_cosine_is_eigenfunction() {
        let gr = grid();
        let l0 = 40.0 * gr.dlambda();
        let g = EvenGridFunction::even_from_fn(gr, |t| (l0 * t).cos() * (-(t / 4.0).powi(2)).exp()).unwrap();
        // smooth multiplier, nearly constant across the window's bandwidth
        let m = Multiplier::real_from_fn(gr, |l| 1.0 + 0.5 * l * l / (1.0 + l * l));
        let out = apply_multiplier(&g, &m).unwrap();
        let ml0 = 1.0 + 0.5 * l0 * l0 / (1.0 + l0 * l0);
        for k in (0..gr.n).step_by(37) {
            let t = gr.t(k);
            if t.abs() < 3.0 {
                assert!((out.samples[k] - ml0 * g.samples[k]).abs() < 2e-3, "t={t}");
            }
        }
    }

    #[test]
    fn fourier_of_gaussian() {
        let g = gauss(grid());
        let f = g.fourier();
        for m in [0usize, 3, 10, 1020] {
            let l = g.grid.lambda(m);
            let want = std::f64::consts::PI.sqrt() * (-l * l / 4.0).exp();
            assert!((f[m] - Complex64::new(want, 0.0)).norm() < 1e-12, "m={m}");
            assert!((g.fourier_at(l) - f[m]).norm() < 1e-12);
        }
    }

    #[test]
    fn wraparound_detected() {
        let g = EvenGridFunction::even_from_fn(grid(), |t| (-(t / 10.0).powi(2)).exp()).unwrap();
        match apply_multiplier(&g, &Multiplier::identity(grid())) {
            Err(Error::Wraparound { required_half_width, .. }) => assert!(required_half_width > 24.0),
            other => panic!("expected wraparound, got {other:?}"),
        }
    }

    #[test]
    fn convolution_of_gaussians() {
        let gr = grid();
        let g = gauss(gr);
        let c = convolve(&g, &g).unwrap();
        let pi = std::f64::consts::PI;
        for k in (0..gr.n).step_by(53) {
            let t = gr.t(k);
            let want = (pi / 2.0).sqrt() * (-t * t / 2.0).exp();
            assert!((c.samples[k] - want).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn interpolation_is_accurate() {
        let g = gauss(grid());
        for t in [0.013, -0.77, 1.234, 2.5] {
            assert!((g.eval(t) - (-t * t).exp()).abs() < 1e-8, "t={t}");
        }
        assert_eq!(g.eval(100.0), 0.0);
    }

    #[test]
    fn odd_function_rejected_as_even() {
        assert!(EvenGridFunction::even_from_fn(grid(), |t| t * (-t * t).exp()).is_err());
    }
}
