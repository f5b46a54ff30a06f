//! The c-function oracle. Spherical functions of the hyperbolic plane are
//! evaluated at large distance through a smooth line-integral form of the
//! boundary average, and `c(λ)` is read off the asymptotic
//! `φ_λ(t) ≈ e^{-t/2}(c(λ)e^{iλt} + c(-λ)e^{-iλt})`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::numerics::gauss::gauss_legendre;
use crate::numerics::spectral::{Multiplier, TGrid};

const Y_MARGIN: f64 = 40.0;
const INNER_MARGIN: f64 = 3.0;
const ORDER: usize = 16;

fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `u(t) = e^{t/2} φ_λ(t)` and `u'(t)` for complex `λ`, `t ≥ 0`.
///
/// Uses `u(t) = (2/π) e^{iλt} ∫ (1+e^{2y})^{-s} (1+e^{2(y-t)})^{s-1} e^y dy`
/// with `s = 1/2 + iλ`, which is the boundary average after the
/// substitutions `u = tan(θ/2)`, `u = e^{y-t}`.
pub fn scaled_spherical(lambda: Complex64, t: f64) -> (Complex64, Complex64) {
    let s = Complex64::new(0.5, 0.0) + Complex64::i() * lambda;
    let freq = lambda.re.abs();
    let inner_lo = -INNER_MARGIN;
    let inner_hi = t + INNER_MARGIN;
    let inner_width = if freq > 8.0 { 8.0 / freq } else { 1.0 };
    let rule = gauss_legendre(ORDER);

    let mut integral = Complex64::new(0.0, 0.0);
    let mut derivative = Complex64::new(0.0, 0.0);
    let mut panel = |a: f64, b: f64| {
        for (y, w) in rule.mapped(a, b) {
            let l1 = softplus(2.0 * y);
            let l2 = softplus(2.0 * (y - t));
            let re = y - s.re * l1 + (s.re - 1.0) * l2;
            let im = s.im * (l2 - l1);
            let v = Complex64::from_polar(re.exp(), im);
            integral += w * v;
            derivative += w * v * (-2.0 * (s - 1.0) * sigmoid(2.0 * (y - t)));
        }
    };
    let outer = 4.0;
    let mut a = -Y_MARGIN;
    while a < inner_lo {
        let b = (a + outer).min(inner_lo);
        panel(a, b);
        a = b;
    }
    let n_inner = ((inner_hi - inner_lo) / inner_width).ceil() as usize;
    let w_inner = (inner_hi - inner_lo) / n_inner as f64;
    for k in 0..n_inner {
        let lo = inner_lo + k as f64 * w_inner;
        panel(lo, lo + w_inner);
    }
    let mut a = inner_hi;
    while a < t + Y_MARGIN {
        let b = (a + outer).min(t + Y_MARGIN);
        panel(a, b);
        a = b;
    }
    let phase = (Complex64::i() * lambda * t).exp() * (2.0 / std::f64::consts::PI);
    let u = phase * integral;
    let du = phase * (Complex64::i() * lambda * integral + derivative);
    (u, du)
}

/// `φ_λ(t)` through the line-integral form.
pub fn spherical_laplace(lambda: Complex64, t: f64) -> Complex64 {
    let t = t.abs();
    scaled_spherical(lambda, t).0 * (-0.5 * t).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CEstimate {
    pub c: Complex64,
    /// Disagreement between the fits at the two cutoffs, relative to `|c|`.
    pub spread: f64,
}

/// Asymptotic-matching oracle for `c(λ)` and `|c(λ)|^{-2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CFunctionOracle {
    pub cutoffs: [f64; 2],
}

impl Default for CFunctionOracle {
    fn default() -> Self {
        Self {
            cutoffs: [18.0, 20.0],
        }
    }
}

const SMALL_LAMBDA: f64 = 0.05;

impl CFunctionOracle {
    pub fn with_cutoffs(a: f64, b: f64) -> Self {
        Self { cutoffs: [a, b] }
    }

    /// `c(λ)` from the value and slope of `e^{t/2}φ_λ` at one cutoff.
    pub fn fit_at(&self, lambda: f64, t: f64) -> Complex64 {
        let l = Complex64::new(lambda, 0.0);
        let (u, du) = scaled_spherical(l, t);
        let u = u.re;
        let du = du.re;
        let c_phase = (Complex64::new(u, 0.0) + du / (Complex64::i() * lambda)) * 0.5;
        c_phase * Complex64::from_polar(1.0, -lambda * t)
    }

    /// Average of the fits at both cutoffs. Requires `|λ|` away from 0.
    pub fn c_value(&self, lambda: f64) -> CEstimate {
        let a = self.fit_at(lambda, self.cutoffs[0]);
        let b = self.fit_at(lambda, self.cutoffs[1]);
        let c = (a + b) * 0.5;
        CEstimate {
            c,
            spread: (a - b).norm() / c.norm(),
        }
    }

    fn density_direct(&self, lambda: f64) -> f64 {
        1.0 / self.c_value(lambda).c.norm_sqr()
    }

    /// `|c(λ)|^{-2}`; even, zero at `λ = 0`. Below `|λ| = 0.05` the value is
    /// extrapolated from `|c|^{-2}/λ²` at four larger `λ` (cubic in λ²).
    pub fn density(&self, lambda: f64) -> f64 {
        let l = lambda.abs();
        if l == 0.0 {
            return 0.0;
        }
        if l >= SMALL_LAMBDA {
            return self.memo(l);
        }
        let xs = [SMALL_LAMBDA, 1.5 * SMALL_LAMBDA, 2.0 * SMALL_LAMBDA, 2.5 * SMALL_LAMBDA];
        let ys: Vec<f64> = xs.iter().map(|&x| self.memo(x) / (x * x)).collect();
        let q: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let x = l * l;
        let mut acc = 0.0;
        for i in 0..xs.len() {
            let mut w = 1.0;
            for j in 0..xs.len() {
                if i != j {
                    w *= (x - q[j]) / (q[i] - q[j]);
                }
            }
            acc += w * ys[i];
        }
        acc * l * l
    }

    /// `|φ_λ(t) - fitted form| / |φ_λ(t)|`.
    pub fn fit_residual(&self, lambda: f64, t: f64) -> f64 {
        let c = self.c_value(lambda).c;
        let fitted = 2.0 * (c * Complex64::from_polar(1.0, lambda * t)).re * (-0.5 * t).exp();
        let actual = spherical_laplace(Complex64::new(lambda, 0.0), t).re;
        (actual - fitted).abs() / actual.abs()
    }

    fn memo(&self, l: f64) -> f64 {
        type Key = (u64, u64, u64);
        static CACHE: OnceLock<Mutex<HashMap<Key, f64>>> = OnceLock::new();
        let key = (l.to_bits(), self.cutoffs[0].to_bits(), self.cutoffs[1].to_bits());
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return *v;
        }
        let v = self.density_direct(l);
        cache.lock().unwrap_or_else(|e| e.into_inner()).insert(key, v);
        v
    }

    /// `|c|^{-2}` on the dual grid of `grid`, bin order; built once per grid.
    pub fn density_table(&self, grid: TGrid) -> Arc<Vec<f64>> {
        type Key = (u64, usize, u64, u64);
        static TABLES: OnceLock<Mutex<HashMap<Key, Arc<Vec<f64>>>>> = OnceLock::new();
        let key = (
            grid.half_width.to_bits(),
            grid.n,
            self.cutoffs[0].to_bits(),
            self.cutoffs[1].to_bits(),
        );
        let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = tables.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return t.clone();
        }
        let half: Vec<f64> = (0..=grid.n / 2)
            .into_par_iter()
            .map(|m| self.density(grid.lambda(m)))
            .collect();
        let table: Vec<f64> = (0..grid.n)
            .map(|m| if m <= grid.n / 2 { half[m] } else { half[grid.n - m] })
            .collect();
        let table = Arc::new(table);
        tables
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(key, table.clone());
        table
    }

    pub fn density_multiplier(&self, grid: TGrid) -> Multiplier {
        let table = self.density_table(grid);
        Multiplier {
            grid,
            values: Arc::new(table.iter().map(|&v| Complex64::new(v, 0.0)).collect()),
        }
    }
}

/// `|c(λ)|^{-2}` from the default oracle.
pub fn c_density(lambda: f64) -> f64 {
    CFunctionOracle::default().density(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // |c(λ)|^{-2} = πλ tanh(πλ) for the hyperbolic plane; test-only cross-check
    fn closed_form(l: f64) -> f64 {
        PI * l * (PI * l).tanh()
    }

    #[test]
    fn phi_at_zero_distance_is_one() {
        for l in [0.0, 0.7, 3.0] {
            let v = spherical_laplace(Complex64::new(l, 0.0), 0.0);
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12, "λ={l}: {v}");
        }
    }

    #[test]
    fn phi_minus_i_half_is_constant() {
        let v = spherical_laplace(Complex64::new(0.0, -0.5), 2.3);
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12, "{v}");
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let l = Complex64::new(1.3, 0.0);
        let t = 3.0;
        let h = 1e-4;
        let (_, du) = scaled_spherical(l, t);
        let fd = (scaled_spherical(l, t + h).0 - scaled_spherical(l, t - h).0) / (2.0 * h);
        assert!((du - fd).norm() < 1e-7 * du.norm().max(1.0));
    }

    #[test]
    fn density_matches_closed_form() {
        let o = CFunctionOracle::default();
        for l in [0.05, 0.3, 1.0, 2.0, 5.0, 17.0] {
            let d = o.density(l);
            assert!((d - closed_form(l)).abs() < 1e-7 * closed_form(l), "λ={l}: {d}");
        }
        for l in [0.001, 0.02, 0.049] {
            let d = o.density(l);
            assert!((d - closed_form(l)).abs() < 1e-5 * closed_form(l), "λ={l}: {d}");
        }
    }

    #[test]
    fn density_even_and_positive() {
        let o = CFunctionOracle::default();
        for l in [0.5, 1.0, 2.0, 5.0] {
            assert!(o.density(l) > 0.0);
            assert!((o.density(l) - o.density(-l)).abs() < 1e-8);
        }
        assert_eq!(o.density(0.0), 0.0);
    }

    #[test]
    fn fit_residual_small() {
        let r = CFunctionOracle::default().fit_residual(1.0, 19.0);
        assert!(r < 1e-6, "{r}");
    }
}
