use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quadrature and grid parameters shared by every transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    /// Points per Gauss–Legendre panel.
    pub gauss_order: usize,
    /// Minimum number of panels on a line integral.
    pub panel_count: usize,
    /// Hard cap on the half-length of line integrals.
    pub line_cutoff: f64,
    /// Lower end `ε` of the distance integrals.
    pub p_cutoff_low: f64,
    /// Upper end `P` of the distance integrals.
    pub p_cutoff_high: f64,
    /// Finite-difference step `h`.
    pub fd_step: f64,
    #[serde(rename = "grid_T")]
    pub grid_t: f64,
    #[serde(rename = "grid_N")]
    pub grid_n: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            gauss_order: 32,
            panel_count: 2,
            line_cutoff: 40.0,
            p_cutoff_low: 1e-3,
            p_cutoff_high: 30.0,
            fd_step: 1e-2,
            grid_t: 24.0,
            grid_n: 4096,
        }
    }
}

/// Distance cutoff for hyperbolic distance integrals.
pub const HYPERBOLIC_P_CUTOFF: f64 = 25.0;
/// Distance cutoff for the product-space X-ray inversion.
pub const PRODUCT_P_CUTOFF: f64 = 20.0;

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("line_cutoff", self.line_cutoff),
            ("p_cutoff_low", self.p_cutoff_low),
            ("p_cutoff_high", self.p_cutoff_high),
            ("fd_step", self.fd_step),
            ("grid_T", self.grid_t),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.gauss_order == 0 || self.panel_count == 0 {
            return Err(Error::Config("gauss_order and panel_count must be positive".into()));
        }
        if !self.grid_n.is_power_of_two() || self.grid_n < 16 {
            return Err(Error::Config(format!(
                "grid_N must be a power of two >= 16, got {}",
                self.grid_n
            )));
        }
        if self.p_cutoff_low >= self.p_cutoff_high {
            return Err(Error::Config("p_cutoff_low must be below p_cutoff_high".into()));
        }
        Ok(())
    }

    /// Copy with the upper distance cutoff capped at `cap`.
    pub fn with_p_cap(&self, cap: f64) -> Self {
        Self {
            p_cutoff_high: self.p_cutoff_high.min(cap),
            ..*self
        }
    }
}

/// Frozen calibration results shared by all runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    /// `c(2)` of the 2-plane inversion in ℝ³.
    pub c_d_3_2: f64,
    /// `C(2)` of the totally geodesic plane inversion in H³.
    #[serde(rename = "C_d_3_2")]
    pub big_c_d_3_2: f64,
    /// Plancherel normalization `κ`.
    pub kappa: f64,
    /// Exponent `μ` of the horocycle-space measure `e^{μt} dt dθ/2π`.
    pub horocycle_mu_exponent: f64,
    /// `κ₀` in `Ψ_n = e^{κ₀ t} ψ_n`.
    pub range_kappa0: f64,
    /// λ-scaling `μ` in `Ŝ_n(μλ)`.
    pub range_mu: f64,
}

impl Constants {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read constants {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_json_keys() {
        let json = serde_json::to_value(QuadratureSpec::default()).unwrap();
        let mut keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "fd_step",
                "gauss_order",
                "grid_N",
                "grid_T",
                "line_cutoff",
                "p_cutoff_high",
                "p_cutoff_low",
                "panel_count"
            ]
        );
    }

    #[test]
    fn unknown_key_rejected() {
        let r: std::result::Result<QuadratureSpec, _> = serde_json::from_str(r#"{"gauss_ordr": 3}"#);
        assert!(r.is_err());
    }

    #[test]
    fn partial_spec_uses_defaults() {
        let s: QuadratureSpec = serde_json::from_str(r#"{"grid_N": 2048}"#).unwrap();
        assert_eq!(s.grid_n, 2048);
        assert_eq!(s.gauss_order, 32);
        s.validate().unwrap();
    }

    #[test]
    fn constants_keys() {
        let c = Constants {
            c_d_3_2: 1.0,
            big_c_d_3_2: 2.0,
            kappa: 3.0,
            horocycle_mu_exponent: 1.0,
            range_kappa0: 0.5,
            range_mu: 2.0,
        };
        let json = serde_json::to_value(c).unwrap();
        let mut keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort();
        assert_eq!(
            keys,
            ["C_d_3_2", "c_d_3_2", "horocycle_mu_exponent", "kappa", "range_kappa0", "range_mu"]
        );
    }

    #[test]
    fn bad_grid_rejected() {
        let s = QuadratureSpec {
            grid_n: 1000,
            ..Default::default()
        };
        assert!(s.validate().is_err());
    }
}
