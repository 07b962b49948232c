//! Run-wide numerical configuration.
//!
//! Every tolerance, iteration budget and seed used by the pipelines lives in
//! [`ToleranceConfig`]. The CLI echoes the full config into each report, so a
//! report can be replayed exactly.

use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};

/// Default dimension budget: 3^8, i.e. four copies of a qutrit pair.
pub const DEFAULT_DIM_LIMIT: usize = 6561;

/// Relative Hermiticity tolerance `‖A − A†‖_F ≤ tol·‖A‖_F`.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Normalization tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Jacobi stop criterion, relative off-diagonal Frobenius mass.
    pub eig_tol: f64,
    /// Absolute slack for "minimum eigenvalue ≥ 0" checks.
    pub psd_tol: f64,
    /// Frobenius tolerance for certificate and identity residuals.
    pub cert_tol: f64,
    /// See-saw stop criterion on objective gain.
    pub seesaw_tol: f64,
    pub max_sweeps: usize,
    pub max_iter: usize,
    pub restarts_n1: usize,
    pub restarts_n2: usize,
    pub seed: u64,
    pub dim_limit: usize,
    /// Resolution of the grid cross-check for the single-copy overlap.
    pub grid_resolution: usize,
    /// Skip every two-copy induction check (729×729 eigenproblem).
    pub skip_n2: bool,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eig_tol: 1e-14,
            psd_tol: 1e-10,
            cert_tol: 1e-10,
            seesaw_tol: 1e-10,
            max_sweeps: 100,
            max_iter: 500,
            restarts_n1: 200,
            restarts_n2: 500,
            seed: 42,
            dim_limit: DEFAULT_DIM_LIMIT,
            grid_resolution: 16,
            skip_n2: false,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let tols = [
            ("eig_tol", self.eig_tol),
            ("psd_tol", self.psd_tol),
            ("cert_tol", self.cert_tol),
            ("seesaw_tol", self.seesaw_tol),
        ];
        for (name, value) in tols {
            if !(value > 0.0 && value <= 1e-3) {
                return contract(format!("{name} = {value} must lie in (0, 1e-3]"));
            }
        }
        if self.dim_limit < 81 {
            return contract(format!("dim_limit = {} must be at least 81", self.dim_limit));
        }
        if self.max_sweeps == 0 || self.max_iter == 0 {
            return contract("max_sweeps and max_iter must be positive");
        }
        if self.restarts_n1 == 0 || self.restarts_n2 == 0 {
            return contract("restart counts must be positive");
        }
        if self.grid_resolution < 8 {
            return contract(format!(
                "grid_resolution = {} must be at least 8",
                self.grid_resolution
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ToleranceConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range_values() {
        let mut cfg = ToleranceConfig::default();
        cfg.psd_tol = 0.1;
        assert!(cfg.validate().is_err());

        let mut cfg = ToleranceConfig::default();
        cfg.dim_limit = 80;
        assert!(cfg.validate().is_err());

        let mut cfg = ToleranceConfig::default();
        cfg.eig_tol = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg: ToleranceConfig = serde_json::from_str(r#"{"seed": 7, "skip_n2": true}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert!(cfg.skip_n2);
        assert_eq!(cfg.restarts_n1, 200);
        assert!(serde_json::from_str::<ToleranceConfig>(r#"{"sed": 7}"#).is_err());
    }
}
