//! Entanglement-cost lower bound from a product-overlap ceiling.
//!
//! If every product vector satisfies `⟨e,f|P^{⊗N}|e,f⟩ ≤ α^N`, every pure
//! state in the support of `ρ^{⊗N}` has squared Schmidt coefficients at most
//! `α^N`, hence entanglement entropy at least `−N log₂ α`, and the cost per
//! copy is at least `−log₂ α`. For a projector with a separable `𝟙 + P` and a
//! single-copy ceiling `α₁ < 1`, induction over copies gives
//! `α = β = (1 + α₁)/2`. The pipeline here estimates `α₁` numerically,
//! checks the separability certificate, and verifies the induction-step
//! operator inequality by direct diagonalization.

use serde::Serialize;

use crate::config::ToleranceConfig;
use crate::error::{contract, Error, Result};
use crate::linalg::{hermitian_eig_with, ComplexMatrix, JacobiOptions};
use crate::product_opt::{grid_oracle, seesaw_maximize, tensor_power_overlap, SeesawOptions};
use crate::tensor::{HermitianOperator, Party};
use crate::tiles::{complement_certificate, tiles_projector, SeparabilityCertificate};

/// Slack on the entropy inequality `H ≥ −log₂ α`.
pub const ENTROPY_SLACK: f64 = 1e-9;
/// Frobenius tolerance on the induction-step identity.
pub const INDUCTION_IDENTITY_TOL: f64 = 1e-9;
/// Agreement required between see-saw and grid oracle.
pub const GRID_AGREEMENT_TOL: f64 = 1e-3;
/// Spread allowed across the best decile of restarts.
pub const RESTART_STABILITY_TOL: f64 = 1e-7;
/// Slack below `α̂₁^N` for the multi-copy floor.
pub const MULTICOPY_FLOOR_SLACK: f64 = 1e-9;
/// Slack above `β^N` for the multi-copy ceiling.
pub const MULTICOPY_CEILING_SLACK: f64 = 1e-6;

pub const BOUND_LABEL: &str = "numerical lower-bound estimate";

/// Shannon entropy in bits; zero probabilities contribute nothing.
pub fn shannon_entropy_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Checks `max p ≤ α ⇒ H(p) ≥ −log₂ α` on one distribution of squared
/// Schmidt coefficients. Returns `true` when the premise fails.
pub fn entropy_floor_check(schmidt_sq: &[f64], alpha: f64) -> Result<bool> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return contract(format!("alpha = {alpha} must lie in (0, 1]"));
    }
    if schmidt_sq.is_empty() || schmidt_sq.iter().any(|&x| !(x >= 0.0)) {
        return contract("squared Schmidt coefficients must be nonnegative and non-empty");
    }
    let total: f64 = schmidt_sq.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return contract(format!("squared Schmidt coefficients sum to {total}, not 1"));
    }
    let largest = schmidt_sq.iter().copied().fold(0.0, f64::max);
    if largest > alpha {
        return Ok(true);
    }
    Ok(shannon_entropy_bits(schmidt_sq) >= -alpha.log2() - ENTROPY_SLACK)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostBound {
    pub alpha1_hat: f64,
    pub beta: f64,
    /// Ebits per copy.
    pub ec_lower_bound_bits: f64,
}

/// `β = (1 + α̂₁)/2` and the bound `−log₂ β`.
pub fn ec_lower_bound(alpha1_hat: f64) -> Result<CostBound> {
    if alpha1_hat.is_nan() || alpha1_hat >= 1.0 {
        return Err(Error::InvalidEstimate { alpha: alpha1_hat });
    }
    if alpha1_hat < 0.0 {
        return contract(format!("overlap estimate {alpha1_hat} is negative"));
    }
    let beta = (1.0 + alpha1_hat) / 2.0;
    Ok(CostBound {
        alpha1_hat,
        beta,
        ec_lower_bound_bits: -beta.log2(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InductionCheck {
    pub n: usize,
    pub beta: f64,
    /// Smallest eigenvalue of `RHS − LHS`.
    pub min_eig: f64,
    /// `‖(RHS − LHS) − β^{-N}(𝟙−P)⊗P^{⊗N}‖_F`.
    pub identity_residual: f64,
    pub pass: bool,
}

/// Induction step for `P = P_b`.
pub fn induction_inequality_check(n: usize, beta: f64, cfg: &ToleranceConfig) -> Result<InductionCheck> {
    induction_inequality_check_for(tiles_projector().matrix(), n, beta, cfg)
}

/// Builds `LHS = (𝟙+P)⊗[𝟙 − β^{-N}P^{⊗N}]` and
/// `RHS = 𝟙 + P⊗𝟙 − 2β^{-N}P^{⊗N+1}` on `N+1` copies and checks
/// `RHS − LHS ⪰ 0` together with the closed form of the difference.
pub fn induction_inequality_check_for(
    p: &ComplexMatrix,
    n: usize,
    beta: f64,
    cfg: &ToleranceConfig,
) -> Result<InductionCheck> {
    if !(1..=2).contains(&n) {
        return Err(Error::SizeLimit {
            dim: p.rows().saturating_pow(n as u32 + 1),
            limit: cfg.dim_limit,
        });
    }
    if !(beta > 0.0 && beta < 1.0) {
        return contract(format!("beta = {beta} must lie in (0, 1)"));
    }
    let d = p.rows();
    let full = d.checked_pow(n as u32 + 1).unwrap_or(usize::MAX);
    if full > cfg.dim_limit {
        return Err(Error::SizeLimit {
            dim: full,
            limit: cfg.dim_limit,
        });
    }
    let limit = cfg.dim_limit;
    let inv = beta.powi(-(n as i32));

    let mut p_n = p.clone();
    for _ in 1..n {
        p_n = p_n.kron_with_limit(p, limit)?;
    }
    let id_d = ComplexMatrix::identity(d);
    let id_rest = ComplexMatrix::identity(p_n.rows());

    let lhs = id_d
        .add(p)
        .kron_with_limit(&id_rest.sub(&p_n.scale(inv)), limit)?;
    let rhs = ComplexMatrix::identity(full)
        .add(&p.kron_with_limit(&id_rest, limit)?)
        .sub(&p.kron_with_limit(&p_n, limit)?.scale(2.0 * inv));
    let diff = rhs.sub(&lhs);
    let closed_form = id_d.sub(p).kron_with_limit(&p_n, limit)?.scale(inv);
    let identity_residual = diff.distance(&closed_form);

    let jacobi = JacobiOptions {
        tol: cfg.eig_tol,
        max_sweeps: cfg.max_sweeps,
    };
    let min_eig = hermitian_eig_with(&diff, jacobi)?.min_eigenvalue();
    Ok(InductionCheck {
        n,
        beta,
        min_eig,
        identity_residual,
        pass: min_eig >= -cfg.psd_tol && identity_residual <= INDUCTION_IDENTITY_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MulticopyCheck {
    pub n: usize,
    pub alpha_n_hat: f64,
    /// Feasible-point floor `α̂₁^N`.
    pub floor: f64,
    pub beta_n: f64,
    pub pass: bool,
}

impl MulticopyCheck {
    pub fn new(n: usize, alpha_n_hat: f64, alpha1_hat: f64, beta: f64) -> Self {
        let floor = alpha1_hat.powi(n as i32);
        let beta_n = beta.powi(n as i32);
        Self {
            n,
            alpha_n_hat,
            floor,
            beta_n,
            pass: alpha_n_hat >= floor - MULTICOPY_FLOOR_SLACK
                && alpha_n_hat <= beta_n + MULTICOPY_CEILING_SLACK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostBoundReport {
    pub label: String,
    pub alpha1_hat: f64,
    pub beta: f64,
    pub ec_lower_bound_bits: f64,
    pub alpha1_restarts: usize,
    pub alpha1_all_converged: bool,
    pub alpha1_top_decile_spread: f64,
    pub grid_oracle_value: Option<f64>,
    pub alpha1_ok: bool,
    pub certificate_residual: Option<f64>,
    pub certificate_ok: bool,
    pub induction_checks: Vec<InductionCheck>,
    pub induction_ok: bool,
    pub multicopy_checks: Vec<MulticopyCheck>,
    pub multicopy_ok: bool,
    /// Checks not run, with the reason.
    pub skipped: Vec<String>,
    pub diagnostics: Vec<String>,
}

impl CostBoundReport {
    pub fn all_ok(&self) -> bool {
        self.alpha1_ok && self.certificate_ok && self.induction_ok && self.multicopy_ok
    }
}

/// Full pipeline for `ρ_b` with its built-in certificate.
pub fn run_theorem1_pipeline(cfg: &ToleranceConfig) -> Result<CostBoundReport> {
    let cert = complement_certificate();
    let mut report = match &cert {
        Ok(c) => run_cost_bound_pipeline(&tiles_projector(), Some(c), cfg)?,
        Err(_) => run_cost_bound_pipeline(&tiles_projector(), None, cfg)?,
    };
    if let Err(e) = cert {
        report.diagnostics.push(format!("certificate construction failed: {e}"));
    }
    Ok(report)
}

/// Pipeline for an arbitrary projector `p` whose `𝟙 + p` separability is
/// witnessed by `certificate`.
pub fn run_cost_bound_pipeline(
    p: &HermitianOperator,
    certificate: Option<&SeparabilityCertificate>,
    cfg: &ToleranceConfig,
) -> Result<CostBoundReport> {
    cfg.validate()?;
    let mut diagnostics = Vec::new();
    let mut skipped = Vec::new();

    // Certificate for 𝟙 + P.
    let target = HermitianOperator::identity(p.space().clone()).add(p)?;
    let (certificate_residual, certificate_ok) = match certificate {
        Some(cert) if cert.target.space() == target.space() => {
            let target_gap = cert.target.matrix().distance(target.matrix());
            let residual = cert.residual();
            let weights_ok = cert.terms.iter().all(|t| t.weight >= 0.0);
            let ok = weights_ok && target_gap <= cfg.cert_tol && residual <= cfg.cert_tol;
            if !ok {
                diagnostics.push(format!(
                    "certificate rejected: residual {residual:e}, target mismatch {target_gap:e}, nonnegative weights {weights_ok}"
                ));
            }
            (Some(residual), ok)
        }
        Some(_) => {
            diagnostics.push("certificate acts on a different space".into());
            (None, false)
        }
        None => {
            diagnostics.push("no separability certificate supplied".into());
            (None, false)
        }
    };

    // Single-copy overlap ceiling.
    let opts = SeesawOptions::from_config(cfg, cfg.restarts_n1);
    let alpha1 = seesaw_maximize(p, &opts)?;
    let alpha1_hat = alpha1.best_value;
    if alpha1_hat >= 1.0 - cfg.psd_tol {
        return Err(Error::InvalidEstimate { alpha: alpha1_hat });
    }
    let bound = ec_lower_bound(alpha1_hat)?;
    let spread = alpha1.top_fraction_spread(0.1);
    let mut alpha1_ok = alpha1.all_converged() && spread <= RESTART_STABILITY_TOL;
    if !alpha1.all_converged() {
        let stalled = alpha1.converged.iter().filter(|c| !**c).count();
        diagnostics.push(format!("{stalled} see-saw restarts hit max_iter"));
    }
    if spread > RESTART_STABILITY_TOL {
        diagnostics.push(format!("top-decile restart spread {spread:e} exceeds {RESTART_STABILITY_TOL:e}"));
    }

    let qutrits = p.space().party_dim(Party::A) == 3 && p.space().party_dim(Party::B) == 3;
    let grid_oracle_value = if qutrits {
        let g = grid_oracle(p, cfg.grid_resolution, &opts)?;
        if (g - alpha1_hat).abs() > GRID_AGREEMENT_TOL {
            alpha1_ok = false;
            diagnostics.push(format!("grid oracle {g} disagrees with see-saw {alpha1_hat}"));
        }
        Some(g)
    } else {
        skipped.push("grid oracle: skipped: operator is not 3⊗3".into());
        None
    };

    // Induction step for N = 1, 2.
    let mut induction_checks = Vec::new();
    for n in 1..=2 {
        if n == 2 && cfg.skip_n2 {
            skipped.push("induction N=2: skipped: disabled".into());
            continue;
        }
        match induction_inequality_check_for(p.matrix(), n, bound.beta, cfg) {
            Ok(check) => {
                if !check.pass {
                    diagnostics.push(format!(
                        "induction N={n} failed: min eigenvalue {:e}, identity residual {:e}",
                        check.min_eig, check.identity_residual
                    ));
                }
                induction_checks.push(check);
            }
            Err(Error::SizeLimit { .. }) => skipped.push(format!("induction N={n}: skipped: size limit")),
            Err(e) => return Err(e),
        }
    }
    let induction_ok = !induction_checks.is_empty() && induction_checks.iter().all(|c| c.pass);

    // Multi-copy overlaps against [α̂₁^N, β^N].
    let mut multicopy_checks = vec![MulticopyCheck::new(1, alpha1_hat, alpha1_hat, bound.beta)];
    let opts2 = SeesawOptions::from_config(cfg, cfg.restarts_n2);
    match tensor_power_overlap(p, 2, &opts2, cfg.dim_limit) {
        Ok(out) => {
            let check = MulticopyCheck::new(2, out.best_value, alpha1_hat, bound.beta);
            if !check.pass {
                diagnostics.push(format!(
                    "two-copy overlap {} outside [{}, {}]",
                    check.alpha_n_hat, check.floor, check.beta_n
                ));
            }
            multicopy_checks.push(check);
        }
        Err(Error::SizeLimit { .. }) => skipped.push("multicopy N=2: skipped: size limit".into()),
        Err(e) => return Err(e),
    }
    let multicopy_ok = multicopy_checks.iter().all(|c| c.pass);

    Ok(CostBoundReport {
        label: BOUND_LABEL.into(),
        alpha1_hat,
        beta: bound.beta,
        ec_lower_bound_bits: bound.ec_lower_bound_bits,
        alpha1_restarts: alpha1.restarts,
        alpha1_all_converged: alpha1.all_converged(),
        alpha1_top_decile_spread: spread,
        grid_oracle_value,
        alpha1_ok,
        certificate_residual,
        certificate_ok,
        induction_checks,
        induction_ok,
        multicopy_checks,
        multicopy_ok,
        skipped,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexVector;
    use crate::tiles::qutrit_pair;

    #[test]
    fn entropy_floor_edge_cases() {
        assert!(entropy_floor_check(&[0.5, 0.5], 0.5).unwrap());
        assert!((shannon_entropy_bits(&[0.5, 0.5]) - 1.0).abs() < 1e-15);
        assert!(entropy_floor_check(&[1.0], 1.0).unwrap());
        // Premise false: vacuous pass.
        assert!(entropy_floor_check(&[0.9, 0.1], 0.5).unwrap());
        assert!(entropy_floor_check(&[0.7, 0.2], 0.9).is_err());
        assert!(entropy_floor_check(&[0.5, 0.5], 0.0).is_err());
        assert!(entropy_floor_check(&[1.5, -0.5], 1.0).is_err());
    }

    #[test]
    fn bound_arithmetic() {
        let b = ec_lower_bound(0.0).unwrap();
        assert_eq!(b.beta, 0.5);
        assert_eq!(b.ec_lower_bound_bits, 1.0);
        let b = ec_lower_bound(0.998).unwrap();
        assert!((b.ec_lower_bound_bits - (-(0.999f64).log2())).abs() < 1e-15);
        assert!((b.ec_lower_bound_bits - 1.4434e-3).abs() < 1e-6);
        assert!(matches!(ec_lower_bound(1.0), Err(Error::InvalidEstimate { .. })));
        assert!(matches!(ec_lower_bound(f64::NAN), Err(Error::InvalidEstimate { .. })));
        assert!(matches!(ec_lower_bound(-0.1), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn single_copy_induction_step() {
        let cfg = ToleranceConfig::default();
        let check = induction_inequality_check(1, 0.9, &cfg).unwrap();
        assert!(check.pass);
        assert!(check.min_eig >= -1e-10);
        assert!(check.identity_residual <= 1e-9);
    }

    #[test]
    fn induction_guards() {
        let cfg = ToleranceConfig::default();
        assert!(matches!(induction_inequality_check(3, 0.9, &cfg), Err(Error::SizeLimit { .. })));
        assert!(matches!(induction_inequality_check(0, 0.9, &cfg), Err(Error::SizeLimit { .. })));
        assert!(matches!(induction_inequality_check(1, 1.0, &cfg), Err(Error::ContractViolation(_))));
        let small = ToleranceConfig {
            dim_limit: 81,
            ..ToleranceConfig::default()
        };
        assert!(matches!(induction_inequality_check(2, 0.9, &small), Err(Error::SizeLimit { dim: 729, .. })));
    }

    #[test]
    fn separable_support_gives_invalid_estimate() {
        let p = HermitianOperator::pure_state(&ComplexVector::basis(9, 0), qutrit_pair()).unwrap();
        let cfg = ToleranceConfig {
            restarts_n1: 3,
            ..ToleranceConfig::default()
        };
        let err = run_cost_bound_pipeline(&p, None, &cfg).unwrap_err();
        assert!(matches!(err, Error::InvalidEstimate { .. }), "{err:?}");
    }
}
