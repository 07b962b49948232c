//! Logarithmic negativity `E_N(ρ) = log₂ ‖ρ^{T_B}‖₁` and the distillation
//! ceiling it implies for PPT states assisted by singlets.

use serde::Serialize;

use crate::config::ToleranceConfig;
use crate::error::{contract, Error, Result};
use crate::linalg::{hermitian_eig_with, JacobiOptions};
use crate::tensor::{HermitianOperator, TensorSpace};
use crate::tiles::{rho_b, singlet};

/// Tolerance on `E_N` additivity and on the ceiling `E_N = L`.
pub const ADDITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativityReport {
    pub value_bits: f64,
    pub trace_norm: f64,
    pub min_pt_eigenvalue: f64,
    pub is_ppt: bool,
    pub space: TensorSpace,
}

fn jacobi(cfg: &ToleranceConfig) -> JacobiOptions {
    JacobiOptions {
        tol: cfg.eig_tol,
        max_sweeps: cfg.max_sweeps,
    }
}

/// Logarithmic negativity of a density operator.
pub fn log_negativity(op: &HermitianOperator, cfg: &ToleranceConfig) -> Result<NegativityReport> {
    let trace = op.trace();
    if (trace - 1.0).abs() > 1e-10 {
        return contract(format!("density operator has trace {trace}"));
    }
    let min_eig = hermitian_eig_with(op.matrix(), jacobi(cfg))?.min_eigenvalue();
    if min_eig < -cfg.psd_tol {
        return contract(format!("operator is not PSD, min eigenvalue {min_eig:e}"));
    }
    let pt = op.partial_transpose();
    let spectrum = hermitian_eig_with(pt.matrix(), jacobi(cfg))?;
    let trace_norm: f64 = spectrum.eigenvalues.iter().map(|l| l.abs()).sum();
    let min_pt_eigenvalue = spectrum.min_eigenvalue();
    Ok(NegativityReport {
        value_bits: trace_norm.log2(),
        trace_norm,
        min_pt_eigenvalue,
        is_ppt: min_pt_eigenvalue >= -cfg.psd_tol,
        space: op.space().clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditivityCheck {
    /// `E_N(op1 ⊗ op2)`.
    pub lhs: f64,
    /// `E_N(op1) + E_N(op2)`.
    pub rhs: f64,
    pub pass: bool,
}

pub fn additivity_check(
    op1: &HermitianOperator,
    op2: &HermitianOperator,
    cfg: &ToleranceConfig,
) -> Result<AdditivityCheck> {
    let joint = op1.kron_with_limit(op2, cfg.dim_limit)?.grouped()?;
    let lhs = log_negativity(&joint, cfg)?.value_bits;
    let rhs = log_negativity(op1, cfg)?.value_bits + log_negativity(op2, cfg)?.value_bits;
    Ok(AdditivityCheck {
        lhs,
        rhs,
        pass: (lhs - rhs).abs() <= ADDITIVITY_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CeilingCheck {
    pub copies: usize,
    pub singlets: usize,
    pub e_neg: f64,
    /// At most this many singlets are distillable.
    pub ceiling: f64,
    pub min_pt_eigenvalue: f64,
    pub pass: bool,
}

/// `ρ_b^{⊗N} ⊗ |Ψ⟩⟨Ψ|^{⊗L}` in grouped A|B layout.
pub fn assisted_state(copies: usize, singlets: usize, dim_limit: usize) -> Result<HermitianOperator> {
    let dim = 9u128
        .saturating_pow(copies as u32)
        .saturating_mul(4u128.saturating_pow(singlets as u32));
    if dim > dim_limit as u128 {
        return Err(Error::SizeLimit {
            dim: usize::try_from(dim).unwrap_or(usize::MAX),
            limit: dim_limit,
        });
    }
    let blocks = std::iter::repeat_with(rho_b)
        .take(copies)
        .chain(std::iter::repeat_with(singlet).take(singlets));
    let mut acc: Option<HermitianOperator> = None;
    for block in blocks {
        acc = Some(match acc {
            None => block,
            Some(a) => a.kron_with_limit(&block, dim_limit)?,
        });
    }
    match acc {
        Some(op) => op.grouped(),
        None => contract("need at least one copy or one singlet"),
    }
}

/// `E_N(ρ_b^{⊗N} ⊗ Ψ^{⊗L})` against the ceiling `L`.
pub fn theorem2_ceiling(copies: usize, singlets: usize, cfg: &ToleranceConfig) -> Result<CeilingCheck> {
    let state = assisted_state(copies, singlets, cfg.dim_limit)?;
    let report = log_negativity(&state, cfg)?;
    let ceiling = singlets as f64;
    Ok(CeilingCheck {
        copies,
        singlets,
        e_neg: report.value_bits,
        ceiling,
        min_pt_eigenvalue: report.min_pt_eigenvalue,
        pass: (report.value_bits - ceiling).abs() <= ADDITIVITY_TOL,
    })
}
