//! Maximization of `⟨e,f|M|e,f⟩` over product states.
//!
//! The see-saw alternates two exact sub-problems: with `e` fixed the best `f`
//! is the leading eigenvector of `(⟨e|⊗𝟙)M(|e⟩⊗𝟙)`, and vice versa. Each
//! half-step can only raise the objective, so every restart produces a
//! feasible, monotone sequence. Many seeded restarts guard against local
//! maxima; the best restart wins, ties going to the lowest restart index.

mod grid;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{contract, Error, Result};
use crate::linalg::{hermitian_eig_with, ComplexMatrix, ComplexVector, JacobiOptions};
use crate::tensor::{HermitianOperator, Party};
use crate::tiles::{tiles_projector, ProductState};

pub use grid::{grid_oracle, grid_search, lambda_max_3x3, GridPoint};

/// Gap below which a leading eigenvalue counts as degenerate.
const DEGENERACY_GAP: f64 = 1e-10;
/// A contraction this small carries no direction information.
const ZERO_CONTRACTION: f64 = 1e-14;
const MAX_RESAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Independent ChaCha stream for one restart.
    pub fn stream(self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawOptions {
    pub restarts: usize,
    /// Stop a restart once one full iteration gains less than this.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: RngSeed,
    pub psd_tol: f64,
    pub jacobi: JacobiOptions,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        Self {
            restarts: 200,
            tol: 1e-10,
            max_iter: 500,
            seed: RngSeed(42),
            psd_tol: 1e-10,
            jacobi: JacobiOptions::default(),
        }
    }
}

impl SeesawOptions {
    pub fn from_config(cfg: &ToleranceConfig, restarts: usize) -> Self {
        Self {
            restarts,
            tol: cfg.seesaw_tol,
            max_iter: cfg.max_iter,
            seed: RngSeed(cfg.seed),
            psd_tol: cfg.psd_tol,
            jacobi: JacobiOptions {
                tol: cfg.eig_tol,
                max_sweeps: cfg.max_sweeps,
            },
        }
    }
}

/// History of one see-saw trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartTrace {
    /// Objective after initialization and after each full iteration.
    pub objective: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Updates where the leading eigenvalue was degenerate.
    pub degenerate_updates: usize,
    /// Fresh samples drawn because a contraction vanished.
    pub resamples: usize,
    pub final_value: f64,
    #[serde(skip)]
    pub final_state: Option<ProductState>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeesawOutcome {
    pub best_value: f64,
    pub best_state: ProductState,
    pub best_restart: usize,
    pub restarts: usize,
    pub iterations_per_restart: Vec<usize>,
    pub converged: Vec<bool>,
    pub restart_values: Vec<f64>,
    pub degenerate_updates: usize,
    #[serde(skip)]
    pub traces: Vec<RestartTrace>,
}

impl SeesawOutcome {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    /// Spread `max − min` over the best `ceil(fraction·restarts)` restart values.
    pub fn top_fraction_spread(&self, fraction: f64) -> f64 {
        let mut values = self.restart_values.clone();
        values.sort_by(|a, b| b.total_cmp(a));
        let k = ((fraction * values.len() as f64).ceil() as usize).clamp(1, values.len().max(1));
        match (values.first(), values.get(k - 1)) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => 0.0,
        }
    }
}

/// Independent complex-Gaussian entries on each side, then normalized.
pub fn sample_product_state<R: Rng + ?Sized>(dims: (usize, usize), rng: &mut R) -> ProductState {
    let a = sample_unit_vector(dims.0, rng);
    let b = sample_unit_vector(dims.1, rng);
    ProductState { a_local: a, b_local: b }
}

fn sample_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    loop {
        let entries: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let v = ComplexVector::new(entries).expect("gaussian samples are finite");
        if let Ok(unit) = v.normalized() {
            return unit;
        }
    }
}

/// Best product-state overlap with a PSD operator over seeded restarts.
///
/// The returned value is always achieved by `best_state`, so it is a lower
/// bound on the true supremum.
pub fn seesaw_maximize(m: &HermitianOperator, opts: &SeesawOptions) -> Result<SeesawOutcome> {
    let min_eig = hermitian_eig_with(m.matrix(), opts.jacobi)?.min_eigenvalue();
    if min_eig < -opts.psd_tol {
        return contract(format!("see-saw needs a PSD operator, min eigenvalue {min_eig:e}"));
    }
    seesaw_maximize_unchecked(&m.grouped()?, opts)
}

/// Skips the PSD check; `m` must already be grouped A|B.
fn seesaw_maximize_unchecked(m: &HermitianOperator, opts: &SeesawOptions) -> Result<SeesawOutcome> {
    if opts.restarts == 0 {
        return contract("see-saw needs at least one restart");
    }
    if !(opts.tol > 0.0) {
        return contract("see-saw tolerance must be positive");
    }
    let dims = (m.space().party_dim(Party::A), m.space().party_dim(Party::B));
    let traces = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = opts.seed.stream(r as u64);
            run_restart(m, dims, &mut rng, opts)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, t) in traces.iter().enumerate() {
        if t.final_value > traces[best].final_value {
            best = i;
        }
    }
    let best_state = traces[best]
        .final_state
        .clone()
        .ok_or_else(|| Error::Internal("restart finished without a state".into()))?;
    Ok(SeesawOutcome {
        best_value: traces[best].final_value,
        best_state,
        best_restart: best,
        restarts: opts.restarts,
        iterations_per_restart: traces.iter().map(|t| t.iterations).collect(),
        converged: traces.iter().map(|t| t.converged).collect(),
        restart_values: traces.iter().map(|t| t.final_value).collect(),
        degenerate_updates: traces.iter().map(|t| t.degenerate_updates).sum(),
        traces,
    })
}

fn run_restart<R: Rng + ?Sized>(
    m: &HermitianOperator,
    dims: (usize, usize),
    rng: &mut R,
    opts: &SeesawOptions,
) -> Result<RestartTrace> {
    let mut resamples = 0;
    loop {
        let start = sample_product_state(dims, rng);
        match climb(m, start, opts)? {
            Climb::Done(mut trace) => {
                trace.resamples = resamples;
                return Ok(trace);
            }
            Climb::Vanished(state) => {
                resamples += 1;
                if resamples >= MAX_RESAMPLES {
                    let value = state.expectation(m);
                    return Ok(RestartTrace {
                        objective: vec![value],
                        iterations: 0,
                        converged: false,
                        degenerate_updates: 0,
                        resamples,
                        final_value: value,
                        final_state: Some(state),
                    });
                }
            }
        }
    }
}

/// Deterministic see-saw from a given start (no restarts).
///
/// A start whose contraction vanishes is returned unchanged and flagged as
/// not converged.
pub fn seesaw_from(m: &HermitianOperator, start: ProductState, opts: &SeesawOptions) -> Result<RestartTrace> {
    let m = m.grouped()?;
    let dims = (m.space().party_dim(Party::A), m.space().party_dim(Party::B));
    if start.dims() != dims {
        return contract(format!("start state dims {:?} do not match operator {:?}", start.dims(), dims));
    }
    match climb(&m, start, opts)? {
        Climb::Done(trace) => Ok(trace),
        Climb::Vanished(state) => {
            let value = state.expectation(&m);
            Ok(RestartTrace {
                objective: vec![value],
                iterations: 0,
                converged: false,
                degenerate_updates: 0,
                resamples: 0,
                final_value: value,
                final_state: Some(state),
            })
        }
    }
}

enum Climb {
    Done(RestartTrace),
    Vanished(ProductState),
}

fn climb(m: &HermitianOperator, start: ProductState, opts: &SeesawOptions) -> Result<Climb> {
    let mut e = start.a_local;
    let mut f = start.b_local;
    let mut value = m.expectation(&e.kron(&f));
    let mut objective = vec![value];
    let mut degenerate_updates = 0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        let on_b = m.contract_party_a(&e)?;
        if on_b.frobenius_norm() <= ZERO_CONTRACTION {
            return Ok(Climb::Vanished(ProductState { a_local: e, b_local: f }));
        }
        let (_, new_f, degenerate) = leading_eigenvector(&on_b, opts.jacobi)?;
        degenerate_updates += degenerate as usize;
        f = new_f;

        let on_a = m.contract_party_b(&f)?;
        if on_a.frobenius_norm() <= ZERO_CONTRACTION {
            return Ok(Climb::Vanished(ProductState { a_local: e, b_local: f }));
        }
        let (new_value, new_e, degenerate) = leading_eigenvector(&on_a, opts.jacobi)?;
        degenerate_updates += degenerate as usize;
        e = new_e;

        iterations += 1;
        let gain = new_value - value;
        value = new_value;
        objective.push(value);
        if gain < opts.tol {
            converged = true;
            break;
        }
    }

    let state = ProductState { a_local: e, b_local: f };
    let final_value = state.expectation(m);
    Ok(Climb::Done(RestartTrace {
        objective,
        iterations,
        converged,
        degenerate_updates,
        resamples: 0,
        final_value,
        final_state: Some(state),
    }))
}

/// Largest eigenpair; the flag reports a degenerate top eigenvalue.
fn leading_eigenvector(m: &ComplexMatrix, jacobi: JacobiOptions) -> Result<(f64, ComplexVector, bool)> {
    let eig = hermitian_eig_with(m, jacobi)?;
    let degenerate = eig.eigenvalues.len() > 1 && eig.eigenvalues[0] - eig.eigenvalues[1] <= DEGENERACY_GAP;
    let vector = eig
        .eigenvectors
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("empty eigendecomposition".into()))?;
    // Jacobi output is unit norm to rounding; renormalize so contraction
    // preconditions hold at 1e-12.
    Ok((eig.eigenvalues[0], vector.normalized()?, degenerate))
}

/// Product-state overlap of `P_b^{⊗n}` across the grouped cut `A^n | B^n`.
///
/// `n` is limited to 1..=3 (at most 729 dimensions).
pub fn multicopy_overlap(n: usize, opts: &SeesawOptions, dim_limit: usize) -> Result<SeesawOutcome> {
    if !(1..=3).contains(&n) {
        return Err(Error::SizeLimit {
            dim: 3usize.saturating_pow(2 * n as u32),
            limit: 729.min(dim_limit),
        });
    }
    tensor_power_overlap(&tiles_projector(), n, opts, dim_limit)
}

/// Product-state overlap of `p^{⊗n}` across the grouped cut `A^n | B^n`.
///
/// Only `p` itself is checked for positivity; its tensor powers inherit it.
pub fn tensor_power_overlap(
    p: &HermitianOperator,
    n: usize,
    opts: &SeesawOptions,
    dim_limit: usize,
) -> Result<SeesawOutcome> {
    let dim = (p.dim() as u128).saturating_pow(n as u32);
    if n == 0 || dim > dim_limit as u128 {
        return Err(Error::SizeLimit {
            dim: usize::try_from(dim).unwrap_or(usize::MAX),
            limit: dim_limit,
        });
    }
    let min_eig = hermitian_eig_with(p.matrix(), opts.jacobi)?.min_eigenvalue();
    if min_eig < -opts.psd_tol {
        return contract(format!("tensor power base is not PSD, min eigenvalue {min_eig:e}"));
    }
    let power = p.tensor_power(n, dim_limit)?.grouped()?;
    seesaw_maximize_unchecked(&power, opts)
}
