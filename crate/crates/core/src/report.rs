//! Command drivers and the JSON run report.
//!
//! Every command returns a [`RunReport`] that echoes its configuration and
//! arguments, so re-running with the echoed values reproduces the `results`
//! payload exactly. Failures of individual scientific checks are recorded in
//! `checks`; they never abort the run.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::ToleranceConfig;
use crate::cost_bound::{
    induction_inequality_check, run_theorem1_pipeline, CostBoundReport, GRID_AGREEMENT_TOL,
    RESTART_STABILITY_TOL,
};
use crate::error::{contract, Error, Result};
use crate::linalg::ComplexMatrix;
use crate::negativity::{additivity_check, log_negativity, theorem2_ceiling};
use crate::product_opt::{grid_oracle, seesaw_maximize, SeesawOptions};
use crate::tiles::{
    complement_certificate, gram_matrix, p1_projector, p2_projector, p2_vectors, rho_b, singlet,
    tiles_projector, tiles_upb, CERTIFICATE_TOL,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Required gap `1 − α̂₁` for a non-trivial single-copy ceiling.
pub const ALPHA1_MARGIN: f64 = 1e-3;

/// `(N, L)` pairs checked by `reproduce`.
pub const CEILING_GRID: [(usize, usize); 4] = [(1, 0), (1, 1), (2, 1), (1, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Reproduce,
    Alpha1,
    CostBound,
    Negativity,
    Induction,
    Certificate,
    UpbVerify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Reproduce => "reproduce",
            Command::Alpha1 => "alpha1",
            Command::CostBound => "cost-bound",
            Command::Negativity => "negativity",
            Command::Induction => "induction",
            Command::Certificate => "certificate",
            Command::UpbVerify => "upb-verify",
        }
    }
}

/// Command-specific arguments; unused fields are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandArgs {
    pub copies: usize,
    pub singlets: usize,
    pub n: usize,
    /// Induction base; derived from a fresh α̂₁ run when absent.
    pub beta: Option<f64>,
}

impl Default for CommandArgs {
    fn default() -> Self {
        Self {
            copies: 1,
            singlets: 1,
            n: 1,
            beta: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub claim: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckRecord {
    fn new(claim: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            claim: claim.into(),
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            detail: detail.into(),
        }
    }

    fn skipped(claim: &str, detail: impl Into<String>) -> Self {
        Self {
            claim: claim.into(),
            status: CheckStatus::Skipped,
            detail: detail.into(),
        }
    }

    fn error(claim: &str, err: &Error) -> Self {
        Self::new(claim, false, format!("error: {err}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Command,
    pub version: String,
    pub config_echo: ToleranceConfig,
    pub args: CommandArgs,
    pub checks: Vec<CheckRecord>,
    pub results: Value,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    /// 0 when every check passed or was skipped, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    /// Re-run with the echoed config and arguments.
    pub fn replay(&self) -> Result<RunReport> {
        run_command(self.command, &self.args, &self.config_echo)
    }
}

/// Full reproduction: Tiles checks, certificate, cost bound, negativity ceilings.
pub fn cmd_reproduce(cfg: &ToleranceConfig) -> Result<RunReport> {
    run_command(Command::Reproduce, &CommandArgs::default(), cfg)
}

/// Runs one command. Errors only on invalid configuration or arguments;
/// failures inside a pipeline are recorded as failed checks.
pub fn run_command(command: Command, args: &CommandArgs, cfg: &ToleranceConfig) -> Result<RunReport> {
    cfg.validate()?;
    validate_args(command, args)?;
    let start = Instant::now();
    let mut checks = Vec::new();
    let results = match command {
        Command::Reproduce => {
            let upb = stage(&mut checks, "upb-verify", || upb_verify(cfg));
            let cert = stage(&mut checks, "certificate", || certificate_report(cfg));
            let cost = stage(&mut checks, "cost-bound", || cost_bound_stage(cfg));
            let neg = stage(&mut checks, "theorem2", || theorem2_stage(cfg, &CEILING_GRID));
            json!({ "upb": upb, "certificate": cert, "cost_bound": cost, "theorem2": neg })
        }
        Command::Alpha1 => stage(&mut checks, "alpha1", || alpha1_stage(cfg)),
        Command::CostBound => stage(&mut checks, "cost-bound", || cost_bound_stage(cfg)),
        Command::Negativity => stage(&mut checks, "negativity", || {
            negativity_stage(cfg, args.copies, args.singlets)
        }),
        Command::Induction => stage(&mut checks, "induction", || induction_stage(cfg, args)),
        Command::Certificate => stage(&mut checks, "certificate", || certificate_report(cfg)),
        Command::UpbVerify => stage(&mut checks, "upb-verify", || upb_verify(cfg)),
    };
    Ok(RunReport {
        command,
        version: VERSION.into(),
        config_echo: cfg.clone(),
        args: args.clone(),
        checks,
        results,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

fn validate_args(command: Command, args: &CommandArgs) -> Result<()> {
    match command {
        Command::Negativity if args.copies + args.singlets == 0 => {
            contract("negativity needs at least one copy or one singlet")
        }
        Command::Induction if !(1..=2).contains(&args.n) => {
            contract(format!("induction supports --n 1 or 2, got {}", args.n))
        }
        Command::Induction => match args.beta {
            Some(b) if !(b > 0.0 && b < 1.0) => contract(format!("--beta {b} must lie in (0, 1)")),
            _ => Ok(()),
        },
        _ => Ok(()),
    }
}

/// Runs a stage; an error becomes a failed check and a `null` payload.
fn stage(
    checks: &mut Vec<CheckRecord>,
    name: &str,
    f: impl FnOnce() -> Result<(Value, Vec<CheckRecord>)>,
) -> Value {
    match f() {
        Ok((value, mut records)) => {
            checks.append(&mut records);
            value
        }
        Err(e) => {
            checks.push(CheckRecord::error(name, &e));
            Value::Null
        }
    }
}

fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn upb_verify(cfg: &ToleranceConfig) -> Result<(Value, Vec<CheckRecord>)> {
    let upb = tiles_upb();
    let gram_error = max_abs_diff(&gram_matrix(&upb), &ComplexMatrix::identity(upb.len()));
    let p = tiles_projector();
    let m = p.matrix();
    let idempotence = m.matmul(m).distance(m);
    let trace = p.trace();
    let annihilation = upb
        .iter()
        .map(|v| m.mul_vec(&v.vector()).norm())
        .fold(0.0, f64::max);
    let rho = rho_b();
    let rho_pt_min = rho.partial_transpose().eig()?.min_eigenvalue();
    let rho_min = rho.eig()?.min_eigenvalue();

    let checks = vec![
        CheckRecord::new("tiles vectors orthonormal", gram_error <= 1e-12, format!("max |G − I| = {gram_error:e}")),
        CheckRecord::new("P_b idempotent", idempotence <= 1e-10, format!("‖P² − P‖_F = {idempotence:e}")),
        CheckRecord::new("trace P_b = 4", (trace - 4.0).abs() <= 1e-10, format!("trace = {trace}")),
        CheckRecord::new("P_b annihilates tiles", annihilation <= 1e-12, format!("max ‖P v‖ = {annihilation:e}")),
        CheckRecord::new("rho_b is a state", rho_min >= -cfg.psd_tol && (rho.trace() - 1.0).abs() <= 1e-12, format!("min eigenvalue {rho_min:e}")),
        CheckRecord::new("rho_b is PPT", rho_pt_min >= -cfg.psd_tol, format!("min eigenvalue of partial transpose {rho_pt_min:e}")),
    ];
    let value = json!({
        "gram_max_error": gram_error,
        "projector_idempotence_residual": idempotence,
        "projector_trace": trace,
        "annihilation_max": annihilation,
        "rho_b_min_eigenvalue": rho_min,
        "rho_b_pt_min_eigenvalue": rho_pt_min,
        "tiles": upb,
    });
    Ok((value, checks))
}

fn certificate_report(cfg: &ToleranceConfig) -> Result<(Value, Vec<CheckRecord>)> {
    let cert = complement_certificate()?;
    let residual = cert.residual();
    let p2 = p2_projector();
    let m2 = p2.matrix();
    let p2_idempotence = m2.matmul(m2).distance(m2);
    let p2_trace = p2.trace();
    let p2_gram = max_abs_diff(&gram_matrix(&p2_vectors()), &ComplexMatrix::identity(5));
    let split = p1_projector().add(&p2)?.matrix().distance(cert.target.matrix());
    let tol = cfg.cert_tol.min(CERTIFICATE_TOL);
    let checks = vec![
        CheckRecord::new(
            "1 + P_b is separable",
            residual <= tol && cert.terms.len() == 13,
            format!("{} product terms, residual {residual:e}", cert.terms.len()),
        ),
        CheckRecord::new(
            "P2 is a rank-5 projector",
            p2_idempotence <= 1e-10 && (p2_trace - 5.0).abs() <= 1e-10,
            format!("‖P2² − P2‖_F = {p2_idempotence:e}, trace = {p2_trace}"),
        ),
        CheckRecord::new("P2 vectors orthonormal", p2_gram <= 1e-12, format!("max |G − I| = {p2_gram:e}")),
        CheckRecord::new("P1 + P2 = 1 + P_b", split <= 1e-12, format!("residual {split:e}")),
    ];
    let value = json!({
        "residual": residual,
        "p2_idempotence_residual": p2_idempotence,
        "p2_trace": p2_trace,
        "p2_gram_max_error": p2_gram,
        "split_residual": split,
        "certificate": cert,
    });
    Ok((value, checks))
}

fn alpha1_stage(cfg: &ToleranceConfig) -> Result<(Value, Vec<CheckRecord>)> {
    let opts = SeesawOptions::from_config(cfg, cfg.restarts_n1);
    let p = tiles_projector();
    let out = seesaw_maximize(&p, &opts)?;
    let grid = grid_oracle(&p, cfg.grid_resolution, &opts)?;
    let spread = out.top_fraction_spread(0.1);
    let checks = vec![
        CheckRecord::new(
            "see-saw converged",
            out.all_converged(),
            format!("{} of {} restarts converged", out.converged.iter().filter(|c| **c).count(), out.restarts),
        ),
        CheckRecord::new("alpha1 stable across top decile", spread <= RESTART_STABILITY_TOL, format!("spread {spread:e}")),
        CheckRecord::new("alpha1 < 1", out.best_value <= 1.0 - ALPHA1_MARGIN, format!("alpha1_hat = {}", out.best_value)),
        CheckRecord::new(
            "grid oracle agrees",
            (grid - out.best_value).abs() <= GRID_AGREEMENT_TOL,
            format!("grid {grid}, see-saw {}", out.best_value),
        ),
    ];
    let value = json!({
        "alpha1_hat": out.best_value,
        "grid_oracle_value": grid,
        "top_decile_spread": spread,
        "seesaw": out,
    });
    Ok((value, checks))
}

fn cost_bound_checks(r: &CostBoundReport) -> Vec<CheckRecord> {
    let mut checks = vec![
        CheckRecord::new("alpha1 estimate", r.alpha1_ok && r.alpha1_hat <= 1.0 - ALPHA1_MARGIN, format!("alpha1_hat = {}", r.alpha1_hat)),
        CheckRecord::new("certificate", r.certificate_ok, format!("residual {:?}", r.certificate_residual)),
        CheckRecord::new(
            "entanglement cost bound positive",
            r.ec_lower_bound_bits > 0.0,
            format!("E_C >= {} ebits ({})", r.ec_lower_bound_bits, r.label),
        ),
    ];
    for c in &r.induction_checks {
        checks.push(CheckRecord::new(
            &format!("induction N={}", c.n),
            c.pass,
            format!("min eigenvalue {:e}, identity residual {:e}", c.min_eig, c.identity_residual),
        ));
    }
    if r.induction_checks.is_empty() {
        checks.push(CheckRecord::new("induction", false, "no induction check ran"));
    }
    for c in &r.multicopy_checks {
        checks.push(CheckRecord::new(
            &format!("multicopy N={}", c.n),
            c.pass,
            format!("{} in [{}, {}]", c.alpha_n_hat, c.floor, c.beta_n),
        ));
    }
    for s in &r.skipped {
        let (claim, reason) = s.split_once(": ").unwrap_or((s.as_str(), ""));
        checks.push(CheckRecord::skipped(claim, reason));
    }
    checks
}

fn cost_bound_stage(cfg: &ToleranceConfig) -> Result<(Value, Vec<CheckRecord>)> {
    let report = run_theorem1_pipeline(cfg)?;
    let checks = cost_bound_checks(&report);
    Ok((serde_json::to_value(&report)?, checks))
}

fn ceiling_entry(cfg: &ToleranceConfig, n: usize, l: usize, checks: &mut Vec<CheckRecord>) -> Result<Value> {
    let claim = format!("E_N(rho_b^{n} x singlet^{l}) = {l}");
    match theorem2_ceiling(n, l, cfg) {
        Ok(c) => {
            checks.push(CheckRecord::new(&claim, c.pass, format!("E_N = {}", c.e_neg)));
            Ok(serde_json::to_value(c)?)
        }
        Err(Error::SizeLimit { dim, limit }) => {
            checks.push(CheckRecord::skipped(&claim, format!("size limit ({dim} > {limit})")));
            Ok(json!({ "copies": n, "singlets": l, "skipped": "size limit" }))
        }
        Err(e) => {
            checks.push(CheckRecord::error(&claim, &e));
            Ok(Value::Null)
        }
    }
}

fn theorem2_stage(cfg: &ToleranceConfig, grid: &[(usize, usize)]) -> Result<(Value, Vec<CheckRecord>)> {
    let mut checks = Vec::new();
    let rb = log_negativity(&rho_b(), cfg)?;
    checks.push(CheckRecord::new(
        "E_N(rho_b) = 0",
        rb.is_ppt && rb.value_bits.abs() <= 1e-9,
        format!("E_N = {:e}", rb.value_bits),
    ));
    let s = log_negativity(&singlet(), cfg)?;
    checks.push(CheckRecord::new("E_N(singlet) = 1", (s.value_bits - 1.0).abs() <= 1e-9, format!("E_N = {}", s.value_bits)));
    let add = additivity_check(&rho_b(), &singlet(), cfg)?;
    checks.push(CheckRecord::new(
        "E_N additive on rho_b x singlet",
        add.pass,
        format!("{} vs {}", add.lhs, add.rhs),
    ));
    let mut ceilings = Vec::new();
    for &(n, l) in grid {
        ceilings.push(ceiling_entry(cfg, n, l, &mut checks)?);
    }
    let value = json!({
        "rho_b": rb,
        "singlet": s,
        "additivity": add,
        "ceilings": ceilings,
    });
    Ok((value, checks))
}

fn negativity_stage(cfg: &ToleranceConfig, copies: usize, singlets: usize) -> Result<(Value, Vec<CheckRecord>)> {
    let mut checks = Vec::new();
    let entry = ceiling_entry(cfg, copies, singlets, &mut checks)?;
    let value_bits = entry.get("e_neg").cloned().unwrap_or(Value::Null);
    Ok((json!({ "copies": copies, "singlets": singlets, "value_bits": value_bits, "ceiling": entry }), checks))
}

fn induction_stage(cfg: &ToleranceConfig, args: &CommandArgs) -> Result<(Value, Vec<CheckRecord>)> {
    let (beta, alpha1_hat) = match args.beta {
        Some(b) => (b, None),
        None => {
            let out = seesaw_maximize(&tiles_projector(), &SeesawOptions::from_config(cfg, cfg.restarts_n1))?;
            let bound = crate::cost_bound::ec_lower_bound(out.best_value)?;
            (bound.beta, Some(out.best_value))
        }
    };
    let claim = format!("induction N={}", args.n);
    match induction_inequality_check(args.n, beta, cfg) {
        Ok(c) => {
            let checks = vec![CheckRecord::new(
                &claim,
                c.pass,
                format!("min eigenvalue {:e}, identity residual {:e}", c.min_eig, c.identity_residual),
            )];
            Ok((json!({ "alpha1_hat": alpha1_hat, "check": c }), checks))
        }
        Err(Error::SizeLimit { dim, limit }) => Ok((
            json!({ "alpha1_hat": alpha1_hat, "beta": beta, "skipped": "size limit" }),
            vec![CheckRecord::skipped(&claim, format!("size limit ({dim} > {limit})"))],
        )),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fast() -> ToleranceConfig {
        ToleranceConfig {
            restarts_n1: 10,
            restarts_n2: 10,
            skip_n2: true,
            ..ToleranceConfig::default()
        }
    }

    #[test]
    fn invalid_args_are_rejected() {
        let cfg = fast();
        let bad_n = CommandArgs { n: 3, ..CommandArgs::default() };
        assert!(run_command(Command::Induction, &bad_n, &cfg).is_err());
        let bad_beta = CommandArgs { beta: Some(1.5), ..CommandArgs::default() };
        assert!(run_command(Command::Induction, &bad_beta, &cfg).is_err());
        let empty = CommandArgs { copies: 0, singlets: 0, ..CommandArgs::default() };
        assert!(run_command(Command::Negativity, &empty, &cfg).is_err());
        let bad_cfg = ToleranceConfig { dim_limit: 10, ..fast() };
        assert!(run_command(Command::UpbVerify, &CommandArgs::default(), &bad_cfg).is_err());
    }

    #[test]
    fn upb_and_certificate_commands_pass() {
        for cmd in [Command::UpbVerify, Command::Certificate] {
            let r = run_command(cmd, &CommandArgs::default(), &fast()).unwrap();
            assert!(r.all_passed(), "{:?}", r.checks);
            assert_eq!(r.exit_code(), 0);
        }
    }

    #[test]
    fn oversized_negativity_is_skipped() {
        let cfg = ToleranceConfig { dim_limit: 81, ..fast() };
        let args = CommandArgs { copies: 2, singlets: 1, ..CommandArgs::default() };
        let r = run_command(Command::Negativity, &args, &cfg).unwrap();
        assert_eq!(r.checks[0].status, CheckStatus::Skipped);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn report_json_round_trips_and_replays() {
        let r = run_command(Command::Negativity, &CommandArgs::default(), &fast()).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.results, r.results);
        assert_eq!(back.replay().unwrap().results, r.results);
        assert_eq!(r.results["value_bits"].as_f64().map(|v| (v - 1.0).abs() < 1e-9), Some(true));
    }
}
