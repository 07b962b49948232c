use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use boundent::report::{run_command, Command, CommandArgs};
use boundent::{Error, ToleranceConfig};

#[derive(Parser)]
#[command(name = "boundent", version, about = "Entanglement cost and distillability checks for the Tiles bound entangled state")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Run every check in order and aggregate the results.
    Reproduce,
    /// Estimate the single-copy product overlap of P_b.
    Alpha1,
    /// Full entanglement-cost lower-bound pipeline.
    CostBound,
    /// Logarithmic negativity of rho_b^N x singlet^L.
    Negativity,
    /// Induction-step operator inequality for N copies.
    Induction,
    /// Separability certificate for 1 + P_b.
    Certificate,
    /// Tiles basis, projector and PPT checks.
    UpbVerify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Reproduce => Command::Reproduce,
            Cmd::Alpha1 => Command::Alpha1,
            Cmd::CostBound => Command::CostBound,
            Cmd::Negativity => Command::Negativity,
            Cmd::Induction => Command::Induction,
            Cmd::Certificate => Command::Certificate,
            Cmd::UpbVerify => Command::UpbVerify,
        }
    }
}

#[derive(Args)]
struct Flags {
    /// RNG seed for the see-saw restarts.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Single-copy see-saw restarts.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// See-saw stop tolerance on objective gain.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Copies of rho_b (negativity).
    #[arg(long, global = true)]
    copies: Option<usize>,
    /// Singlets appended (negativity).
    #[arg(long, global = true)]
    singlets: Option<usize>,
    /// Copies in the induction hypothesis (1 or 2).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Induction base; defaults to (1 + alpha1_hat)/2.
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Largest operator dimension to build.
    #[arg(long, global = true)]
    dim_limit: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON config file; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Skip the 729-dimensional two-copy induction check.
    #[arg(long, global = true)]
    skip_n2: bool,
}

fn load_config(flags: &Flags) -> Result<ToleranceConfig, String> {
    let mut cfg = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))?
        }
        None => ToleranceConfig::default(),
    };
    if let Some(seed) = flags.seed {
        cfg.seed = seed;
    }
    if let Some(r) = flags.restarts {
        cfg.restarts_n1 = r;
    }
    if let Some(tol) = flags.tol {
        cfg.seesaw_tol = tol;
    }
    if let Some(limit) = flags.dim_limit {
        cfg.dim_limit = limit;
    }
    if flags.skip_n2 {
        cfg.skip_n2 = true;
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli.flags) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("boundent: {msg}");
            return ExitCode::from(2);
        }
    };
    let defaults = CommandArgs::default();
    let args = CommandArgs {
        copies: cli.flags.copies.unwrap_or(defaults.copies),
        singlets: cli.flags.singlets.unwrap_or(defaults.singlets),
        n: cli.flags.n.unwrap_or(defaults.n),
        beta: cli.flags.beta,
    };

    let report = match run_command(cli.command.into(), &args, &cfg) {
        Ok(r) => r,
        Err(e @ Error::ContractViolation(_)) => {
            eprintln!("boundent: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("boundent: {e}");
            return ExitCode::from(1);
        }
    };

    let mut text = match serde_json::to_string_pretty(&report) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("boundent: cannot serialize report: {e}");
            return ExitCode::from(1);
        }
    };
    text.push('\n');
    let written = match &cli.flags.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    };
    if let Err(msg) = written {
        eprintln!("boundent: {msg}");
        return ExitCode::from(1);
    }
    ExitCode::from(report.exit_code() as u8)
}
