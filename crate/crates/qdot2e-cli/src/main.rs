//! `qdot2e` — energies and natural-orbital entanglement of two Coulomb-
//! interacting electrons in a harmonic trap with a central Coulomb
//! impurity, plus the free-space two-electron atom as a calibration mode.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
//! 4 reference-check failure (`table1`).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use qdot2e_cli::config::{self, ConfigError, GammaPolicy, GammaSpec, MuSpec, RunArgs};
use qdot2e_cli::record::{self, Entry};
use qdot2e_cli::runner::{self, RunKind};
use qdot2e_core::CoreError;

#[derive(Parser)]
#[command(
    name = "qdot2e",
    version,
    about = "Two-electron quantum dot with a central Coulomb impurity: \
             variational energies and natural-orbital entanglement"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lowest-state energy at one parameter point.
    Energy(RunArgs),
    /// Energy plus von Neumann / linear entanglement entropy at one point.
    Entropy(RunArgs),
    /// Entropy records over a γ grid (default: 40 log points in [0.05, 100]).
    Sweep(RunArgs),
    /// Canonical convergence table with pass/fail against reference values.
    Table1(Table1Args),
    /// Ionization threshold γ_c for an attractive impurity η < 0.
    GammaC(GammaCArgs),
    /// Optimize the nonlinear exponent μ and report the optimum.
    MuScan(RunArgs),
}

#[derive(Args)]
struct Table1Args {
    /// Basis order of the underlying free-space solve.
    #[arg(long, default_value_t = 10)]
    omega: u32,
    /// Output path (default: stdout).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GammaCArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Use the threshold E_2e = E_1e + 3/2 instead of E_2e = E_1e,
    /// granting the detached electron its trap zero-point energy.
    #[arg(long)]
    detached_zero_point: bool,
}

const EXIT_OK: i32 = 0;
const EXIT_IO: i32 = 1;
const EXIT_VALIDATION: i32 = 2;
const EXIT_NUMERICAL: i32 = 3;
const EXIT_REFERENCE: i32 = 4;

fn main() {
    std::process::exit(run(Cli::parse()));
}

fn exit_code_for(err: &CoreError) -> i32 {
    match err {
        CoreError::Domain(_) => EXIT_VALIDATION,
        _ => EXIT_NUMERICAL,
    }
}

fn write_output(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    use std::io::Write;
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn emit_entries(cfg: &config::ResolvedRun, entries: &[Entry]) -> i32 {
    let text = match cfg.format {
        config::Format::Csv => record::to_csv(entries),
        config::Format::Json => record::to_json(entries),
    };
    match write_output(&text, cfg.out.as_ref()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_IO
        }
    }
}

fn single_point(args: &RunArgs, kind: RunKind) -> i32 {
    let cfg = match config::resolve(args, GammaPolicy::SinglePoint) {
        Ok(c) => c,
        Err(e) => return validation_failure(&e),
    };
    let GammaSpec::Single(gamma) = cfg.gamma else {
        unreachable!("single-point policy yields a single gamma");
    };
    match runner::run_point(&cfg, gamma, kind) {
        Ok(rec) => {
            if rec.wall_ms > 0 {
                eprintln!(
                    "E = {:.12}, mu = {:.6}, R = {:.4} ({} ms)",
                    rec.energy, rec.mu, rec.r_cut, rec.wall_ms
                );
            } else {
                eprintln!("E = {:.12}, mu = {:.6}, R = {:.4} (cache hit)", rec.energy, rec.mu, rec.r_cut);
            }
            emit_entries(&cfg, &[Entry::Ok(Box::new(rec))])
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn validation_failure(e: &ConfigError) -> i32 {
    eprintln!("error: {e}");
    EXIT_VALIDATION
}

fn cmd_sweep(args: &RunArgs) -> i32 {
    let cfg = match config::resolve(args, GammaPolicy::Sweep) {
        Ok(c) => c,
        Err(e) => return validation_failure(&e),
    };
    let entries = runner::sweep(&cfg);
    let failures = entries
        .iter()
        .filter(|e| matches!(e, Entry::Err(_)))
        .count();
    for entry in &entries {
        if let Entry::Err(err) = entry {
            eprintln!("point gamma = {} failed: {}", err.gamma, err.error);
        }
    }
    eprintln!(
        "sweep: {} points, {} failed",
        entries.len(),
        failures
    );
    let code = emit_entries(&cfg, &entries);
    if code != EXIT_OK {
        return code;
    }
    if failures == entries.len() {
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    }
}

fn cmd_table1(args: &Table1Args) -> i32 {
    match runner::table1(args.omega) {
        Ok(outcome) => {
            for (l_max, n_max, got, reference, delta, pass) in &outcome.cells {
                eprintln!(
                    "{} l_max={} n_max={}: L_ap={:.7} reference={:.7} |delta|={:.2e}",
                    if *pass { "PASS" } else { "FAIL" },
                    l_max,
                    n_max,
                    got,
                    reference,
                    delta
                );
            }
            if let Err(e) = write_output(&outcome.csv, args.out.as_ref()) {
                eprintln!("error: cannot write output: {e}");
                return EXIT_IO;
            }
            if outcome.all_pass {
                EXIT_OK
            } else {
                eprintln!("error: convergence table deviates from reference values");
                EXIT_REFERENCE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_gamma_c(args: &GammaCArgs) -> i32 {
    let cfg = match config::resolve(&args.run, GammaPolicy::SinglePoint) {
        Ok(c) => c,
        Err(e) => return validation_failure(&e),
    };
    match runner::gamma_c(&cfg, args.detached_zero_point) {
        Ok(outcome) => {
            eprintln!(
                "gamma_c = {:.5} (bracket [{:.5}, {:.5}], tol {})",
                outcome.threshold.gamma_c,
                outcome.threshold.bracket.0,
                outcome.threshold.bracket.1,
                outcome.gamma_tol
            );
            let text = runner::gamma_c_document(&outcome, cfg.format);
            match write_output(&text, cfg.out.as_ref()) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    EXIT_IO
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn cmd_mu_scan(args: &RunArgs) -> i32 {
    if args.mu.is_some() {
        return validation_failure(&ConfigError(
            "mu-scan optimizes mu; pass --mu-scan lo:hi to bound it, not --mu".into(),
        ));
    }
    let mut cfg = match config::resolve(args, GammaPolicy::SinglePoint) {
        Ok(c) => c,
        Err(e) => return validation_failure(&e),
    };
    // The resolver defaults free-space runs to a fixed μ; this subcommand
    // always scans.
    if let MuSpec::Fixed(_) = cfg.mu {
        cfg.mu = MuSpec::Scan { lo: 0.2, hi: 10.0 };
    }
    let GammaSpec::Single(gamma) = cfg.gamma else {
        unreachable!("single-point policy yields a single gamma");
    };
    match runner::run_point(&cfg, gamma, RunKind::Energy) {
        Ok(rec) => {
            eprintln!("mu* = {:.6}, E(mu*) = {:.12}", rec.mu, rec.energy);
            emit_entries(&cfg, &[Entry::Ok(Box::new(rec))])
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn run(cli: Cli) -> i32 {
    match &cli.cmd {
        Cmd::Energy(args) => single_point(args, RunKind::Energy),
        Cmd::Entropy(args) => single_point(args, RunKind::Entropy),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Table1(args) => cmd_table1(args),
        Cmd::GammaC(args) => cmd_gamma_c(args),
        Cmd::MuScan(args) => cmd_mu_scan(args),
    }
}
