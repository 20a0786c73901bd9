use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pshcert_cli::{certify, feasibility, hull, report, CliError, RunConfig, EXIT_CLAIM_FAILURE, EXIT_PASS};

#[derive(Parser)]
#[command(name = "pshcert", version, about = "Exact certificates for plurisubharmonic constructions near CR singularities")]
struct Cli {
    /// Flat key-value configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the claim suite and write per-claim reports.
    Certify(CertifyArgs),
    /// Scan the coefficient conditions over a range of alpha.
    Feasibility(FeasibilityArgs),
    /// Run the polynomial hull experiments.
    Hull(HullArgs),
    /// Summarize the reports in an output directory.
    Report(ReportArgs),
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated rationals, e.g. 1/4,1/3.
    #[arg(long)]
    alpha: Option<String>,
    /// A rational or `half-bound`.
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    radius: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated claim-name prefixes.
    #[arg(long)]
    claims: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    convention: Option<String>,
    #[arg(long)]
    value_samples: Option<usize>,
    /// Offset added to A after solving (negative testing).
    #[arg(long, allow_hyphen_values = true)]
    tamper_a: Option<String>,
}

#[derive(Args)]
struct FeasibilityArgs {
    /// RAT:RAT
    #[arg(long)]
    range: Option<String>,
    #[arg(long)]
    step: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HullArgs {
    /// all, kallin, fiber or probes.
    #[arg(long)]
    experiment: Option<String>,
    /// Largest degree tried for the probes.
    #[arg(long)]
    degree: Option<usize>,
    /// Points per chart parameter in the probe sample grid.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

macro_rules! set {
    ($cfg:ident, $args:ident, $($field:ident),*) => {
        $(if let Some(v) = $args.$field { $cfg.$field = v; })*
    };
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let status = |ok: bool| if ok { EXIT_PASS } else { EXIT_CLAIM_FAILURE };
    match cli.command {
        Command::Certify(a) => {
            set!(cfg, a, k, alpha, c, radius, eps, samples, seed, out, claims, scheme, convention, value_samples, tamper_a);
            let o = certify(&cfg)?;
            for r in &o.reports {
                println!("{:<36} {:<20} {:>8.2}s", r.claim, r.verdict.name(), r.wall_time.as_secs_f64());
                for w in &r.witnesses {
                    println!("    witness: {} value {}", w.label, w.value);
                }
            }
            println!("manifest sha256 {}", o.manifest_sha256);
            println!("reports in {}", o.out_dir.display());
            Ok(status(o.all_passed()))
        }
        Command::Feasibility(a) => {
            set!(cfg, a, range, step, tol, out);
            let o = feasibility(&cfg)?;
            println!("{} rows written to {}", o.rows, cfg.out.join("feasibility.csv").display());
            println!(
                "threshold interval [{}, {}]",
                pshcert_core::scalar::fmt_rational(&o.threshold.0),
                pshcert_core::scalar::fmt_rational(&o.threshold.1)
            );
            Ok(EXIT_PASS)
        }
        Command::Hull(a) => {
            set!(cfg, a, experiment, degree, grid, out);
            let o = hull(&cfg)?;
            for (name, ok) in &o.experiments {
                println!("{name:<8} {}", if *ok { "pass" } else { "fail" });
            }
            Ok(status(o.all_passed()))
        }
        Command::Report(a) => {
            set!(cfg, a, out);
            let (text, ok) = report(&cfg.out)?;
            print!("{text}");
            Ok(status(ok))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
