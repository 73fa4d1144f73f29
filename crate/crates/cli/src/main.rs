use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use discord_cli::audit::run_audit;
use discord_cli::compute::{compute_report, load_state, report_csv, ComputeOptions, Family};
use discord_cli::error::{CliError, EXIT_INPUT, EXIT_VIOLATION};
use discord_cli::sweep::{family_domain, run_sweep, sweep_csv, sweep_violations, SweepSpec};
use discord_cli::verify::{run_verify, VerifyOptions};
use discord_core::OptimizerConfig;

#[derive(Parser)]
#[command(name = "discord", version, about = "Entropic and geometric discord of bipartite states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discord report for one state file.
    Compute {
        state_file: PathBuf,
        #[command(flatten)]
        opt: OptimizerArgs,
        /// Also compute the entropic discords (slow).
        #[arg(long)]
        entropic: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed form against numerics across a Werner or isotropic family.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        m: usize,
        /// Defaults to the lower end of the family's domain.
        #[arg(long, allow_hyphen_values = true)]
        x_start: Option<f64>,
        /// Defaults to the upper end of the family's domain.
        #[arg(long, allow_hyphen_values = true)]
        x_end: Option<f64>,
        #[arg(long, default_value_t = 21)]
        points: usize,
        #[command(flatten)]
        opt: OptimizerArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance table; exit 0 iff every check passes.
    Verify {
        /// Skip the m = 4 family sweeps.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = OptimizerConfig::default().restarts)]
        restarts: usize,
    },
    /// Randomized invariant checks over seeded random states.
    Audit {
        #[arg(long, default_value_t = 500)]
        n_states: usize,
        /// Subsystem dimensions as `nA,nB`.
        #[arg(long, default_value = "2,2", value_parser = parse_dims)]
        dims: (usize, usize),
        #[command(flatten)]
        opt: OptimizerArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct OptimizerArgs {
    #[arg(long, default_value_t = OptimizerConfig::default().restarts)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Convergence tolerance on objective values.
    #[arg(long, default_value_t = OptimizerConfig::default().value_tolerance)]
    tol: f64,
}

impl OptimizerArgs {
    fn config(&self) -> Result<OptimizerConfig, CliError> {
        let cfg = OptimizerConfig {
            restarts: self.restarts,
            seed: self.seed,
            value_tolerance: self.tol,
            ..OptimizerConfig::default()
        };
        cfg.validate().map_err(|e| CliError::Arguments(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Werner,
    Isotropic,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Werner => Family::Werner,
            FamilyArg::Isotropic => Family::Isotropic,
        }
    }
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once([',', 'x'])
        .ok_or_else(|| format!("expected nA,nB, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad dimension {t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes the whole output at once so that an error never leaves partial output behind.
fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Write { path: path.display().to_string(), reason: e.to_string() }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Write { path: "stdout".into(), reason: e.to_string() })
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compute { state_file, opt, entropic, format, out } => {
            let cfg = opt.config()?;
            let state = load_state(&state_file)?;
            let report = compute_report(&state, &ComputeOptions { cfg, entropic })?;
            let text = match format {
                Format::Json => json(&report),
                Format::Csv | Format::Text => report_csv(&report),
            };
            emit(&text, out.as_ref())?;
            if report.flags.is_empty() {
                Ok(())
            } else {
                Err(CliError::Violation(report.flags.join("; ")))
            }
        }
        Command::Sweep { family, m, x_start, x_end, points, opt, out } => {
            let cfg = opt.config()?;
            let family = Family::from(family);
            let (lo, hi) = family_domain(family);
            let spec = SweepSpec { family, m, x_start: x_start.unwrap_or(lo), x_end: x_end.unwrap_or(hi), points };
            let rows = run_sweep(&spec, &cfg)?;
            emit(&sweep_csv(&rows), out.as_ref())?;
            let violations = sweep_violations(&rows);
            if violations.is_empty() {
                Ok(())
            } else {
                Err(CliError::Violation(violations.join("; ")))
            }
        }
        Command::Verify { quick, seed, restarts } => {
            let opts = VerifyOptions { seed, restarts, quick };
            OptimizerConfig::default()
                .with_restarts(restarts)
                .validate()
                .map_err(|e| CliError::Arguments(e.to_string()))?;
            let mut stdout = std::io::stdout().lock();
            let checks = run_verify(&opts, &mut stdout)
                .map_err(|e| CliError::Write { path: "stdout".into(), reason: e.to_string() })?;
            let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.criterion.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Violation(format!("failed checks: {}", failed.join(", "))))
            }
        }
        Command::Audit { n_states, dims, opt, format, out } => {
            let cfg = opt.config()?;
            let report = run_audit(n_states, opt.seed, dims, &cfg)?;
            let text = match format {
                Format::Json => json(&report),
                Format::Csv | Format::Text => report.text(),
            };
            emit(&text, out.as_ref())?;
            if report.violations == 0 {
                Ok(())
            } else {
                Err(CliError::Violation(format!("{} invariant violations", report.violations)))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: invalid arguments: {}", first.trim_start_matches("error: "));
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            debug_assert!(e.exit_code() == EXIT_INPUT || e.exit_code() == EXIT_VIOLATION);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
