use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gdrazin::decompositions::{
    strongly_drazin_scaler, corner_characterize, euw_decompose, invariant_splitting, quasipolar, two_units,
};
use gdrazin::harness::{self, SuiteConfig, TheoremReport};
use gdrazin::instance_gen::{GenSpec, Instance};
use gdrazin::{drazin_inverse, Error, Matrix};

/// Exact Drazin inverses over the Gaussian rationals, with randomized
/// verification of the block-matrix and decomposition results.
#[derive(Parser)]
#[command(name = "gdrazin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a^d, the index and a^pi of one matrix file.
    Compute {
        #[arg(long)]
        input: PathBuf,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Certified decomposition of one matrix file.
    Decompose {
        #[arg(long, value_enum)]
        form: Form,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run one theorem suite on generated instances.
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = GenSpec::DEFAULT_ENTRY_BOUND)]
        entry_bound: i64,
        /// Replay exactly one trial with this derived seed (as printed in a
        /// failure dump) instead of deriving seeds from --seed.
        #[arg(long, conflicts_with = "instance")]
        trial_seed: Option<u64>,
        /// Check a dumped instance (an object of named matrix files) instead
        /// of generating any.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Defaults to standard output.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run every theorem suite and write an aggregate report.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = GenSpec::DEFAULT_ENTRY_BOUND)]
        entry_bound: i64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Quasipolar,
    Euw,
    TwoUnits,
    Corner,
    Splitting,
    Scaler,
}

/// Distinguishes "bad input" (exit 1) from "a proved identity failed" (exit 2).
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Certificate(_) | Error::Generation(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Compute { input, output } => {
            let a = read_matrix(&input)?;
            let result = drazin_inverse(&a)?;
            write_json(output.as_deref(), &result)
        }
        Command::Decompose { form, input, output } => {
            let a = read_matrix(&input)?;
            let out = output.as_deref();
            match form {
                Form::Quasipolar => write_json(out, &quasipolar(&a, None)?),
                Form::Euw => write_json(out, &euw_decompose(&a)?),
                Form::TwoUnits => write_json(out, &two_units(&a)?),
                Form::Corner => write_json(out, &corner_characterize(&a, None)?),
                Form::Splitting => write_json(out, &invariant_splitting(&a)?),
                Form::Scaler => write_json(out, &strongly_drazin_scaler(&a)?),
            }
        }
        Command::Verify {
            theorem,
            size,
            trials,
            seed,
            entry_bound,
            trial_seed,
            instance,
            report,
        } => {
            harness::validate_theorem_id(&theorem)?;
            if size == 0 {
                return Err(Failure::Usage("--size must be at least 1".into()));
            }
            let report_data = match (trial_seed, instance) {
                (_, Some(path)) => instance_report(&theorem, &path)?,
                (Some(ts), None) => replay_report(&theorem, size, ts, entry_bound)?,
                (None, None) => {
                    let cfg = SuiteConfig {
                        seed,
                        sizes: vec![size],
                        trials,
                        entry_bound,
                    };
                    harness::run_suite(&theorem, &cfg)?
                }
            };
            write_json(report.as_deref(), &report_data)?;
            check_reports(std::slice::from_ref(&report_data))
        }
        Command::Fuzz {
            trials,
            seed,
            sizes,
            entry_bound,
            report,
        } => {
            let cfg = SuiteConfig {
                seed,
                sizes,
                trials,
                entry_bound,
            };
            // Fail on an unwritable path before spending time on the suites.
            if let Some(path) = &report {
                fs::write(path, b"").map_err(|e| io_error(path, e))?;
            }
            let reports = harness::run_fuzz(&cfg)?;
            write_json(report.as_deref(), &reports)?;
            check_reports(&reports)
        }
    }
}

fn replay_report(theorem: &str, size: usize, trial_seed: u64, entry_bound: i64) -> Result<TheoremReport, Failure> {
    let spec = harness::trial_spec(theorem, size, trial_seed, entry_bound);
    let start = Instant::now();
    let (instance, verdict) = harness::replay(theorem, &spec)?;
    Ok(single_trial_report(theorem, spec, instance, verdict, start))
}

fn instance_report(theorem: &str, path: &Path) -> Result<TheoremReport, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let instance: Instance =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let size = instance.iter().next().map_or(0, |(_, m)| m.rows());
    let spec = harness::trial_spec(theorem, size, 0, GenSpec::DEFAULT_ENTRY_BOUND);
    let start = Instant::now();
    let verdict = harness::check_instance(theorem, &instance)?;
    Ok(single_trial_report(theorem, spec, instance, verdict, start))
}

fn single_trial_report(
    theorem: &str,
    spec: GenSpec,
    instance: Instance,
    verdict: Option<String>,
    start: Instant,
) -> TheoremReport {
    let failures: Vec<harness::Failure> = verdict
        .map(|failed_certificate| harness::Failure {
            trial: 0,
            trial_seed: spec.seed,
            gen_spec: spec,
            instance,
            failed_certificate,
        })
        .into_iter()
        .collect();
    TheoremReport {
        theorem_id: theorem.to_string(),
        seed: spec.seed,
        sizes: vec![spec.size],
        entry_bound: spec.entry_bound,
        trials: 1,
        passes: 1 - failures.len(),
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn check_reports(reports: &[TheoremReport]) -> Result<(), Failure> {
    let failing: Vec<String> = reports
        .iter()
        .filter(|r| !r.all_pass())
        .map(|r| {
            let first = &r.failures[0];
            format!(
                "{}: {}/{} trials failed; first at trial {} (seed {}, size {}): {}",
                r.theorem_id,
                r.failures.len(),
                r.trials,
                first.trial,
                first.trial_seed,
                first.gen_spec.size,
                first.failed_certificate
            )
        })
        .collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failing.join("\n")))
    }
}

fn read_matrix(path: &Path) -> Result<Matrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let m = Matrix::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if !m.is_square() {
        return Err(Failure::Usage(format!(
            "{}: expected a square matrix, got {}x{}",
            path.display(),
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_error(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}
