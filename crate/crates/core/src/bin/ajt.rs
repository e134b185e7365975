//! Command-line front end. Exit codes: 0 success, 1 usage or input error,
//! 2 a cross-check failed, 3 a scan reported violations.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ajt_lab::ajt::verdict_with_mode;
use ajt_lab::binomial::FpMode;
use ajt_lab::error::{Error, Result};
use ajt_lab::lemma::{check_all, LabOptions, DEFAULT_LAB_BUDGET, LARGE_LAB_BUDGET};
use ajt_lab::matrix::MatrixFp;
use ajt_lab::report::{
    budget_from_env, parse_matrix, read_matrix_file, write_atomic, Payload, ReportEnvelope,
    VerdictPayload,
};
use ajt_lab::scan::{merge, scan, ScanConfig, ScanReport, Shard};
use ajt_lab::suites::{selftest, DEFAULT_SEED};

const EXIT_INCONSISTENT: u8 = 2;
const EXIT_VIOLATIONS: u8 = 3;

#[derive(Parser)]
#[command(name = "ajt", version, about = "Group-ring identity checks over F_p^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MatrixArgs {
    /// The prime.
    #[arg(long)]
    p: Option<u32>,
    /// Inline rows, e.g. "1,1;1,2".
    #[arg(long, conflicts_with = "matrix")]
    rows: Option<String>,
    /// JSON ({"p":..,"rows":..}) or text matrix file.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

impl MatrixArgs {
    fn load(&self) -> Result<MatrixFp> {
        let m = match (&self.rows, &self.matrix) {
            (Some(rows), _) => parse_matrix(
                self.p
                    .ok_or_else(|| Error::Parse("--rows needs --p".into()))?,
                rows,
            )?,
            (None, Some(path)) => read_matrix_file(path, self.p)?,
            (None, None) => return Err(Error::Parse("give --rows or --matrix".into())),
        };
        m.require_nonsingular()?;
        Ok(m)
    }
}

#[derive(Subcommand)]
enum Command {
    /// F_p identity, Z identity and nowhere-zero witness for one matrix.
    Verdict {
        #[command(flatten)]
        input: MatrixArgs,
        /// Use the dense F_p product instead of the reduced table.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Step-by-step checks of the reduction along one coordinate.
    Lemma {
        #[command(flatten)]
        input: MatrixArgs,
        /// Coordinate, counted from 1.
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Coefficient budget for dense work in the auxiliary space.
        #[arg(long)]
        budget: Option<usize>,
        /// Raise the budget to cover p = 3, n = 3.
        #[arg(long)]
        allow_large: bool,
        /// Fix the head values of the search, e.g. "1,1".
        #[arg(long)]
        fixed_head: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive scan of GL_n(F_p).
    Scan {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        /// Shard k of m, written k/m.
        #[arg(long, default_value = "0/1")]
        shard: Shard,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        checkpoint_every: u64,
        /// Verdicts on monomial-orbit representatives only.
        #[arg(long)]
        canonicalize: bool,
        /// Also compare the dense and reduced F_p tests on every matrix.
        #[arg(long)]
        full: bool,
        /// Worker threads (default: available cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Stop with a partial report after this many seconds.
        #[arg(long)]
        max_seconds: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the tallies as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Combine shard reports into one.
    Merge {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Seeded oracle, Leibniz, kernel and invariance suites.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        quick: bool,
    },
}

fn emit(env: &ReportEnvelope, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => env.write(path),
        None => print_stdout(&format!("{}\n", env.to_json_pretty()?)),
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn print_stdout(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn scan_exit(report: &ScanReport) -> u8 {
    let t = &report.totals;
    eprintln!(
        "p={} n={}: {} enumerated, {} classes, {} counterexamples, {} violations, {} inconsistencies{}",
        report.p,
        report.n,
        t.enumerated,
        t.classes,
        t.counterexamples,
        t.violations,
        t.inconsistencies,
        if report.partial { " (partial)" } else { "" }
    );
    if !report.inconsistencies.is_empty() {
        EXIT_INCONSISTENT
    } else if !report.violations.is_empty() {
        EXIT_VIOLATIONS
    } else {
        0
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Verdict { input, full, out } => {
            let m = input.load()?;
            let mode = if full { FpMode::Full } else { FpMode::Reduced };
            let v = verdict_with_mode(&m, mode)?;
            let ok = v.consistent && v.mod_p_compatible();
            let config = json!({ "p": m.p(), "rows": m.to_rows(), "mode": mode });
            let env = ReportEnvelope::new(
                "verdict",
                config,
                Payload::Verdict(VerdictPayload {
                    matrix: m,
                    verdict: v,
                }),
            )?;
            emit(&env, out.as_ref())?;
            Ok(if ok { 0 } else { EXIT_INCONSISTENT })
        }
        Command::Lemma {
            input,
            i,
            budget,
            allow_large,
            fixed_head,
            out,
        } => {
            let m = input.load()?;
            if i == 0 || i > m.n() {
                return Err(Error::Parse(format!("--i must be between 1 and {}", m.n())));
            }
            let budget = match budget {
                Some(b) => b,
                None if allow_large => LARGE_LAB_BUDGET,
                None => budget_from_env()?.unwrap_or(DEFAULT_LAB_BUDGET),
            };
            let fixed_head = fixed_head
                .map(|h| {
                    h.split(',')
                        .map(|x| {
                            x.trim()
                                .parse::<u32>()
                                .map_err(|_| Error::Parse(format!("bad head value {x:?}")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .transpose()?;
            let opts = LabOptions {
                budget,
                fixed_head: fixed_head.clone(),
            };
            let report = check_all(&m, i - 1, &opts)?;
            let failures = report.hard_failures();
            for name in &failures {
                eprintln!("unconditional step failed: {name}");
            }
            let config = json!({ "p": m.p(), "rows": m.to_rows(), "i": i, "budget": budget, "fixed_head": fixed_head });
            let env = ReportEnvelope::new("lemma", config, Payload::Lemma(Box::new(report)))?;
            emit(&env, out.as_ref())?;
            Ok(if failures.is_empty() {
                0
            } else {
                EXIT_INCONSISTENT
            })
        }
        Command::Scan {
            p,
            n,
            shard,
            checkpoint,
            checkpoint_every,
            canonicalize,
            full,
            workers,
            max_seconds,
            out,
            csv,
        } => {
            let cfg = ScanConfig {
                p,
                n,
                canonicalize,
                shard,
                workers,
                checkpoint,
                checkpoint_interval: checkpoint_every,
                max_duration: max_seconds.map(Duration::from_secs),
                cross_check_full: full,
            };
            let report = scan(&cfg)?;
            if let Some(path) = &csv {
                write_atomic(path, report.to_csv().as_bytes())?;
            }
            let code = scan_exit(&report);
            let config = json!({
                "p": p, "n": n, "shard": shard.to_string(), "canonicalize": canonicalize, "full": full,
                "workers": workers, "max_seconds": max_seconds,
            });
            emit(
                &ReportEnvelope::new("scan", config, Payload::Scan(report))?,
                out.as_ref(),
            )?;
            Ok(code)
        }
        Command::Merge { reports, out, csv } => {
            let parts = reports
                .iter()
                .map(|path| match ReportEnvelope::read(path)?.payload {
                    Payload::Scan(r) => Ok(r),
                    _ => Err(Error::Merge(format!(
                        "{} is not a scan report",
                        path.display()
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            let merged = merge(&parts)?;
            if let Some(path) = &csv {
                write_atomic(path, merged.to_csv().as_bytes())?;
            }
            let code = scan_exit(&merged);
            let names: Vec<String> = reports.iter().map(|p| p.display().to_string()).collect();
            emit(
                &ReportEnvelope::new("merge", json!({ "inputs": names }), Payload::Scan(merged))?,
                out.as_ref(),
            )?;
            Ok(code)
        }
        Command::Selftest { seed, quick } => {
            let report = selftest(seed, quick);
            print_stdout(&report.table())?;
            Ok(if report.passed() {
                0
            } else {
                EXIT_INCONSISTENT
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
