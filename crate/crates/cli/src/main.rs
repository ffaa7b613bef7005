use std::io::{ErrorKind, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use orthlie::{InstanceKind, Suite, SuiteOptions, ToleranceProfile};
use orthlie_cli::document::MatrixDocument;
use orthlie_cli::{analyze, generate_document, parse_coefficients, verify, Verdict};

/// Spectra of inner derivations on complex skew-symmetric matrices.
#[derive(Parser)]
#[command(name = "orthlie", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded skew-symmetric instance as a matrix document.
    Gen {
        #[arg(long)]
        n: usize,
        /// dense, block-sums, nilpotent or repeated
        #[arg(long, default_value = "dense")]
        kind: InstanceKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Block-sums coefficients, e.g. "i,2i,2i"
        #[arg(long)]
        coeffs: Option<String>,
    },
    /// Compare the closed formula for the derivation spectrum with brute force.
    ///
    /// Exit status: 0 when they agree, 1 when they disagree, 2 on invalid input.
    Analyze {
        /// Matrix document; standard input when omitted or "-"
        input: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run the property suites. Exit status 0 iff every property passes.
    Verify {
        /// all, derivation, duality, ideals, geometry or riesz
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Population size for every randomized property
        #[arg(long)]
        count: Option<usize>,
        /// Print the JSON report instead of the table
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, default_value_t = ToleranceProfile::default().atol)]
    atol: f64,
    #[arg(long, default_value_t = ToleranceProfile::default().rtol)]
    rtol: f64,
    /// Fixed eigenvalue clustering radius
    #[arg(long)]
    cluster: Option<f64>,
    #[arg(long, default_value_t = ToleranceProfile::default().contour_points)]
    contour_points: usize,
}

impl TolArgs {
    fn profile(&self) -> Result<ToleranceProfile> {
        let p = ToleranceProfile {
            atol: self.atol,
            rtol: self.rtol,
            cluster_override: self.cluster,
            contour_points: self.contour_points,
            ..ToleranceProfile::default()
        };
        p.validate()?;
        Ok(p)
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("cannot read standard input")?;
            Ok(s)
        }
    }
}

/// Writes to standard output; a closed pipe is not an error.
fn out(text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { n, kind, seed, coeffs } => {
            let coeffs = coeffs.as_deref().map(parse_coefficients).transpose()?;
            let doc = generate_document(n, kind, seed, coeffs.as_deref())?;
            out(&doc.emit())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { input, tol } => {
            let tol = tol.profile()?;
            let doc = MatrixDocument::parse(&read_input(input.as_ref())?)?;
            let report = analyze(&doc, &tol)?;
            out(&(serde_json::to_string_pretty(&report)? + "\n"))?;
            Ok(match report.verdict {
                Verdict::Agree => ExitCode::SUCCESS,
                Verdict::Disagree => {
                    eprintln!(
                        "formula and oracle disagree: distance {:.3e} > {:.3e}",
                        report.hausdorff_distance, report.threshold
                    );
                    ExitCode::from(1)
                }
            })
        }
        Command::Verify { suite, seed, count, json, tol } => {
            let opts = SuiteOptions { seed, count, tol: tol.profile()? };
            let (lines, report) = verify(suite, &opts);
            if json {
                out(&(serde_json::to_string_pretty(&report)? + "\n"))?;
            } else {
                let mut table: String = lines.iter().map(|l| format!("{l}\n")).collect();
                let failed = lines.iter().filter(|l| !l.passed).count();
                table += &format!("suite {suite} seed {seed}: {} passed, {failed} failed\n", lines.len() - failed);
                out(&table)?;
            }
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
