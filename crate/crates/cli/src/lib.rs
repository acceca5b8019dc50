//! Command-line front end for `spectacles`: demos, verification suites and
//! JSON reports.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 on a
//! usage or input error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub mod report;
pub mod suites;

pub use report::{Entry, Report, RunConfig, Status, REPORT_VERSION};

use spectacles::decks::DeckKind;
use spectacles::schema::TheorySchema;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] spectacles::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "spectacles",
    version,
    about = "Similarity spectacles: demos and verification reports"
)]
pub struct Cli {
    /// Numerical tolerance for metric checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here and print a summary instead.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Integration steps for Hamiltonian flows.
    #[arg(long, global = true, default_value_t = 10_000)]
    steps: usize,
    /// Time-grid points for picture equivalence.
    #[arg(long, global = true, default_value_t = 100)]
    grid_points: usize,
    /// Problem size: cards, shift period or theorem state count.
    #[arg(long, global = true)]
    size: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a named demonstration.
    Demo {
        #[arg(value_enum)]
        which: Demo,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        which: Suite,
    },
    /// Similarity group of a finite schema file.
    MaximalGroup {
        #[arg(long, value_name = "FILE")]
        schema: PathBuf,
        /// JSON list of extra candidate tables; implies a restricted search.
        #[arg(long, value_name = "FILE")]
        candidates: Option<PathBuf>,
        /// Seeded random bijections to add as candidates.
        #[arg(long, default_value_t = 0, value_name = "N")]
        random_candidates: usize,
        /// Test candidates only, even when exhaustive search is feasible.
        #[arg(long)]
        restricted: bool,
    },
    /// Write a schema file.
    Export {
        #[command(subcommand)]
        what: Export,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Demo {
    Decks,
    Shift,
    QuantumPictures,
    Measurement,
    Hamiltonian,
    Gruebleen,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Theorem,
    All,
}

#[derive(Debug, Subcommand)]
enum Export {
    /// Card-deck schema.
    Deck {
        #[arg(long, value_enum, default_value_t = Kind::Half)]
        kind: Kind,
        /// Output file; stdout when absent.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Full,
    Half,
}

/// Result of one invocation: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: message.into(),
        }
    }
}

pub fn load_schema_file(path: &Path) -> Result<TheorySchema, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    TheorySchema::from_json(&text).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn load_candidates(path: &Path) -> Result<Vec<Vec<usize>>, CliError> {
    let input = |message: String| CliError::Input {
        path: path.to_path_buf(),
        message,
    };
    let text = fs::read_to_string(path).map_err(|e| input(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| input(format!("expected a list of tables: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    if !(cli.tolerance > 0.0 && cli.tolerance.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tolerance must be positive, got {}",
            cli.tolerance
        )));
    }
    let cfg = RunConfig {
        tolerance: cli.tolerance,
        seed: cli.seed,
        steps: cli.steps,
        grid_points: cli.grid_points,
        size: cli.size,
    };
    let report = match cli.command {
        Command::Demo { which } => match which {
            Demo::Decks => suites::demo_decks(&cfg)?,
            Demo::Shift => suites::demo_shift(&cfg)?,
            Demo::QuantumPictures => suites::demo_quantum_pictures(&cfg)?,
            Demo::Measurement => suites::demo_measurement(&cfg)?,
            Demo::Hamiltonian => suites::demo_hamiltonian(&cfg)?,
            Demo::Gruebleen => suites::demo_gruebleen(&cfg)?,
        },
        Command::Verify { which } => match which {
            Suite::Theorem => suites::verify_theorem(&cfg)?,
            Suite::All => suites::verify_all(&cfg)?,
        },
        Command::MaximalGroup {
            schema,
            candidates,
            random_candidates,
            restricted,
        } => {
            let s = load_schema_file(&schema)?;
            let supplied = match &candidates {
                Some(p) => load_candidates(p)?,
                None => Vec::new(),
            };
            let options = suites::CandidateOptions {
                supplied,
                random: random_candidates,
                restricted,
            };
            suites::maximal_group(&cfg, &s, &options)?
        }
        Command::Export {
            what: Export::Deck { kind, out },
        } => {
            let kind = match kind {
                Kind::Full => DeckKind::Full,
                Kind::Half => DeckKind::Half,
            };
            let text = suites::export_deck(cfg.size.unwrap_or(4), kind)?;
            return Ok(match out {
                Some(p) => {
                    write_file(&p, &text)?;
                    Outcome {
                        code: 0,
                        stdout: format!("wrote {}\n", p.display()),
                        stderr: String::new(),
                    }
                }
                None => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
            });
        }
    };
    let json = report.to_json();
    let stdout = match &cli.json {
        Some(p) => {
            write_file(p, &json)?;
            report.summary()
        }
        None => json,
    };
    Ok(Outcome {
        code: if report.passed() { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    })
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    dispatch(cli).unwrap_or_else(|e| Outcome::usage(format!("error: {e}\n")))
}
