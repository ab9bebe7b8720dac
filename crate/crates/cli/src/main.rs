mod commands;
mod op;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use coherator::coherators::{Flavor, Strategy};
use coherator::pasting::Table;
use coherator::Error;

use op::OpSpec;

#[derive(Debug, Parser)]
#[command(name = "coherator", version, about = "Coherators for weak ω-groupoids and their finite models")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Global {
    /// Print machine-readable JSON on stdout, and JSON errors on stderr.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    /// Parse and validate the inputs, then stop.
    #[arg(long, global = true)]
    pub dry_run: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the tables of dimensions up to the given dimension and length.
    EnumerateTables {
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// List the arrows between two globular sums.
    Hom {
        #[arg(long)]
        from: Table,
        #[arg(long)]
        to: Table,
    },
    /// The globular set of a table.
    Realize {
        #[arg(long)]
        table: Table,
        #[arg(long)]
        trunc: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a bounded tower of definition.
    BuildCoherator {
        #[arg(long, default_value = "groupoid")]
        flavor: Flavor,
        #[arg(long, default_value = "canonical")]
        strategy: Strategy,
        /// Maximal number of summands in a codomain.
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a structural pair, e.g. `comp:l=2,i=3` or `unit:i=0`.
    Derive {
        #[arg(long)]
        tower: Option<PathBuf>,
        /// Flavor of the free provider used when no tower is given.
        #[arg(long, default_value = "groupoid")]
        flavor: Flavor,
        #[arg(long)]
        op: OpSpec,
        /// Adjoin missing liftings above the tower instead of failing.
        #[arg(long)]
        extend: bool,
        #[arg(long)]
        print_boundary: bool,
    },
    /// Evaluate a term in a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, conflicts_with = "symbol", required_unless_present = "symbol")]
        term: Option<String>,
        #[arg(long)]
        symbol: Option<u32>,
        /// Comma-separated argument cells; sampled with --seed when absent.
        #[arg(long, value_delimiter = ',')]
        args: Option<Vec<usize>>,
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Homotopy groups of a model, or its components for `--i 0`.
    Pi {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 0)]
        base: usize,
    },
    /// Check whether a map of models is a weak equivalence.
    Weq {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// Cell maps `{"maps": [[...], ...]}`; the identity when absent.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Bounded check that every pair has a lifting at the top level.
    CheckFibrant {
        #[arg(long)]
        tower: PathBuf,
    },
    /// Re-layer a cellular presentation (or a tower) by the ω-construction.
    Relayer {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Transport a model along a map from another tower into its own.
    Lift {
        #[arg(long)]
        tower: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one of the built-in finite models.
    MakeModel {
        #[arg(long, value_enum)]
        kind: commands::ModelKind,
        /// `zN` for a cyclic group or `s3`.
        #[arg(long, default_value = "z2")]
        group: String,
        /// Number of 0-cells of a constant model.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        trunc: usize,
        #[arg(long)]
        tower: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the Segal condition of a model file.
    CheckSegal {
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_domain_error() => 1,
            _ => 2,
        }
    }

    fn kind(&self) -> String {
        match self {
            CliError::Core(e) => format!("{e:?}").chars().take_while(|c| c.is_alphanumeric()).collect(),
            CliError::Usage(_) => "Usage".into(),
            CliError::Io(_) => "Io".into(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
        }
    }
}

fn report(err: &CliError, json_errors: bool) -> ExitCode {
    let code = err.exit_code();
    if json_errors {
        let obj = json!({ "error": { "kind": err.kind(), "message": err.message(), "exit_code": code } });
        eprintln!("{obj}");
    } else {
        eprintln!("error: {}", err.message());
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let wants_json = argv.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) if wants_json => {
            let msg = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            return report(&CliError::Usage(msg), true);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli.global, cli.command) {
        Ok(out) => {
            let text = if cli.global.json {
                serde_json::to_string_pretty(&out.json).expect("plain data") + "\n"
            } else {
                out.text
            };
            // a closed pipe downstream is not our failure
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            // a check that ran and came out negative
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => report(&e, cli.global.json),
    }
}
