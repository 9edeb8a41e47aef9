//! Command surface shared by the binary and the tests.

use crate::document::{parse_document, serialize_document, DocumentError};
use crate::render::render_svg;
use crate::report::AnalysisReport;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ifsx_core::charvec::{analyze, compare_at, OrderResult};
use ifsx_core::harness::{contradiction_trace, power_chain};
use ifsx_core::{Budget, IfsSystem};
use serde::Serialize;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Environment variable overriding the default node budget.
pub const BUDGET_ENV: &str = "IFSX_BUDGET";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Document { path: PathBuf, source: DocumentError },
    #[error(transparent)]
    Core(#[from] ifsx_core::Error),
    #[error(transparent)]
    Unrepresentable(#[from] DocumentError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Gamma,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Cover depth for rendering and geometric bounds.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Node budget for each branch-and-bound search.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Parser)]
#[command(name = "ifsx", version, about = "Certified analysis of iterated function systems of similitudes")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Adjacency, components, SSC status and characteristic vector.
    Analyze { file: PathBuf },
    /// Characteristic vector only.
    Gamma { file: PathBuf },
    /// Compare two systems.
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value = "gamma")]
        what: Quantity,
    },
    /// Composition `Φ∘Ψ` as a document.
    Compose { phi: PathBuf, psi: PathBuf },
    /// Power `Φ^k` as a document.
    Power { file: PathBuf, k: usize },
    /// Run the band-normalization pipeline on a non-SSC `Φ` and an SSC `Ψ`.
    Harness {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
    },
    /// Characteristic vectors of `Φ, Φ², …, Φ^K`.
    Chain { file: PathBuf, k: usize },
    /// SVG of the depth-k cylinders.
    Render { file: PathBuf },
}

/// Text written by a command and whether its content is only provisional.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub provisional: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.provisional {
            2
        } else {
            0
        }
    }
}

pub fn load(path: &Path) -> Result<IfsSystem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_document(&text).map_err(|source| CliError::Document {
        path: path.to_path_buf(),
        source,
    })
}

/// `--budget` wins over the environment, which wins over the default.
pub fn budget_from(flag: Option<usize>, env: Option<&str>) -> Result<Budget, CliError> {
    let nodes = match (flag, env) {
        (Some(n), _) => Some(n),
        (None, Some(v)) => Some(
            v.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{BUDGET_ENV} must be a positive integer, got {v:?}")))?,
        ),
        (None, None) => None,
    };
    match nodes {
        Some(0) => Err(CliError::Usage("the node budget must be positive".into())),
        Some(n) => Ok(Budget::default().with_nodes(n)),
        None => Ok(Budget::default()),
    }
}

fn render<T: Serialize + std::fmt::Display>(value: &T, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialize") + "\n",
        Format::Text => value.to_string(),
    }
}

#[derive(Serialize)]
struct Comparison {
    order: OrderResult,
    deciding_index: Option<usize>,
    first: String,
    second: String,
    provisional: bool,
}

impl std::fmt::Display for Comparison {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.order)?;
        if let Some(n) = self.deciding_index {
            write!(f, ", deciding index {n}")?;
        }
        writeln!(f)?;
        writeln!(f, "first:  {}", self.first)?;
        writeln!(f, "second: {}", self.second)?;
        if self.provisional {
            writeln!(f, "provisional: a partition has undecided pairs")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct ChainOutput<'a> {
    chain: &'a ifsx_core::harness::PowerChain,
    strictly_increasing: bool,
}

impl std::fmt::Display for ChainOutput<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for link in &self.chain.links {
            write!(f, "γ(Φ^{}) = {}", link.power, link.gamma)?;
            if let Some(o) = &link.next {
                write!(f, "  {o} than the next")?;
                if let Some(n) = link.deciding_index {
                    write!(f, " (index {n})")?;
                }
            }
            writeln!(f)?;
        }
        writeln!(f, "strictly increasing: {}", self.strictly_increasing)
    }
}

pub fn run(cli: &Cli, env_budget: Option<&str>) -> Result<Outcome, CliError> {
    let budget = budget_from(cli.common.budget, env_budget)?;
    let format = cli.common.format;
    let outcome = match &cli.command {
        Command::Analyze { file } => {
            let report = AnalysisReport::build(&load(file)?, &budget)?;
            Outcome {
                output: render(&report, format),
                provisional: report.is_provisional(),
            }
        }
        Command::Gamma { file } => {
            let a = analyze(&load(file)?, &budget)?;
            let output = match format {
                Format::Json => serde_json::to_string_pretty(&a.gamma).expect("vectors serialize") + "\n",
                Format::Text => format!("{}\n", a.gamma),
            };
            Outcome {
                output,
                provisional: a.gamma.is_provisional(),
            }
        }
        Command::Compare { first, second, what } => match what {
            Quantity::Gamma => {
                let x = analyze(&load(first)?, &budget)?.gamma;
                let y = analyze(&load(second)?, &budget)?.gamma;
                let (order, deciding_index) = compare_at(&x, &y);
                let provisional = x.is_provisional()
                    || y.is_provisional()
                    || matches!(order, OrderResult::Incomparable { .. });
                let c = Comparison {
                    order,
                    deciding_index,
                    first: x.to_string(),
                    second: y.to_string(),
                    provisional,
                };
                Outcome {
                    output: render(&c, format),
                    provisional,
                }
            }
        },
        Command::Compose { phi, psi } => Outcome {
            output: serialize_document(&load(phi)?.compose_within(&load(psi)?, &budget)?)?,
            provisional: false,
        },
        Command::Power { file, k } => Outcome {
            output: serialize_document(&load(file)?.power_within(*k, &budget)?)?,
            provisional: false,
        },
        Command::Harness { phi, psi } => {
            let report = contradiction_trace(&load(phi)?, &load(psi)?, &budget);
            Outcome {
                output: render(&report, format),
                provisional: report.is_provisional(),
            }
        }
        Command::Chain { file, k } => {
            let chain = power_chain(&load(file)?, *k, &budget)?;
            let out = ChainOutput {
                chain: &chain,
                strictly_increasing: chain.strictly_increasing(),
            };
            Outcome {
                output: render(&out, format),
                provisional: chain.is_provisional() || !chain.strictly_increasing(),
            }
        }
        Command::Render { file } => Outcome {
            output: render_svg(&load(file)?, cli.common.depth.unwrap_or(4), &budget)?,
            provisional: false,
        },
    };
    if let Some(path) = &cli.common.out {
        std::fs::write(path, &outcome.output).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        return Ok(Outcome {
            output: String::new(),
            provisional: outcome.provisional,
        });
    }
    Ok(outcome)
}
