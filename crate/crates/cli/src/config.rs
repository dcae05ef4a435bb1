use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Classify,
    Witness,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Classify => "classify",
            Command::Witness => "witness",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

/// Everything a single invocation depends on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub directive: Option<String>,
    pub register: BTreeMap<String, String>,
    pub max_length: usize,
    pub depth: Option<usize>,
    pub window: Option<usize>,
    pub nmax: usize,
    pub n: Option<usize>,
    pub only: Vec<String>,
    pub m2_fixture: Option<PathBuf>,
    pub format: Format,
    /// Not part of the report: output goes to stdout when unset.
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            directive: None,
            register: BTreeMap::new(),
            max_length: DEFAULT_MAX_LENGTH,
            depth: None,
            window: None,
            nmax: DEFAULT_NMAX,
            n: None,
            only: Vec::new(),
            m2_fixture: None,
            format: Format::Json,
            out: None,
        }
    }
}

pub const DEFAULT_MAX_LENGTH: usize = 40;
pub const DEFAULT_NMAX: usize = 2;

#[derive(Debug, Parser)]
#[command(name = "sadic", version, about = "Balance analysis of S-adic and Thue-Morse-Sturmian languages")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Sample a level-0 language and report its imbalance and frequencies.
    Analyze(AnalyzeArgs),
    /// Decide factor-balancedness of a sequence over {L, M, R}.
    Classify(ClassifyArgs),
    /// Thue-Morse witness pairs with their length-2 abelianizations.
    Witness(WitnessArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Directive `PREFIX|PERIOD` over registered names, e.g. `LMR|ML`.
    #[arg(long)]
    pub directive: String,
    /// Extra substitution `NAME=SPEC`, e.g. `F=0->01;1->0`.
    #[arg(long, value_name = "NAME=SPEC")]
    pub register: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_LENGTH, value_parser = positive)]
    pub max_length: usize,
    #[arg(long, value_parser = positive)]
    pub depth: Option<usize>,
    #[arg(long, value_parser = positive)]
    pub window: Option<usize>,
    /// Largest factor length measured.
    #[arg(long, default_value_t = DEFAULT_NMAX, value_parser = positive)]
    pub nmax: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub directive: String,
    #[arg(long, value_name = "NAME=SPEC")]
    pub register: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// Index of the pair `(w_n, w'_n)`.
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated check names or name prefixes.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// JSON file with the expected M2 table and incidence matrix.
    #[arg(long)]
    pub m2_fixture: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn registrations(items: &[String]) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for item in items {
        let (name, spec) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--register expects NAME=SPEC, got {item:?}")))?;
        let name = name.trim();
        if name.chars().count() != 1 || !name.chars().all(char::is_alphanumeric) {
            return Err(CliError::Usage(format!("substitution names are single characters, got {name:?}")));
        }
        if out.insert(name.to_string(), spec.to_string()).is_some() {
            return Err(CliError::Usage(format!("{name} registered twice")));
        }
    }
    Ok(out)
}

impl TryFrom<Cli> for RunConfig {
    type Error = CliError;

    fn try_from(cli: Cli) -> Result<Self, CliError> {
        let (mut config, output) = match cli.command {
            Sub::Analyze(a) => {
                let mut c = RunConfig::new(Command::Analyze);
                c.directive = Some(a.directive);
                c.register = registrations(&a.register)?;
                c.max_length = a.max_length;
                c.depth = a.depth;
                c.window = a.window;
                c.nmax = a.nmax;
                (c, a.output)
            }
            Sub::Classify(a) => {
                let mut c = RunConfig::new(Command::Classify);
                c.directive = Some(a.directive);
                c.register = registrations(&a.register)?;
                (c, a.output)
            }
            Sub::Witness(a) => {
                let mut c = RunConfig::new(Command::Witness);
                c.n = Some(a.n);
                (c, a.output)
            }
            Sub::Verify(a) => {
                let mut c = RunConfig::new(Command::Verify);
                c.only = a.only.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                c.m2_fixture = a.m2_fixture;
                (c, a.output)
            }
        };
        config.format = output.format;
        config.out = output.out;
        Ok(config)
    }
}
