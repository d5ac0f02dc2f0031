//! Batch front end for bispan computations: reads diagram documents, runs
//! constructions and check suites, and writes text, JSON or dot output.

pub mod commands;
pub mod document;

use std::path::PathBuf;

use bispan_core::checks::CheckConfig;
use clap::{Parser, Subcommand, ValueEnum};

use commands::{Failure, Format};
use document::{Diagnostic, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
    Dot,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Dot => Format::Dot,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bispan", version, about = "Compose, evaluate and check bispans of finite sets and G-sets")]
pub struct Cli {
    /// Diagram document (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Semiring for `eval`: nat, int, bool, tropical, poly, or an alias
    /// declared in the document.
    #[arg(long, global = true, default_value = "nat")]
    pub semiring: String,
    /// Group id from the document, or a built-in group such as C2 or S3.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Largest carrier size for check suites; grid bound for `degree`.
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    /// Seed for randomized suites; BISPAN_SEED takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: FormatArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Composite of two bispans, first then second, with its canonical form.
    Compose { first: String, second: String },
    /// Evaluates a bispan on a vector of semiring values.
    Eval { bispan: String, values: Vec<String> },
    /// Distributivity diagram of `l` and `f`.
    Dist { l: String, f: String },
    /// Measured polynomial degree of a bispan or of the norm of a morphism.
    Degree { id: String },
    /// Double-coset table for subgroups H, K of L.
    Cosets {
        #[arg(long)]
        h: String,
        #[arg(long)]
        k: String,
        #[arg(long)]
        l: String,
    },
    /// Norm of a Burnside element along G/H -> G/K.
    Norm {
        #[arg(long)]
        h: String,
        #[arg(long)]
        k: String,
        /// Orbit sum over G/H such as `2*e` or `1*C2 + 3*e`.
        #[arg(long, default_value = "1*e")]
        element: String,
    },
    /// Runs an invariant suite.
    Check {
        suite: String,
        /// Number of randomized cases.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Renders the whole document.
    Render,
}

/// Exit code and text for one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn load(cli: &Cli) -> Result<Option<Model>, Failure> {
    let Some(path) = &cli.input else { return Ok(None) };
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(Diagnostic { message: format!("cannot read: {e}"), file: Some(name.clone()), position: None }))?;
    Model::load(&text, Some(&name)).map(Some).map_err(Failure::Usage)
}

fn require(model: Option<Model>) -> Result<Model, Failure> {
    model.ok_or_else(|| Failure::Usage(Diagnostic::new("this command needs --input")))
}

fn dispatch(cli: &Cli, env_seed: Option<&str>) -> Result<String, Failure> {
    let format = Format::from(cli.format);
    let model = load(cli)?;
    match &cli.command {
        Command::Compose { first, second } => commands::compose(&require(model)?, first, second, format),
        Command::Eval { bispan, values } => commands::eval(&require(model)?, bispan, &cli.semiring, values),
        Command::Dist { l, f } => commands::dist(&require(model)?, l, f, format),
        Command::Degree { id } => commands::degree(&require(model)?, id, cli.max_size),
        Command::Cosets { h, k, l } => {
            let group = cli.group.as_deref().ok_or_else(|| Failure::Usage(Diagnostic::new("cosets needs --group")))?;
            commands::cosets(model.as_ref(), group, h, k, l, format)
        }
        Command::Norm { h, k, element } => {
            let group = cli.group.as_deref().ok_or_else(|| Failure::Usage(Diagnostic::new("norm needs --group")))?;
            commands::norm(model.as_ref(), group, h, k, element, format)
        }
        Command::Check { suite, samples } => {
            let seed = match env_seed {
                Some(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Usage(Diagnostic::new(format!("BISPAN_SEED must be an integer, got '{s}'"))))?,
                None => cli.seed,
            };
            let group = match &cli.group {
                Some(id) => Some(commands::lookup_group(model.as_ref(), id)?.1),
                None => None,
            };
            let config = CheckConfig { max_size: cli.max_size.unwrap_or(3), group, seed, samples: *samples };
            commands::check(suite, &config, format)
        }
        Command::Render => commands::render(&require(model)?, format),
    }
}

/// Runs one parsed invocation. `env_seed` is the value of `BISPAN_SEED`.
pub fn run(cli: &Cli, env_seed: Option<&str>) -> Outcome {
    match dispatch(cli, env_seed) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(Failure::Check(stdout)) => Outcome { code: 1, stdout, stderr: String::new() },
        Err(Failure::Usage(d)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {d}\n") },
    }
}
