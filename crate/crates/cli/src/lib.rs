//! The `pathcat` command line: argument parsing, field selection and the
//! JSON/table report.

mod commands;
pub mod report;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use pathcat::field::{Fp, Rational, SUPPORTED_PRIMES};
use pathcat::onepoint::Property;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Rational,
    Prime(u64),
}

impl FromStr for FieldChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "rat" {
            return Ok(FieldChoice::Rational);
        }
        let p = s.strip_prefix("fp:").ok_or_else(|| format!("expected `rat` or `fp:<p>`, got `{s}`"))?;
        let p: u64 = p.parse().map_err(|_| format!("`{p}` is not a number"))?;
        if SUPPORTED_PRIMES.contains(&p) {
            Ok(FieldChoice::Prime(p))
        } else {
            Err(format!("p = {p} is not one of the supported primes {SUPPORTED_PRIMES:?}"))
        }
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Rational => f.write_str("rat"),
            FieldChoice::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pathcat", version, about = "Exact computations in path categories of quivers with relations")]
pub struct Cli {
    /// Scalars: `rat` or `fp:<p>`.
    #[arg(long, global = true, default_value = "rat")]
    pub field: FieldChoice,
    /// Replaces the ranges of every `family` line, e.g. `1..4` or `1..6,-4..4`.
    #[arg(long, global = true)]
    pub window: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print the report as JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Basis of the hom space between two vertices.
    Hom { pres: PathBuf, a: String, b: String },
    /// Paths between two vertices, ignoring relations.
    Paths {
        pres: PathBuf,
        a: String,
        b: String,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Product presentation, optionally checked against the tensor product.
    Tensor {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        verify: bool,
    },
    /// Augmented presentation of a triangular matrix category.
    Augment {
        t: PathBuf,
        u: PathBuf,
        bimod: PathBuf,
        #[arg(long)]
        emit: bool,
        #[arg(long)]
        verify: bool,
        /// Second presentation whose hom dimensions are compared by vertex id.
        #[arg(long)]
        compare: Option<PathBuf>,
        /// Composition triples sampled by `--verify`.
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Heredity conditions for a filtration.
    Qh {
        pres: PathBuf,
        #[arg(long)]
        filtration: PathBuf,
        /// Also check the heredity ideals one by one.
        #[arg(long)]
        direct: bool,
    },
    /// Whether a module is filtered by standard modules.
    Delta {
        pres: PathBuf,
        #[arg(long)]
        filtration: PathBuf,
        #[arg(long)]
        module: PathBuf,
    },
    /// Quasi-heredity of a triangular matrix category from its corners.
    Triqh {
        t: PathBuf,
        u: PathBuf,
        bimod: PathBuf,
        #[arg(long = "filtT")]
        filt_t: PathBuf,
        #[arg(long = "filtU")]
        filt_u: PathBuf,
        /// Object pairs sampled per layer for the block formula.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
    },
    /// One-point extension functors and checks.
    Ope(OpeArgs),
}

#[derive(Debug, Args)]
pub struct OpeArgs {
    pub pres: PathBuf,
    #[arg(long)]
    pub star: String,
    /// restrict, extend, ext-seq, torsion-seq, verify:<property>, verify:all or tilting.
    #[arg(long)]
    pub action: OpeAction,
    #[arg(long)]
    pub module: Option<PathBuf>,
    /// Modules sampled on each side for `verify`.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    /// Short exact sequences sampled for `verify:r-exact`.
    #[arg(long, default_value_t = 100)]
    pub sequences: usize,
    #[arg(long, default_value_t = 2)]
    pub ext_degree: usize,
    #[arg(long, default_value_t = 12)]
    pub pd_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpeAction {
    Restrict,
    Extend,
    ExtSeq,
    TorsionSeq,
    /// `None` runs every property.
    Verify(Option<Property>),
    Tilting,
}

impl FromStr for OpeAction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "restrict" => Ok(OpeAction::Restrict),
            "extend" => Ok(OpeAction::Extend),
            "ext-seq" => Ok(OpeAction::ExtSeq),
            "torsion-seq" => Ok(OpeAction::TorsionSeq),
            "tilting" => Ok(OpeAction::Tilting),
            "verify:all" => Ok(OpeAction::Verify(None)),
            _ => match s.strip_prefix("verify:") {
                Some(p) => p.parse().map(|p| OpeAction::Verify(Some(p))).map_err(|e| e.to_string()),
                None => Err(format!("unknown action `{s}`")),
            },
        }
    }
}

impl fmt::Display for OpeAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpeAction::Restrict => f.write_str("restrict"),
            OpeAction::Extend => f.write_str("extend"),
            OpeAction::ExtSeq => f.write_str("ext-seq"),
            OpeAction::TorsionSeq => f.write_str("torsion-seq"),
            OpeAction::Verify(None) => f.write_str("verify:all"),
            OpeAction::Verify(Some(p)) => write!(f, "verify:{p}"),
            OpeAction::Tilting => f.write_str("tilting"),
        }
    }
}

/// Rewrites the ranges of every `family ... window <ranges> [suffix s]` line.
pub fn apply_window(text: &str, window: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for line in text.lines() {
        let trimmed = line.trim_start();
        match trimmed.strip_prefix("family").and_then(|rest| rest.split_once(" window ")) {
            Some((head, tail)) => {
                let suffix = tail.find(" suffix ").map_or("", |k| &tail[k..]);
                out.push_str(&format!("family{head} window {window}{suffix}"));
            }
            None => out.push_str(line),
        }
        out.push('\n');
    }
    out
}

/// The `<kind> <ranges>` part of each `family` line.
pub fn family_windows(text: &str) -> Vec<String> {
    text.lines()
        .filter_map(|line| {
            let rest = line.split('#').next()?.trim().strip_prefix("family")?;
            let (kind, tail) = rest.split_once(" window ")?;
            let ranges = tail.split(" suffix ").next()?.trim();
            Some(format!("{} {ranges}", kind.trim()))
        })
        .collect()
}

/// Runs a parsed command line; `argv` is echoed into the report.
pub fn execute(cli: &Cli, argv: Vec<String>) -> Result<Report, CliError> {
    let mut ctx = commands::Ctx { window: cli.window.clone(), windows: Vec::new(), rng: ChaCha8Rng::seed_from_u64(cli.seed) };
    let checks = match cli.field {
        FieldChoice::Rational => commands::run::<Rational>(&mut ctx, &cli.command)?,
        FieldChoice::Prime(p) => match p {
            2 => commands::run::<Fp<2>>(&mut ctx, &cli.command)?,
            3 => commands::run::<Fp<3>>(&mut ctx, &cli.command)?,
            5 => commands::run::<Fp<5>>(&mut ctx, &cli.command)?,
            7 => commands::run::<Fp<7>>(&mut ctx, &cli.command)?,
            11 => commands::run::<Fp<11>>(&mut ctx, &cli.command)?,
            13 => commands::run::<Fp<13>>(&mut ctx, &cli.command)?,
            101 => commands::run::<Fp<101>>(&mut ctx, &cli.command)?,
            32003 => commands::run::<Fp<32003>>(&mut ctx, &cli.command)?,
            65521 => commands::run::<Fp<65521>>(&mut ctx, &cli.command)?,
            1_000_003 => commands::run::<Fp<1_000_003>>(&mut ctx, &cli.command)?,
            1_000_000_007 => commands::run::<Fp<1_000_000_007>>(&mut ctx, &cli.command)?,
            other => return Err(CliError::Usage(format!("no field instance for p = {other}"))),
        },
    };
    let window = match (&cli.window, ctx.windows.is_empty()) {
        (Some(w), _) => w.clone(),
        (None, true) => "none".into(),
        (None, false) => ctx.windows.join("; "),
    };
    Ok(Report::new(argv, cli.field.to_string(), window, cli.seed, checks))
}

/// What the binary prints and returns.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (without the program name) and runs them.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("pathcat".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli, argv) {
        Ok(report) => Outcome {
            code: report.exit_code(),
            stdout: if cli.json { report.to_json() } else { report.to_table() },
            stderr: String::new(),
        },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
