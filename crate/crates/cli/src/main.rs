//! `relwsd`: corpus normalization, relevance-matrix construction, lexicon
//! validation, cascade disambiguation, evaluation and pseudoword
//! benchmarks.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "relwsd", version, about = "Relevance-matrix word sense disambiguation")]
pub struct Cli {
    /// TOML file with default values for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize a directory of raw text into token-stream files.
    Normalize(NormalizeArgs),
    /// Build the vocabulary and relevance matrix from token streams.
    BuildMatrix(BuildMatrixArgs),
    /// Lexicon utilities.
    Lexicon {
        #[command(subcommand)]
        command: LexiconCommand,
    },
    /// Run a heuristic cascade over instances.
    Disambiguate(DisambiguateArgs),
    /// Score an answer file against a gold standard.
    Evaluate(EvaluateArgs),
    /// Generate a pseudoword benchmark from a raw corpus.
    Pseudoword(PseudowordArgs),
    /// Produce random or first-sense baseline answers.
    Baseline(BaselineArgs),
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    /// Directory of raw text documents (or a single file).
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Output directory for `.tok` files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Stopword list (one word per line); defaults to the shipped list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Keep documents regardless of the English stopword-ratio check.
    #[arg(long)]
    pub keep_all: bool,
}

#[derive(Debug, Args)]
pub struct BuildMatrixArgs {
    /// Directory of `.tok` files written by `normalize`.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Matrix output; a `.tsv` extension selects the text format. The
    /// vocabulary is written beside it as `<stem>.vocab.tsv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub vocab_size: Option<usize>,
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum LexiconCommand {
    /// Validate a lexicon file and list every violation.
    Check {
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        stopwords: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl From<Switch> for bool {
    fn from(s: Switch) -> bool {
        s == Switch::On
    }
}

#[derive(Debug, Args)]
pub struct DisambiguateArgs {
    /// Relevance matrix; its vocabulary is read from beside it.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub cascade: Option<PathBuf>,
    /// Instances as JSON lines.
    #[arg(long)]
    pub instances: Option<PathBuf>,
    /// Answer file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print each instance's per-step trace to standard error.
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    #[arg(long)]
    pub cutoff: Option<f64>,
    #[arg(long)]
    pub max_senses: Option<usize>,
    #[arg(long)]
    pub expand_depth: Option<usize>,
    #[arg(long)]
    pub radius_noun: Option<usize>,
    #[arg(long)]
    pub radius_verb: Option<usize>,
    #[arg(long)]
    pub radius_adj: Option<usize>,
    #[arg(long)]
    pub radius_adv: Option<usize>,
    #[arg(long, value_enum)]
    pub pos_compat: Option<Switch>,
    #[arg(long, value_enum)]
    pub supervised: Option<Switch>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub answers: Option<PathBuf>,
    #[arg(long)]
    pub gold: Option<PathBuf>,
    /// Instance file whose size is the recall denominator.
    #[arg(long)]
    pub instances: Option<PathBuf>,
    /// Recall denominator (default: the number of gold entries).
    #[arg(long, conflicts_with = "instances")]
    pub total: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
    /// Report file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PseudowordArgs {
    /// Directory of raw text documents.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub word_a: Option<String>,
    #[arg(long)]
    pub word_b: Option<String>,
    /// Share of the corpus held out for instances.
    #[arg(long)]
    pub holdout: Option<f64>,
    /// Words per synthesized gloss.
    #[arg(long)]
    pub gloss_size: Option<usize>,
    /// Output directory: instances.jsonl, gold.txt, lexicon.json, train/.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineKind {
    Random,
    FirstSense,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long, value_enum)]
    pub kind: BaselineKind,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub instances: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
}

/// Why a run failed, mapped to the exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad invocation: exit 1.
    Usage(String),
    /// Bad or inconsistent data: exit 2.
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<relwsd::Error> for Failure {
    fn from(e: relwsd::Error) -> Self {
        Failure::Data(e.into())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(|e| Failure::Usage(format!("{e:#}")))?,
        None => RunConfig::default(),
    };
    if let Some(jobs) = cli.jobs.or(config.jobs) {
        if jobs == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let seed = cli.seed.or(config.seed).unwrap_or(0);
    match cli.command {
        Command::Normalize(args) => commands::normalize(args, &config),
        Command::BuildMatrix(args) => commands::build_matrix(args, &config),
        Command::Lexicon {
            command: LexiconCommand::Check { lexicon, stopwords },
        } => commands::lexicon_check(lexicon, stopwords, &config),
        Command::Disambiguate(args) => commands::disambiguate(args, &config),
        Command::Evaluate(args) => commands::evaluate(args, &config),
        Command::Pseudoword(args) => commands::pseudoword(args, &config, seed),
        Command::Baseline(args) => commands::baseline(args, &config, seed),
    }
}
