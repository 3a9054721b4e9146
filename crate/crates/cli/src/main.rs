//! `moodscope`: mood trends in corpora of future-dated messages.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 input data that
//! failed validation.

mod commands;
mod config;
mod error;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use moodscope::corpus::CorpusFormat;

use crate::config::{PipelineConfig, RawConfig};
use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "moodscope",
    version,
    about = "Mood scoring and trend tests for future-dated message corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Delivery-year histogram, mean lag and top-word table.
    Stats(PipelineArgs),
    /// Score every message and write per-message rows and year buckets.
    Score(PipelineArgs),
    /// Pairwise KS tests and trend lines per mood dimension.
    Analyze {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Read buckets written by `score` instead of scoring the corpus.
        #[arg(long)]
        buckets: Option<PathBuf>,
    },
    /// Generate a synthetic corpus from a trend spec.
    Synth {
        /// Spec file (`key = value` lines).
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output corpus file.
        #[arg(long, short)]
        out: PathBuf,
        /// `delimited` or `jsonl`; defaults from the output extension.
        #[arg(long)]
        format: Option<String>,
        #[arg(long = "lexicon-path", alias = "lexicon_path")]
        lexicon_path: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print `token<TAB>stem` for the given words (or standard input).
    Stem { words: Vec<String> },
}

/// Every pipeline config key, as a flag overriding the config file.
#[derive(Args, Default)]
struct PipelineArgs {
    /// Config file of `key = value` lines.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long = "corpus-path", alias = "corpus_path")]
    corpus_path: Option<String>,
    #[arg(long = "corpus-format", alias = "corpus_format")]
    corpus_format: Option<String>,
    #[arg(long = "lexicon-path", alias = "lexicon_path")]
    lexicon_path: Option<String>,
    #[arg(long = "stopwords-path", alias = "stopwords_path")]
    stopwords_path: Option<String>,
    #[arg(long = "origin-year", alias = "origin_year")]
    origin_year: Option<String>,
    #[arg(long = "year-min", alias = "year_min")]
    year_min: Option<String>,
    #[arg(long = "year-max", alias = "year_max")]
    year_max: Option<String>,
    #[arg(long = "english-threshold", alias = "english_threshold")]
    english_threshold: Option<String>,
    #[arg(long = "alpha-significant", alias = "alpha_significant")]
    alpha_significant: Option<String>,
    #[arg(long = "alpha-marginal", alias = "alpha_marginal")]
    alpha_marginal: Option<String>,
    #[arg(long = "output-dir", alias = "output_dir")]
    output_dir: Option<String>,
    #[arg(long = "emit-svg", alias = "emit_svg", num_args = 0..=1, default_missing_value = "true")]
    emit_svg: Option<String>,
    #[arg(long = "top-n", alias = "top_n")]
    top_n: Option<String>,
    #[arg(long)]
    threads: Option<String>,
    /// Comma-separated scales, or `all`.
    #[arg(long)]
    dimensions: Option<String>,
}

impl PipelineArgs {
    fn resolve(&self) -> Result<PipelineConfig, CliError> {
        let mut raw = match &self.config {
            Some(p) => RawConfig::load(p)?,
            None => RawConfig::default(),
        };
        for (key, value) in [
            ("corpus_path", &self.corpus_path),
            ("corpus_format", &self.corpus_format),
            ("lexicon_path", &self.lexicon_path),
            ("stopwords_path", &self.stopwords_path),
            ("origin_year", &self.origin_year),
            ("year_min", &self.year_min),
            ("year_max", &self.year_max),
            ("english_threshold", &self.english_threshold),
            ("alpha_significant", &self.alpha_significant),
            ("alpha_marginal", &self.alpha_marginal),
            ("output_dir", &self.output_dir),
            ("emit_svg", &self.emit_svg),
            ("top_n", &self.top_n),
            ("threads", &self.threads),
            ("dimensions", &self.dimensions),
        ] {
            if let Some(v) = value {
                raw.set(key, v.clone());
            }
        }
        PipelineConfig::from_raw(&raw)
    }
}

/// Runs `f` on a rayon pool of `threads` workers when a count is given.
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?;
        return Ok(pool.install(f));
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(f())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Stats(args) => commands::cmd_stats(&args.resolve()?),
        Command::Score(args) => {
            let cfg = args.resolve()?;
            with_threads(cfg.threads, || {
                commands::cmd_score(&cfg, commands::exec_for(cfg.threads))
            })?
        }
        Command::Analyze { pipeline, buckets } => {
            let cfg = pipeline.resolve()?;
            with_threads(cfg.threads, || {
                commands::cmd_analyze(&cfg, buckets.as_deref(), commands::exec_for(cfg.threads))
            })?
        }
        Command::Synth {
            spec,
            seed,
            out,
            format,
            lexicon_path,
            threads,
        } => {
            if threads == Some(0) {
                return Err(CliError::Usage("threads must be at least 1".into()));
            }
            let format = format
                .map(|f| f.parse::<CorpusFormat>())
                .transpose()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            with_threads(threads, || {
                commands::cmd_synth(
                    &spec,
                    seed,
                    &out,
                    format,
                    lexicon_path.as_deref(),
                    commands::exec_for(threads),
                )
            })?
        }
        Command::Stem { words } => commands::cmd_stem(&words),
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
        Err(e) => {
            eprintln!("moodscope: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
