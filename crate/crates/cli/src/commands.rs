use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use moodscope::corpus::{
    default_stopwords, delivery_histogram, filter_english, parse_corpus, parse_word_list, word_frequency, write_corpus,
    write_rejections_csv, write_wordfreq_csv, CorpusFormat, EmailRecord, RejectReason, Rejection,
};
use moodscope::lexicon::{compile, load_lexicon, CompiledMatcher, LexiconError, MoodLexicon};
use moodscope::scoring::{bucketize, score_records, write_scores_csv, Buckets, YearBucket};
use moodscope::stats::{build_trend, pairwise_ks_with, Significance, StatsError};
use moodscope::synth::{generate_corpus_with, parse_synth_config};
use moodscope::textproc::tokens;
use moodscope::Exec;

use crate::config::PipelineConfig;
use crate::error::CliError;
use crate::svg::render_trend;

/// `println!` that ignores a closed stdout (output piped into `head`).
macro_rules! outln {
    ($($t:tt)*) => {{
        let _ = writeln!(io::stdout().lock(), $($t)*);
    }};
}

pub fn exec_for(threads: Option<usize>) -> Exec {
    if threads == Some(1) {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io("create", path, e))
}

fn write_with<E: std::fmt::Display>(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> Result<(), E>,
) -> Result<(), CliError> {
    let mut w = create(path)?;
    f(&mut w).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    w.flush().map_err(|e| CliError::io("write", path, e))
}

fn output_dir(cfg: &PipelineConfig) -> Result<&Path, CliError> {
    let dir = cfg.output_dir.as_path();
    fs::create_dir_all(dir).map_err(|e| CliError::io("create directory", dir, e))?;
    Ok(dir)
}

/// Records that survived ingestion, and what was dropped on the way.
pub struct Ingested {
    pub records: Vec<EmailRecord>,
    pub rejections: Vec<Rejection>,
    pub other_origin: usize,
    pub out_of_range: usize,
    pub rejected_language: usize,
    pub flagged_short: usize,
}

impl Ingested {
    fn report(&self) {
        eprintln!(
            "ingested {} records ({} unparseable, {} other origin year, {} outside year range, {} non-English, {} too short to judge)",
            self.records.len(),
            self.rejections.len(),
            self.other_origin,
            self.out_of_range,
            self.rejected_language,
            self.flagged_short
        );
    }
}

pub fn ingest(cfg: &PipelineConfig) -> Result<Ingested, CliError> {
    let path = cfg.corpus()?;
    let format = cfg.corpus_format.unwrap_or_else(|| CorpusFormat::from_path(path));
    let file = File::open(path).map_err(|e| CliError::io("open corpus", path, e))?;
    let parsed =
        parse_corpus(BufReader::new(file), format).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;

    let total = parsed.records.len();
    let mut records: Vec<EmailRecord> = parsed
        .records
        .into_iter()
        .filter(|r| cfg.origin_year.is_none_or(|y| r.compose_year() == y))
        .collect();
    let other_origin = total - records.len();
    let before = records.len();
    records.retain(|r| cfg.in_year_range(r.delivery_year()));
    let out_of_range = before - records.len();

    let part = filter_english(records, cfg.english_threshold);
    Ok(Ingested {
        rejected_language: part.rejected.len(),
        flagged_short: part.flagged_short.len(),
        records: part.kept,
        rejections: parsed.rejections,
        other_origin,
        out_of_range,
    })
}

fn read_lexicon(path: Option<&Path>) -> Result<MoodLexicon, CliError> {
    let Some(path) = path else {
        return Ok(MoodLexicon::default_lexicon());
    };
    let file = File::open(path).map_err(|e| CliError::io("open lexicon", path, e))?;
    load_lexicon(file).map_err(|e| match e {
        LexiconError::Io(e) => CliError::io("read lexicon", path, e),
        LexiconError::Invalid(issues) => {
            let lines: Vec<String> = issues.iter().map(|i| format!("  {i}")).collect();
            CliError::Data(format!(
                "lexicon {} is invalid ({} issue(s)):\n{}",
                path.display(),
                issues.len(),
                lines.join("\n")
            ))
        }
    })
}

pub fn load_matcher(cfg: &PipelineConfig) -> Result<CompiledMatcher, CliError> {
    let matcher = compile(&read_lexicon(cfg.lexicon_path.as_deref())?);
    for w in matcher.warnings() {
        eprintln!("warning: {}", w.to_line());
    }
    Ok(matcher)
}

pub fn cmd_stats(cfg: &PipelineConfig) -> Result<(), CliError> {
    let ing = ingest(cfg)?;
    ing.report();
    if ing.records.is_empty() {
        eprintln!("warning: no records left after ingestion; writing empty tables");
    }
    let dir = output_dir(cfg)?;

    let mut stats = delivery_histogram(&ing.records);
    stats.rejected_language = ing.rejected_language as u64;
    stats.rejected_encoding = ing
        .rejections
        .iter()
        .filter(|r| r.reason == RejectReason::UnknownEncoding)
        .count() as u64;

    let stopwords: HashSet<String> = match &cfg.stopwords_path {
        None => default_stopwords(),
        Some(p) => parse_word_list(&fs::read_to_string(p).map_err(|e| CliError::io("read stopwords", p, e))?),
    };
    let ranked = word_frequency(&ing.records, cfg.top_n, &stopwords);

    write_with(&dir.join("histogram.csv"), |w| stats.write_histogram_csv(w))?;
    write_with(&dir.join("lag.csv"), |w| stats.write_lag_csv(w))?;
    write_with(&dir.join("wordfreq.csv"), |w| write_wordfreq_csv(&ranked, w))?;
    write_with(&dir.join("rejections.csv"), |w| {
        write_rejections_csv(&ing.rejections, w)
    })?;
    write_with(&dir.join("corpus_stats.json"), |w| {
        serde_json::to_writer_pretty(&mut *w, &stats)?;
        writeln!(w).map_err(serde_json::Error::io)
    })?;

    outln!("records\t{}", stats.total_records);
    for (year, n) in &stats.per_year_counts {
        outln!("{year}\t{n}");
    }
    Ok(())
}

/// On-disk form of the per-year buckets.
#[derive(Debug, Serialize, Deserialize)]
pub struct BucketsFile {
    pub lexicon_version: String,
    pub buckets: Vec<YearBucket>,
}

pub fn load_buckets(path: &Path) -> Result<Buckets, CliError> {
    let file = File::open(path).map_err(|e| CliError::io("open buckets", path, e))?;
    let parsed: BucketsFile = serde_json::from_reader(BufReader::new(file))
        .map_err(|e| CliError::Data(format!("{}: not a buckets file: {e}", path.display())))?;
    let mut out = Buckets::new();
    for b in parsed.buckets {
        b.validate()
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let year = b.year;
        if out.insert(year, b).is_some() {
            return Err(CliError::Data(format!("{}: year {year} appears twice", path.display())));
        }
    }
    Ok(out)
}

fn score_inline(
    cfg: &PipelineConfig,
    exec: Exec,
) -> Result<(Vec<moodscope::scoring::ScoredEmail>, Buckets, String), CliError> {
    let matcher = load_matcher(cfg)?;
    let ing = ingest(cfg)?;
    ing.report();
    let scored = score_records(&ing.records, &matcher, exec);
    let buckets = bucketize(&scored);
    Ok((scored, buckets, matcher.version().to_owned()))
}

pub fn cmd_score(cfg: &PipelineConfig, exec: Exec) -> Result<(), CliError> {
    let (scored, buckets, version) = score_inline(cfg, exec)?;
    let dir = output_dir(cfg)?;
    write_with(&dir.join("scores.csv"), |w| write_scores_csv(&scored, w))?;
    let file = BucketsFile {
        lexicon_version: version,
        buckets: buckets.into_values().collect(),
    };
    write_with(&dir.join("buckets.json"), |w| {
        serde_json::to_writer(&mut *w, &file)?;
        writeln!(w).map_err(serde_json::Error::io)
    })?;

    let zero: u64 = file.buckets.iter().map(|b| b.zero_match_count).sum();
    let vectors: usize = file.buckets.iter().map(YearBucket::len).sum();
    outln!("scored\t{}", scored.len());
    outln!("vectors\t{vectors}");
    outln!("zero_match\t{zero}");
    outln!("year\tvectors\tzero_match");
    for b in &file.buckets {
        outln!("{}\t{}\t{}", b.year, b.len(), b.zero_match_count);
    }
    Ok(())
}

pub fn cmd_analyze(cfg: &PipelineConfig, buckets_path: Option<&Path>, exec: Exec) -> Result<(), CliError> {
    let mut buckets = match buckets_path {
        Some(p) => load_buckets(p)?,
        None => score_inline(cfg, exec)?.1,
    };
    buckets.retain(|&y, _| cfg.in_year_range(y));
    let non_empty = buckets.values().filter(|b| !b.is_empty()).count();
    if non_empty < 2 {
        return Err(CliError::Data(format!(
            "need at least 2 non-empty year buckets to compare, found {non_empty}"
        )));
    }
    let dir = output_dir(cfg)?;

    outln!("dimension\tpairs\tsignificant\tmarginal");
    for &dim in &cfg.dimensions {
        let matrix =
            pairwise_ks_with(&buckets, dim, cfg.thresholds, exec).map_err(|e| CliError::Data(format!("{dim}: {e}")))?;
        write_with(&dir.join(format!("ks_{}.csv", dim.label())), |w| matrix.write_csv(w))?;
        outln!(
            "{}\t{}\t{}\t{}",
            dim.label(),
            matrix.len(),
            matrix.count(Significance::Significant),
            matrix.count(Significance::Marginal)
        );

        match build_trend(&buckets, dim) {
            Ok(trend) => {
                write_with(&dir.join(format!("trend_{}.csv", dim.label())), |w| trend.write_csv(w))?;
                if cfg.emit_svg {
                    let svg = render_trend(&trend, Some(&matrix), cfg.thresholds);
                    let path = dir.join(format!("trend_{}.svg", dim.label()));
                    fs::write(&path, svg).map_err(|e| CliError::io("write", &path, e))?;
                }
            }
            Err(e @ StatsError::TooFewBuckets { .. }) => {
                eprintln!("warning: {dim}: no trend line: {e}");
            }
            Err(e) => return Err(CliError::Data(format!("{dim}: {e}"))),
        }
    }
    Ok(())
}

pub fn cmd_synth(
    spec: &Path,
    seed: u64,
    out: &Path,
    format: Option<CorpusFormat>,
    lexicon: Option<&Path>,
    exec: Exec,
) -> Result<(), CliError> {
    let text = fs::read_to_string(spec).map_err(|e| CliError::io("read spec", spec, e))?;
    let cfg = parse_synth_config(&text).map_err(|e| CliError::Usage(format!("{}: {e}", spec.display())))?;
    let lex = read_lexicon(lexicon)?;
    let records = generate_corpus_with(&cfg, &lex, seed, exec)
        .map_err(|e| CliError::Usage(format!("{}: {e}", spec.display())))?;
    let format = format.unwrap_or_else(|| CorpusFormat::from_path(out));
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io("create directory", parent, e))?;
    }
    write_with(out, |w| write_corpus(&records, format, w))?;

    outln!("records\t{}", records.len());
    outln!("years\t{}-{}", cfg.year_min, cfg.year_max);
    outln!("emails_per_year\t{}", cfg.emails_per_year);
    outln!("seed\t{seed}");
    Ok(())
}

/// Prints `surface<TAB>stem` for every token of the arguments, or of
/// standard input when there are none.
pub fn cmd_stem(words: &[String]) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut emit = |text: &str| -> io::Result<()> {
        for t in tokens(text) {
            writeln!(out, "{}\t{}", t.surface, t.stem)?;
        }
        Ok(())
    };
    let result = if words.is_empty() {
        io::stdin().lock().lines().try_for_each(|l| emit(&l?))
    } else {
        words.iter().try_for_each(|w| emit(w))
    };
    match result {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Usage(format!("stem: {e}"))),
        _ => Ok(()),
    }
}
