//! Corpus ingestion, validation, language filtering and descriptive
//! statistics.
//!
//! Two line-oriented input formats are accepted:
//!
//! * delimited: `id<TAB>compose_date<TAB>delivery_date<TAB>body`, dates in
//!   ISO-8601, body with `\t`, `\n`, `\r` and `\\` escaped. Blank lines and
//!   lines starting with `#` are skipped.
//! * JSON lines: one object per line with the keys `id`, `compose_date`,
//!   `delivery_date` and `body`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::{self, BufRead, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use chrono::{Datelike, Months, NaiveDate};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::sig6;
use crate::textproc::tokenize;

const FUNCTION_WORDS: &str = include_str!("../data/function_words.txt");
const STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// Default minimum function-word ratio for a body to count as English.
pub const DEFAULT_ENGLISH_THRESHOLD: f64 = 0.15;

/// Bodies shorter than this are kept by the language filter and flagged.
pub const MIN_JUDGEABLE_TOKENS: usize = 5;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read corpus: {0}")]
    Io(#[from] io::Error),
    #[error("delivery date {delivery} precedes compose date {compose}")]
    DeliveryBeforeCompose { compose: NaiveDate, delivery: NaiveDate },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("unknown corpus format `{0}` (expected `delimited` or `jsonl`)")]
    UnknownFormat(String),
}

/// One message: when it was written, when it is due, and its text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRecord")]
pub struct EmailRecord {
    id: String,
    compose_date: NaiveDate,
    delivery_date: NaiveDate,
    body: String,
}

#[derive(Deserialize)]
struct RawRecord {
    id: String,
    compose_date: NaiveDate,
    delivery_date: NaiveDate,
    body: String,
}

impl TryFrom<RawRecord> for EmailRecord {
    type Error = CorpusError;

    fn try_from(r: RawRecord) -> Result<Self, Self::Error> {
        EmailRecord::new(r.id, r.compose_date, r.delivery_date, r.body)
    }
}

impl EmailRecord {
    pub fn new(
        id: impl Into<String>,
        compose_date: NaiveDate,
        delivery_date: NaiveDate,
        body: impl Into<String>,
    ) -> Result<Self, CorpusError> {
        if delivery_date < compose_date {
            return Err(CorpusError::DeliveryBeforeCompose {
                compose: compose_date,
                delivery: delivery_date,
            });
        }
        Ok(EmailRecord {
            id: id.into(),
            compose_date,
            delivery_date,
            body: body.into(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn compose_date(&self) -> NaiveDate {
        self.compose_date
    }

    pub fn delivery_date(&self) -> NaiveDate {
        self.delivery_date
    }

    pub fn body(&self) -> &str {
        &self.body
    }

    pub fn delivery_year(&self) -> i32 {
        self.delivery_date.year()
    }

    pub fn compose_year(&self) -> i32 {
        self.compose_date.year()
    }

    /// Delivery lag in fractional calendar years.
    pub fn lag_years(&self) -> f64 {
        lag_years(self.compose_date, self.delivery_date)
    }
}

fn anniversary(start: NaiveDate, years: i32) -> NaiveDate {
    // Feb 29 clamps to Feb 28 in non-leap years.
    start
        .checked_add_months(Months::new(12 * years as u32))
        .expect("date within chrono range")
}

/// Whole years between the dates plus the elapsed fraction of the year
/// that follows the last anniversary.
pub fn lag_years(from: NaiveDate, to: NaiveDate) -> f64 {
    if to <= from {
        return 0.0;
    }
    let mut whole = to.year() - from.year();
    while whole > 0 && anniversary(from, whole) > to {
        whole -= 1;
    }
    let last = anniversary(from, whole);
    let next = anniversary(from, whole + 1);
    let span = (next - last).num_days() as f64;
    whole as f64 + (to - last).num_days() as f64 / span
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Delimited,
    JsonLines,
}

impl CorpusFormat {
    /// `.jsonl`, `.ndjson` and `.json` select JSON lines; anything else is
    /// read as delimited.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "ndjson" | "json") => CorpusFormat::JsonLines,
            _ => CorpusFormat::Delimited,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "delimited" | "tsv" => Ok(CorpusFormat::Delimited),
            "jsonl" | "json" | "ndjson" => Ok(CorpusFormat::JsonLines),
            other => Err(CorpusError::UnknownFormat(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    UnknownEncoding,
    DeliveryPrecedesCompose,
    BadDate,
    WrongFieldCount,
    BadEscape,
    BadJson,
    EmptyId,
    NotEnglish,
}

impl RejectReason {
    pub fn code(self) -> &'static str {
        match self {
            RejectReason::UnknownEncoding => "unknown_encoding",
            RejectReason::DeliveryPrecedesCompose => "delivery_precedes_compose",
            RejectReason::BadDate => "bad_date",
            RejectReason::WrongFieldCount => "wrong_field_count",
            RejectReason::BadEscape => "bad_escape",
            RejectReason::BadJson => "bad_json",
            RejectReason::EmptyId => "empty_id",
            RejectReason::NotEnglish => "not_english",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            RejectReason::UnknownEncoding => "unknown character encoding",
            RejectReason::DeliveryPrecedesCompose => "delivery precedes compose",
            RejectReason::BadDate => "unparseable date",
            RejectReason::WrongFieldCount => "wrong number of fields",
            RejectReason::BadEscape => "invalid escape sequence in body",
            RejectReason::BadJson => "malformed JSON object",
            RejectReason::EmptyId => "empty record id",
            RejectReason::NotEnglish => "not English",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

/// A record that did not make it into the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    /// 1-based input line; 0 for records rejected after parsing.
    pub line: usize,
    pub id: Option<String>,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedCorpus {
    pub records: Vec<EmailRecord>,
    pub rejections: Vec<Rejection>,
}

impl ParsedCorpus {
    pub fn rejected(&self, reason: RejectReason) -> usize {
        self.rejections.iter().filter(|r| r.reason == reason).count()
    }
}

/// Parses a corpus stream. Malformed lines become [`Rejection`]s; only an
/// I/O failure aborts.
pub fn parse_corpus<R: BufRead>(mut input: R, format: CorpusFormat) -> Result<ParsedCorpus, CorpusError> {
    let mut out = ParsedCorpus::default();
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if input.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        while matches!(buf.last(), Some(b'\n' | b'\r')) {
            buf.pop();
        }
        let text = match std::str::from_utf8(&buf) {
            Ok(t) => t,
            Err(_) => {
                out.rejections.push(Rejection {
                    line: line_no,
                    id: sniff_id(&buf, format),
                    reason: RejectReason::UnknownEncoding,
                });
                continue;
            }
        };
        if text.trim().is_empty() {
            continue;
        }
        let parsed = match format {
            CorpusFormat::Delimited => {
                if text.starts_with('#') {
                    continue;
                }
                parse_delimited(text)
            }
            CorpusFormat::JsonLines => parse_json(text),
        };
        match parsed {
            Ok(r) => out.records.push(r),
            Err((id, reason)) => out.rejections.push(Rejection {
                line: line_no,
                id,
                reason,
            }),
        }
    }
    Ok(out)
}

/// Best-effort id recovery from a line that failed to decode.
fn sniff_id(buf: &[u8], format: CorpusFormat) -> Option<String> {
    match format {
        CorpusFormat::Delimited => {
            let end = buf.iter().position(|&b| b == b'\t')?;
            std::str::from_utf8(&buf[..end]).ok().map(str::to_owned)
        }
        CorpusFormat::JsonLines => None,
    }
}

type LineResult = Result<EmailRecord, (Option<String>, RejectReason)>;

fn parse_date(s: &str) -> Option<NaiveDate> {
    let s = s.trim();
    let date_part = s.split_once('T').map_or(s, |(d, _)| d);
    NaiveDate::parse_from_str(date_part, "%Y-%m-%d").ok()
}

fn parse_delimited(line: &str) -> LineResult {
    let fields: Vec<&str> = line.splitn(4, '\t').collect();
    if fields.len() != 4 {
        return Err((fields.first().map(|s| s.to_string()), RejectReason::WrongFieldCount));
    }
    let id = fields[0].trim();
    if id.is_empty() {
        return Err((None, RejectReason::EmptyId));
    }
    let fail = |reason| Err((Some(id.to_owned()), reason));
    let (Some(compose), Some(delivery)) = (parse_date(fields[1]), parse_date(fields[2])) else {
        return fail(RejectReason::BadDate);
    };
    let Some(body) = unescape(fields[3]) else {
        return fail(RejectReason::BadEscape);
    };
    EmailRecord::new(id, compose, delivery, body).or_else(|_| fail(RejectReason::DeliveryPrecedesCompose))
}

fn parse_json(line: &str) -> LineResult {
    #[derive(Deserialize)]
    struct Loose {
        id: Option<serde_json::Value>,
        compose_date: Option<String>,
        delivery_date: Option<String>,
        body: Option<String>,
    }
    let loose: Loose = serde_json::from_str(line).map_err(|_| (None, RejectReason::BadJson))?;
    let id = match loose.id {
        Some(serde_json::Value::String(s)) => s,
        Some(serde_json::Value::Number(n)) => n.to_string(),
        _ => return Err((None, RejectReason::EmptyId)),
    };
    if id.trim().is_empty() {
        return Err((None, RejectReason::EmptyId));
    }
    let fail = |reason| Err((Some(id.clone()), reason));
    let (Some(compose), Some(delivery)) = (
        loose.compose_date.as_deref().and_then(parse_date),
        loose.delivery_date.as_deref().and_then(parse_date),
    ) else {
        return fail(RejectReason::BadDate);
    };
    let Some(body) = loose.body else {
        return fail(RejectReason::WrongFieldCount);
    };
    EmailRecord::new(id.clone(), compose, delivery, body).or_else(|_| fail(RejectReason::DeliveryPrecedesCompose))
}

fn unescape(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next()? {
            't' => out.push('\t'),
            'n' => out.push('\n'),
            'r' => out.push('\r'),
            '\\' => out.push('\\'),
            _ => return None,
        }
    }
    Some(out)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\\' => out.push_str("\\\\"),
            _ => out.push(c),
        }
    }
    out
}

/// Writes records in the given ingestion format, one per line.
pub fn write_corpus<W: Write>(records: &[EmailRecord], format: CorpusFormat, mut out: W) -> io::Result<()> {
    for r in records {
        match format {
            CorpusFormat::Delimited => writeln!(
                out,
                "{}\t{}\t{}\t{}",
                escape(&r.id),
                r.compose_date,
                r.delivery_date,
                escape(&r.body)
            )?,
            CorpusFormat::JsonLines => {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

/// The built-in English function-word list.
pub fn english_function_words() -> &'static HashSet<String> {
    static WORDS: OnceLock<HashSet<String>> = OnceLock::new();
    WORDS.get_or_init(|| parse_word_list(FUNCTION_WORDS))
}

/// The shipped stopword list used for word-frequency tables.
pub fn default_stopwords() -> HashSet<String> {
    parse_word_list(STOPWORDS)
}

/// One word per line, `#` comments, case-folded.
pub fn parse_word_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

/// Share of tokens found in the function-word list; `None` for no tokens.
pub fn function_word_ratio(body: &str) -> Option<f64> {
    let toks = tokenize(body);
    if toks.is_empty() {
        return None;
    }
    let words = english_function_words();
    let hits = toks.iter().filter(|t| words.contains(t.as_str())).count();
    Some(hits as f64 / toks.len() as f64)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LanguagePartition {
    pub kept: Vec<EmailRecord>,
    pub rejected: Vec<EmailRecord>,
    /// Ids of kept records too short to judge.
    pub flagged_short: Vec<String>,
}

/// Splits records into likely-English and the rest by function-word ratio.
pub fn filter_english(records: Vec<EmailRecord>, threshold: f64) -> LanguagePartition {
    let words = english_function_words();
    let mut out = LanguagePartition::default();
    for r in records {
        let toks = tokenize(&r.body);
        if toks.len() < MIN_JUDGEABLE_TOKENS {
            out.flagged_short.push(r.id.clone());
            out.kept.push(r);
            continue;
        }
        let hits = toks.iter().filter(|t| words.contains(t.as_str())).count();
        if hits as f64 / toks.len() as f64 >= threshold {
            out.kept.push(r);
        } else {
            out.rejected.push(r);
        }
    }
    out
}

/// Top `top_n` non-stopword surface tokens by count, ties alphabetical.
pub fn word_frequency(records: &[EmailRecord], top_n: usize, stopwords: &HashSet<String>) -> Vec<(String, u64)> {
    if top_n == 0 {
        return Vec::new();
    }
    let mut counts: HashMap<String, u64> = HashMap::new();
    for r in records {
        for t in tokenize(&r.body) {
            if !stopwords.contains(&t) {
                *counts.entry(t).or_default() += 1;
            }
        }
    }
    let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(top_n);
    ranked
}

pub fn write_wordfreq_csv<W: Write>(ranked: &[(String, u64)], out: W) -> Result<(), CorpusError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rank", "word", "count"])?;
    for (i, (word, count)) in ranked.iter().enumerate() {
        w.write_record([(i + 1).to_string(), word.clone(), count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    /// Records per delivery year.
    pub per_year_counts: BTreeMap<i32, u64>,
    /// Mean delivery lag in years, keyed by compose (origin) year.
    pub mean_lag_years: BTreeMap<i32, f64>,
    pub total_records: u64,
    pub rejected_language: u64,
    pub rejected_encoding: u64,
}

/// Delivery-year histogram and mean lag per origin year.
pub fn delivery_histogram(records: &[EmailRecord]) -> CorpusStats {
    let mut stats = CorpusStats::default();
    let mut lag_sums: BTreeMap<i32, (f64, u64)> = BTreeMap::new();
    for r in records {
        *stats.per_year_counts.entry(r.delivery_year()).or_default() += 1;
        let e = lag_sums.entry(r.compose_year()).or_default();
        e.0 += r.lag_years();
        e.1 += 1;
    }
    stats.mean_lag_years = lag_sums.into_iter().map(|(y, (sum, n))| (y, sum / n as f64)).collect();
    stats.total_records = records.len() as u64;
    stats
}

impl CorpusStats {
    /// `year,count`
    pub fn write_histogram_csv<W: Write>(&self, out: W) -> Result<(), CorpusError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["year", "count"])?;
        for (year, count) in &self.per_year_counts {
            w.write_record([year.to_string(), count.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `origin_year,mean_lag_years`
    pub fn write_lag_csv<W: Write>(&self, out: W) -> Result<(), CorpusError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["origin_year", "mean_lag_years"])?;
        for (year, lag) in &self.mean_lag_years {
            w.write_record([year.to_string(), sig6(*lag)])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn write_rejections_csv<W: Write>(rejections: &[Rejection], out: W) -> Result<(), CorpusError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["line", "id", "reason"])?;
    for r in rejections {
        w.write_record([
            r.line.to_string(),
            r.id.clone().unwrap_or_default(),
            r.reason.code().to_owned(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
