//! Pipeline configuration: flat `key = value` files, overridden key by key
//! from the command line.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use moodscope::corpus::CorpusFormat;
use moodscope::lexicon::MoodScale;
use moodscope::stats::Thresholds;

use crate::error::CliError;

pub const KEYS: &[&str] = &[
    "corpus_path",
    "corpus_format",
    "lexicon_path",
    "stopwords_path",
    "origin_year",
    "year_min",
    "year_max",
    "english_threshold",
    "alpha_significant",
    "alpha_marginal",
    "output_dir",
    "emit_svg",
    "top_n",
    "threads",
    "dimensions",
];

/// Raw settings before typing, in override order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config line {}: expected `key = value`",
                    i + 1
                )));
            };
            let key = k.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key `{key}`", i + 1)));
            }
            if values.insert(key.clone(), v.trim().to_owned()).is_some() {
                return Err(CliError::Usage(format!("config line {}: `{key}` set twice", i + 1)));
            }
        }
        Ok(RawConfig { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        debug_assert!(KEYS.contains(&key), "{key}");
        self.values.insert(key.to_owned(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn typed<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None | Some("") => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("invalid value `{v}` for `{key}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub corpus_path: Option<PathBuf>,
    pub corpus_format: Option<CorpusFormat>,
    /// `None` selects the built-in lexicon.
    pub lexicon_path: Option<PathBuf>,
    pub stopwords_path: Option<PathBuf>,
    /// Keep only messages composed in this year.
    pub origin_year: Option<i32>,
    pub year_min: Option<i32>,
    pub year_max: Option<i32>,
    pub english_threshold: f64,
    pub thresholds: Thresholds,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
    pub top_n: usize,
    pub threads: Option<usize>,
    pub dimensions: Vec<MoodScale>,
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(CliError::Usage(format!(
            "invalid value `{v}` for `{key}` (expected true/false)"
        ))),
    }
}

impl PipelineConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, CliError> {
        let path = |k: &str| raw.get(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        let corpus_format = match raw.get("corpus_format") {
            None | Some("") | Some("auto") => None,
            Some(v) => Some(v.parse().map_err(|e| CliError::Usage(format!("{e}")))?),
        };
        let english_threshold = raw.typed::<f64>("english_threshold")?.unwrap_or(0.15);
        if !(0.0..=1.0).contains(&english_threshold) {
            return Err(CliError::Usage(format!(
                "english_threshold must be in [0, 1], got {english_threshold}"
            )));
        }
        let defaults = Thresholds::default();
        let thresholds = Thresholds::new(
            raw.typed("alpha_significant")?.unwrap_or(defaults.significant),
            raw.typed("alpha_marginal")?.unwrap_or(defaults.marginal),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        let year_min = raw.typed("year_min")?;
        let year_max = raw.typed("year_max")?;
        if let (Some(lo), Some(hi)) = (year_min, year_max) {
            if lo > hi {
                return Err(CliError::Usage(format!("year_min {lo} is after year_max {hi}")));
            }
        }
        let threads = raw.typed::<usize>("threads")?;
        if threads == Some(0) {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        let dimensions = match raw.get("dimensions") {
            None | Some("") | Some("all") => MoodScale::ALL.to_vec(),
            Some(list) => {
                let mut dims = Vec::new();
                for d in list.split(',') {
                    let s: MoodScale = d
                        .trim()
                        .parse()
                        .map_err(|_| CliError::Usage(format!("unknown dimension `{}`", d.trim())))?;
                    if !dims.contains(&s) {
                        dims.push(s);
                    }
                }
                dims
            }
        };
        Ok(PipelineConfig {
            corpus_path: path("corpus_path"),
            corpus_format,
            lexicon_path: path("lexicon_path"),
            stopwords_path: path("stopwords_path"),
            origin_year: raw.typed("origin_year")?,
            year_min,
            year_max,
            english_threshold,
            thresholds,
            output_dir: path("output_dir").unwrap_or_else(|| PathBuf::from("moodscope-out")),
            emit_svg: raw
                .get("emit_svg")
                .map(|v| parse_bool("emit_svg", v))
                .transpose()?
                .unwrap_or(false),
            top_n: raw.typed("top_n")?.unwrap_or(20),
            threads,
            dimensions,
        })
    }

    pub fn in_year_range(&self, year: i32) -> bool {
        self.year_min.is_none_or(|lo| year >= lo) && self.year_max.is_none_or(|hi| year <= hi)
    }

    pub fn corpus(&self) -> Result<&Path, CliError> {
        self.corpus_path
            .as_deref()
            .ok_or_else(|| CliError::Usage("no corpus given (set `corpus_path` or pass --corpus-path)".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = PipelineConfig::from_raw(&RawConfig::default()).unwrap();
        assert_eq!(c.thresholds, Thresholds::default());
        assert_eq!(c.english_threshold, 0.15);
        assert_eq!(c.dimensions.len(), 6);
        assert_eq!(c.top_n, 20);
        assert!(!c.emit_svg);
        assert!(c.in_year_range(1900));
    }

    #[test]
    fn file_then_override() {
        let mut raw = RawConfig::parse(
            "# pipeline\ncorpus_path = data/mail.tsv\nyear-min = 2006\nyear_max = 2036 # inclusive\nemit_svg = yes\n\
             dimensions = depression, vigor\n",
        )
        .unwrap();
        raw.set("year_max", "2020");
        let c = PipelineConfig::from_raw(&raw).unwrap();
        assert_eq!(c.corpus_path, Some(PathBuf::from("data/mail.tsv")));
        assert_eq!((c.year_min, c.year_max), (Some(2006), Some(2020)));
        assert!(c.emit_svg);
        assert_eq!(c.dimensions, [MoodScale::Depression, MoodScale::Vigor]);
        assert!(!c.in_year_range(2021));
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "alpha_significant = 0.2\nalpha_marginal = 0.1",
            "year_min = 2010\nyear_max = 2000",
            "english_threshold = 1.5",
            "threads = 0",
            "dimensions = joy",
            "emit_svg = maybe",
            "top_n = -3",
            "colour = blue",
            "year_min = 1\nyear_min = 2",
            "no equals sign",
        ] {
            let r = RawConfig::parse(text).and_then(|raw| PipelineConfig::from_raw(&raw));
            assert!(matches!(r, Err(CliError::Usage(_))), "{text}");
        }
    }
}
