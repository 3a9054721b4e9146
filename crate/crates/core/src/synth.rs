//! Seeded synthetic corpora with planted per-scale mood trends.
//!
//! Each email gets, for every configured scale, a count of lexicon phrases
//! drawn from `profile(t) + N(0, noise_sd)` (clamped at zero and rounded),
//! where `t` is the year offset from `year_min`. Phrases are separated by
//! function words and padded with neutral nouns, none of which stem to
//! anything in the lexicon, so every planted phrase scores exactly once.
//!
//! Configuration is flat `key = value` text:
//!
//! ```text
//! year_min = 2007
//! year_max = 2016
//! emails_per_year = 50
//! depression = step(5, 1, 6)
//! depression_noise = 0.5
//! vigor = linear(1, 0.5)
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::corpus::{english_function_words, parse_word_list, EmailRecord};
use crate::exec::Exec;
use crate::lexicon::{compile, phrase_stems, CompiledMatcher, MoodLexicon, MoodScale};
use crate::textproc::stem_surface;

const FILLER_WORDS: &str = include_str!("../data/filler_words.txt");

/// Upper bound on a profile value; keeps bodies a sane size.
pub const MAX_INTENSITY: f64 = 1000.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key '{key}' given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("missing required key '{0}'")]
    MissingKey(&'static str),
    #[error("empty year range {min}..={max}")]
    EmptyYearRange { min: i32, max: i32 },
    #[error("emails_per_year must be at least 1")]
    NoEmails,
    #[error("year {year} precedes origin year {origin}")]
    YearBeforeOrigin { year: i32, origin: i32 },
    #[error("noise for {scale} must be finite and >= 0, got {value}")]
    InvalidNoise { scale: MoodScale, value: f64 },
    #[error("profile for {scale} gives {value} in {year}, outside [-{max}, {max}]", max = MAX_INTENSITY)]
    ProfileOutOfRange { scale: MoodScale, year: i32, value: f64 },
    #[error("lexicon has no usable phrases for {0}")]
    NoTerms(MoodScale),
    #[error("every filler word collides with the lexicon")]
    NoFiller,
}

/// Intensity as a function of the year offset `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    Constant(f64),
    Linear {
        intercept: f64,
        slope: f64,
    },
    /// `a + b*t + c*t^2`
    Quadratic {
        a: f64,
        b: f64,
        c: f64,
    },
    /// `before` for `t < at`, `after` from `at` on.
    Step {
        at: u32,
        before: f64,
        after: f64,
    },
}

impl Profile {
    pub fn eval(&self, t: u32) -> f64 {
        let x = f64::from(t);
        match *self {
            Profile::Constant(v) => v,
            Profile::Linear { intercept, slope } => intercept + slope * x,
            Profile::Quadratic { a, b, c } => a + b * x + c * x * x,
            Profile::Step { at, before, after } => {
                if t < at {
                    before
                } else {
                    after
                }
            }
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Profile::Constant(v) => write!(f, "constant({v})"),
            Profile::Linear { intercept, slope } => write!(f, "linear({intercept}, {slope})"),
            Profile::Quadratic { a, b, c } => write!(f, "quadratic({a}, {b}, {c})"),
            Profile::Step { at, before, after } => write!(f, "step({at}, {before}, {after})"),
        }
    }
}

impl FromStr for Profile {
    type Err = String;

    /// Accepts `constant(v)`, a bare number, `linear(slope)`,
    /// `linear(intercept, slope)`, `quadratic(a, b, c)` and
    /// `step(at, before, after)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(v) = s.parse::<f64>() {
            return finite(v).map(Profile::Constant);
        }
        let (name, rest) = s.split_once('(').ok_or_else(|| format!("bad profile '{s}'"))?;
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| format!("missing ')' in profile '{s}'"))?;
        let args = inner
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad number '{}' in '{s}'", a.trim()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for &a in &args {
            finite(a)?;
        }
        match (name.trim(), args.as_slice()) {
            ("constant", &[v]) => Ok(Profile::Constant(v)),
            ("linear", &[slope]) => Ok(Profile::Linear { intercept: 0.0, slope }),
            ("linear", &[intercept, slope]) => Ok(Profile::Linear { intercept, slope }),
            ("quadratic", &[a, b, c]) => Ok(Profile::Quadratic { a, b, c }),
            ("step", &[at, before, after]) => {
                if at < 0.0 || at.fract() != 0.0 || at > f64::from(u32::MAX) {
                    return Err(format!("step position must be a non-negative integer, got {at}"));
                }
                Ok(Profile::Step {
                    at: at as u32,
                    before,
                    after,
                })
            }
            (n, a) => Err(format!("profile '{n}' does not take {} argument(s)", a.len())),
        }
    }
}

fn finite(v: f64) -> Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite value {v}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendSpec {
    pub dimension: MoodScale,
    pub profile: Profile,
    pub noise_sd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub year_min: i32,
    pub year_max: i32,
    pub emails_per_year: u32,
    pub origin_year: i32,
    /// Neutral nouns added to each body on top of the phrase separators.
    pub filler_words: u32,
    pub specs: Vec<TrendSpec>,
}

impl SynthConfig {
    pub fn new(year_min: i32, year_max: i32, emails_per_year: u32, specs: Vec<TrendSpec>) -> Self {
        SynthConfig {
            year_min,
            year_max,
            emails_per_year,
            origin_year: year_min,
            filler_words: 8,
            specs,
        }
    }

    pub fn years(&self) -> std::ops::RangeInclusive<i32> {
        self.year_min..=self.year_max
    }

    pub fn total_emails(&self) -> u64 {
        let years = (i64::from(self.year_max) - i64::from(self.year_min) + 1).max(0) as u64;
        years * u64::from(self.emails_per_year)
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.year_min > self.year_max {
            return Err(SynthError::EmptyYearRange {
                min: self.year_min,
                max: self.year_max,
            });
        }
        if self.emails_per_year == 0 {
            return Err(SynthError::NoEmails);
        }
        if self.year_min < self.origin_year {
            return Err(SynthError::YearBeforeOrigin {
                year: self.year_min,
                origin: self.origin_year,
            });
        }
        for s in &self.specs {
            if !(s.noise_sd.is_finite() && s.noise_sd >= 0.0) {
                return Err(SynthError::InvalidNoise {
                    scale: s.dimension,
                    value: s.noise_sd,
                });
            }
            for year in self.years() {
                let value = s.profile.eval((year - self.year_min) as u32);
                if !value.is_finite() || value.abs() > MAX_INTENSITY {
                    return Err(SynthError::ProfileOutOfRange {
                        scale: s.dimension,
                        year,
                        value,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Parses `key = value` lines (`#` comments allowed).
///
/// Required: `year_min`, `year_max`, `emails_per_year`. Optional:
/// `origin_year` (defaults to `year_min`), `filler_words` (8), `noise_sd`
/// (default noise for every scale, 0), `<scale> = <profile>` and
/// `<scale>_noise = <sd>`.
pub fn parse_synth_config(text: &str) -> Result<SynthConfig, SynthError> {
    let mut seen = HashSet::new();
    let mut ints: BTreeMap<&str, i64> = BTreeMap::new();
    let mut default_noise = 0.0;
    let mut profiles: BTreeMap<MoodScale, Profile> = BTreeMap::new();
    let mut noises: BTreeMap<MoodScale, f64> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| SynthError::Syntax {
            line,
            msg: format!("expected 'key = value', got '{content}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_owned()) {
            return Err(SynthError::DuplicateKey {
                line,
                key: key.to_owned(),
            });
        }
        let syntax = |msg: String| SynthError::Syntax { line, msg };
        match key {
            "year_min" | "year_max" | "emails_per_year" | "origin_year" | "filler_words" => {
                let v: i64 = value
                    .parse()
                    .map_err(|_| syntax(format!("'{key}' needs an integer, got '{value}'")))?;
                ints.insert(key, v);
            }
            "noise_sd" => {
                default_noise = value
                    .parse()
                    .map_err(|_| syntax(format!("'noise_sd' needs a number, got '{value}'")))?;
            }
            _ => {
                if let Some(scale) = key.strip_suffix("_noise").and_then(|s| s.parse::<MoodScale>().ok()) {
                    let v: f64 = value
                        .parse()
                        .map_err(|_| syntax(format!("'{key}' needs a number, got '{value}'")))?;
                    noises.insert(scale, v);
                } else if let Ok(scale) = key.parse::<MoodScale>() {
                    profiles.insert(scale, value.parse().map_err(syntax)?);
                } else {
                    return Err(SynthError::UnknownKey {
                        line,
                        key: key.to_owned(),
                    });
                }
            }
        }
    }

    let int = |k: &str| ints.get(k).copied();
    let year = |k: &'static str, v: i64| {
        i32::try_from(v).map_err(|_| SynthError::Syntax {
            line: 0,
            msg: format!("'{k}' out of range: {v}"),
        })
    };
    let count = |k: &'static str, v: i64| {
        u32::try_from(v).map_err(|_| SynthError::Syntax {
            line: 0,
            msg: format!("'{k}' must be a non-negative count, got {v}"),
        })
    };
    let year_min = year("year_min", int("year_min").ok_or(SynthError::MissingKey("year_min"))?)?;
    let year_max = year("year_max", int("year_max").ok_or(SynthError::MissingKey("year_max"))?)?;
    let emails_per_year = count(
        "emails_per_year",
        int("emails_per_year").ok_or(SynthError::MissingKey("emails_per_year"))?,
    )?;
    let origin_year = match int("origin_year") {
        Some(v) => year("origin_year", v)?,
        None => year_min,
    };
    let filler_words = match int("filler_words") {
        Some(v) => count("filler_words", v)?,
        None => 8,
    };
    if let Some((&scale, _)) = noises.iter().find(|(s, _)| !profiles.contains_key(s)) {
        return Err(SynthError::Syntax {
            line: 0,
            msg: format!("noise given for {scale} but no profile"),
        });
    }
    let specs = profiles
        .into_iter()
        .map(|(dimension, profile)| TrendSpec {
            dimension,
            profile,
            noise_sd: noises.get(&dimension).copied().unwrap_or(default_noise),
        })
        .collect();

    let cfg = SynthConfig {
        year_min,
        year_max,
        emails_per_year,
        origin_year,
        filler_words,
        specs,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Word pools derived from a lexicon.
struct Pools {
    phrases: BTreeMap<MoodScale, Vec<String>>,
    separators: Vec<String>,
    nouns: Vec<String>,
}

fn lexicon_free(words: impl IntoIterator<Item = String>, vocab: &HashSet<&str>) -> Vec<String> {
    let mut out: Vec<String> = words
        .into_iter()
        .filter(|w| !w.is_empty() && w.bytes().all(|b| b.is_ascii_lowercase()))
        .filter(|w| !vocab.contains(stem_surface(w).as_str()))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn build_pools(cfg: &SynthConfig, lex: &MoodLexicon, matcher: &CompiledMatcher) -> Result<Pools, SynthError> {
    let mut phrases = BTreeMap::new();
    for spec in &cfg.specs {
        let pool: Vec<String> = lex
            .entries_for(spec.dimension)
            .flat_map(|e| std::iter::once(&e.main_term).chain(&e.extended))
            .filter(|p| {
                // Only phrases that still score for this scale after compilation.
                matcher
                    .lookup(&phrase_stems(p))
                    .is_some_and(|idx| matcher.scale_of(idx) == spec.dimension)
            })
            .cloned()
            .collect();
        if pool.is_empty() {
            return Err(SynthError::NoTerms(spec.dimension));
        }
        phrases.insert(spec.dimension, pool);
    }
    let vocab = matcher.stem_vocabulary();
    let separators = lexicon_free(english_function_words().iter().cloned(), &vocab);
    let nouns = lexicon_free(parse_word_list(FILLER_WORDS), &vocab);
    if separators.is_empty() || nouns.is_empty() {
        return Err(SynthError::NoFiller);
    }
    Ok(Pools {
        phrases,
        separators,
        nouns,
    })
}

fn email_rng(seed: u64, year_offset: u32, idx: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(year_offset) << 32) | u64::from(idx));
    rng
}

fn random_day(rng: &mut ChaCha8Rng, year: i32) -> NaiveDate {
    let first = NaiveDate::from_ymd_opt(year, 1, 1).expect("valid year");
    let days = if NaiveDate::from_ymd_opt(year, 2, 29).is_some() {
        366
    } else {
        365
    };
    first + chrono::Days::new(rng.random_range(0..days))
}

fn generate_one(cfg: &SynthConfig, pools: &Pools, seed: u64, year: i32, idx: u32) -> EmailRecord {
    let t = (year - cfg.year_min) as u32;
    let mut rng = email_rng(seed, t, idx);

    let mut units: Vec<&str> = Vec::new();
    for spec in &cfg.specs {
        let z: f64 = StandardNormal.sample(&mut rng);
        let intensity = (spec.profile.eval(t) + spec.noise_sd * z).max(0.0);
        let pool = &pools.phrases[&spec.dimension];
        for _ in 0..intensity.round() as u32 {
            units.push(pool.choose(&mut rng).expect("pool is non-empty"));
        }
    }
    for _ in 0..cfg.filler_words {
        units.push(pools.nouns.choose(&mut rng).expect("pool is non-empty"));
    }
    units.shuffle(&mut rng);

    let mut words: Vec<&str> = Vec::with_capacity(units.len() * 2 + 1);
    for u in units {
        words.push(u);
        words.push(pools.separators.choose(&mut rng).expect("pool is non-empty"));
    }
    if words.is_empty() {
        words.push(pools.separators.choose(&mut rng).expect("pool is non-empty"));
    }

    let compose = NaiveDate::from_ymd_opt(cfg.origin_year, 1, 1).expect("valid origin year");
    let delivery = random_day(&mut rng, year);
    EmailRecord::new(format!("synth-{year}-{idx:05}"), compose, delivery, words.join(" "))
        .expect("delivery year is not before the origin year")
}

/// Generates `emails_per_year` records for every year in the range.
///
/// Each email draws from its own `(year, index)` random stream, so the
/// output is identical for every execution strategy.
pub fn generate_corpus(cfg: &SynthConfig, lex: &MoodLexicon, seed: u64) -> Result<Vec<EmailRecord>, SynthError> {
    generate_corpus_with(cfg, lex, seed, Exec::default())
}

pub fn generate_corpus_with(
    cfg: &SynthConfig,
    lex: &MoodLexicon,
    seed: u64,
    exec: Exec,
) -> Result<Vec<EmailRecord>, SynthError> {
    cfg.validate()?;
    let matcher = compile(lex);
    let pools = build_pools(cfg, lex, &matcher)?;
    let jobs: Vec<(i32, u32)> = cfg
        .years()
        .flat_map(|y| (0..cfg.emails_per_year).map(move |i| (y, i)))
        .collect();
    Ok(exec.map(&jobs, |&(year, idx)| generate_one(cfg, &pools, seed, year, idx)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{write_corpus, CorpusFormat};
    use crate::scoring::{score_corpus_with, score_records};

    fn step_config(noise: f64) -> SynthConfig {
        SynthConfig::new(
            2010,
            2019,
            20,
            vec![TrendSpec {
                dimension: MoodScale::Depression,
                profile: Profile::Step {
                    at: 5,
                    before: 1.0,
                    after: 6.0,
                },
                noise_sd: noise,
            }],
        )
    }

    #[test]
    fn profile_parsing() {
        assert_eq!("2.5".parse(), Ok(Profile::Constant(2.5)));
        assert_eq!("constant(3)".parse(), Ok(Profile::Constant(3.0)));
        assert_eq!(
            "linear(0.5)".parse(),
            Ok(Profile::Linear {
                intercept: 0.0,
                slope: 0.5
            })
        );
        assert_eq!(
            " quadratic( 1, -2 , 0.5 )".parse(),
            Ok(Profile::Quadratic {
                a: 1.0,
                b: -2.0,
                c: 0.5
            })
        );
        assert_eq!(
            "step(5,1,6)".parse(),
            Ok(Profile::Step {
                at: 5,
                before: 1.0,
                after: 6.0
            })
        );
        for bad in [
            "step(1.5,1,2)",
            "linear(1,2,3)",
            "wave(1)",
            "linear(1",
            "constant(nan)",
            "step(-1,0,0)",
        ] {
            assert!(bad.parse::<Profile>().is_err(), "{bad}");
        }
        let p: Profile = "quadratic(1, 2, 3)".parse().unwrap();
        assert_eq!(p.to_string().parse(), Ok(p));
        assert_eq!(p.eval(2), 1.0 + 4.0 + 12.0);
    }

    #[test]
    fn config_parsing() {
        let cfg = parse_synth_config(
            "# demo\nyear_min = 2007\nyear_max = 2016\nemails_per_year = 50\n\
             depression = step(5, 1, 6)\nvigor = 2\nnoise_sd = 0.25\ndepression_noise = 0.5 # override\n",
        )
        .unwrap();
        assert_eq!(cfg.years(), 2007..=2016);
        assert_eq!(cfg.origin_year, 2007);
        assert_eq!(cfg.total_emails(), 500);
        assert_eq!(cfg.specs.len(), 2);
        assert_eq!(cfg.specs[0].dimension, MoodScale::Depression);
        assert_eq!(cfg.specs[0].noise_sd, 0.5);
        assert_eq!(cfg.specs[1].dimension, MoodScale::Vigor);
        assert_eq!(cfg.specs[1].noise_sd, 0.25);
    }

    #[test]
    fn config_errors() {
        let base = "year_min = 2010\nyear_max = 2012\nemails_per_year = 5\n";
        assert_eq!(
            parse_synth_config("year_min = 2012\nyear_max = 2010\nemails_per_year = 5\n"),
            Err(SynthError::EmptyYearRange { min: 2012, max: 2010 })
        );
        assert_eq!(
            parse_synth_config("year_min = 2010\nyear_max = 2012\nemails_per_year = 0\n"),
            Err(SynthError::NoEmails)
        );
        assert!(matches!(
            parse_synth_config("year_min = 2010\nyear_max = 2012\n"),
            Err(SynthError::MissingKey("emails_per_year"))
        ));
        assert!(matches!(
            parse_synth_config(&format!("{base}colour = 3\n")),
            Err(SynthError::UnknownKey { line: 4, .. })
        ));
        assert!(matches!(
            parse_synth_config(&format!("{base}year_min = 2011\n")),
            Err(SynthError::DuplicateKey { line: 4, .. })
        ));
        assert!(matches!(
            parse_synth_config(&format!("{base}anger = 1\nanger_noise = -1\n")),
            Err(SynthError::InvalidNoise { .. })
        ));
        assert!(matches!(
            parse_synth_config(&format!("{base}anger = 1e9\n")),
            Err(SynthError::ProfileOutOfRange { .. })
        ));
        assert!(matches!(
            parse_synth_config(&format!("{base}origin_year = 2011\n")),
            Err(SynthError::YearBeforeOrigin { .. })
        ));
        assert!(matches!(
            parse_synth_config(&format!("{base}fatigue_noise = 1\n")),
            Err(SynthError::Syntax { .. })
        ));
        assert!(matches!(
            parse_synth_config("just words"),
            Err(SynthError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn record_count_ids_and_dates() {
        let cfg = step_config(0.5);
        let recs = generate_corpus(&cfg, &MoodLexicon::default_lexicon(), 42).unwrap();
        assert_eq!(recs.len(), 200);
        assert_eq!(recs[0].id(), "synth-2010-00000");
        assert_eq!(recs[199].id(), "synth-2019-00019");
        for (i, r) in recs.iter().enumerate() {
            assert_eq!(r.delivery_year(), 2010 + (i / 20) as i32);
            assert_eq!(r.compose_date(), NaiveDate::from_ymd_opt(2010, 1, 1).unwrap());
        }
    }

    #[test]
    fn deterministic_across_strategies_and_distinct_across_seeds() {
        let cfg = step_config(0.5);
        let lex = MoodLexicon::default_lexicon();
        let dump = |recs: &[EmailRecord]| {
            let mut buf = Vec::new();
            write_corpus(recs, CorpusFormat::Delimited, &mut buf).unwrap();
            buf
        };
        let a = dump(&generate_corpus_with(&cfg, &lex, 7, Exec::Sequential).unwrap());
        let b = dump(&generate_corpus_with(&cfg, &lex, 7, Exec::Parallel).unwrap());
        let c = dump(&generate_corpus_with(&cfg, &lex, 8, Exec::Sequential).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn planted_counts_are_scored_exactly() {
        let cfg = step_config(0.0);
        let lex = MoodLexicon::default_lexicon();
        let matcher = compile(&lex);
        let recs = generate_corpus(&cfg, &lex, 3).unwrap();
        for s in score_records(&recs, &matcher, Exec::Sequential) {
            let expected = if s.delivery_year < 2015 { 1.0 } else { 6.0 };
            assert_eq!(s.raw.components(), [0.0, expected, 0.0, 0.0, 0.0, 0.0], "{}", s.id);
        }
    }

    #[test]
    fn unspecified_scales_stay_silent() {
        let mut cfg = step_config(2.0);
        cfg.specs.push(TrendSpec {
            dimension: MoodScale::Vigor,
            profile: Profile::Constant(0.0),
            noise_sd: 0.0,
        });
        let lex = MoodLexicon::default_lexicon();
        let matcher = compile(&lex);
        let recs = generate_corpus(&cfg, &lex, 11).unwrap();
        let buckets = score_corpus_with(&recs, &matcher, Exec::Sequential);
        for b in buckets.values() {
            for v in b.vectors() {
                for scale in MoodScale::ALL {
                    if scale != MoodScale::Depression {
                        assert_eq!(v.get(scale), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn bodies_pass_the_language_filter() {
        let recs = generate_corpus(&step_config(0.5), &MoodLexicon::default_lexicon(), 5).unwrap();
        let n = recs.len();
        let part = crate::corpus::filter_english(recs, 0.15);
        assert_eq!(part.kept.len(), n);
    }

    #[test]
    fn scale_without_entries_is_an_error() {
        // "sadness" stems to "sad", which the depression entry already owns.
        let text = "sad | depression | glum\nsadness | anger |\ntense | tension |\nlively | vigor |\ntired | fatigue |\nlost | confusion |\n";
        let lex = crate::lexicon::parse_lexicon(text).unwrap();
        let mut cfg = step_config(0.0);
        cfg.specs[0].dimension = MoodScale::Anger;
        assert_eq!(
            generate_corpus(&cfg, &lex, 1),
            Err(SynthError::NoTerms(MoodScale::Anger))
        );
    }
}
