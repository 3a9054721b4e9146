//! Mood lexicon: main mood adjectives, the scale each one scores on, and
//! their extended synonym phrases, plus compilation into a stemmed matcher.
//!
//! The on-disk format is line oriented:
//!
//! ```text
//! # comments start with '#'
//! # version: my-lexicon-2
//! discouraged | depression | beat down, caved in, crestfallen, daunted
//! ```

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{self, Read};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textproc::{stem_surface, tokenize};

/// Longest phrase, in tokens, a lexicon entry may contain.
pub const MAX_PHRASE_TOKENS: usize = 4;

const DEFAULT_LEXICON: &str = include_str!("../data/default_lexicon.txt");

/// The six mood scales, in canonical vector order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoodScale {
    Tension,
    Depression,
    Anger,
    Vigor,
    Fatigue,
    Confusion,
}

impl MoodScale {
    pub const ALL: [MoodScale; 6] = [
        MoodScale::Tension,
        MoodScale::Depression,
        MoodScale::Anger,
        MoodScale::Vigor,
        MoodScale::Fatigue,
        MoodScale::Confusion,
    ];

    /// Position of this scale in a mood vector.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            MoodScale::Tension => "tension",
            MoodScale::Depression => "depression",
            MoodScale::Anger => "anger",
            MoodScale::Vigor => "vigor",
            MoodScale::Fatigue => "fatigue",
            MoodScale::Confusion => "confusion",
        }
    }
}

impl fmt::Display for MoodScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown mood scale `{0}`")]
pub struct UnknownScale(pub String);

impl FromStr for MoodScale {
    type Err = UnknownScale;

    /// Accepts the short labels and the long two-part names
    /// (`tension-anxiety`, `vigor-activity`, ...).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let scale = match lower.as_str() {
            "tension" | "tension-anxiety" => MoodScale::Tension,
            "depression" | "depression-dejection" => MoodScale::Depression,
            "anger" | "anger-hostility" => MoodScale::Anger,
            "vigor" | "vigour" | "vigor-activity" => MoodScale::Vigor,
            "fatigue" | "fatigue-inertia" => MoodScale::Fatigue,
            "confusion" | "confusion-bewilderment" => MoodScale::Confusion,
            _ => return Err(UnknownScale(s.trim().to_owned())),
        };
        Ok(scale)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub main_term: String,
    pub scale: MoodScale,
    pub extended: Vec<String>,
}

/// One problem found while validating a lexicon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconIssue {
    Syntax {
        line: usize,
        message: String,
    },
    UnknownScale {
        line: usize,
        label: String,
    },
    EmptyMainTerm {
        line: usize,
    },
    NotLowercase {
        term: String,
    },
    DuplicateMainTerm {
        term: String,
    },
    DuplicatePhrase {
        term: String,
        phrase: String,
    },
    EmptyPhrase {
        term: String,
        phrase: String,
    },
    PhraseTooLong {
        term: String,
        phrase: String,
        tokens: usize,
    },
    EmptyScale {
        scale: MoodScale,
    },
}

impl fmt::Display for LexiconIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconIssue::Syntax { line, message } => write!(f, "line {line}: {message}"),
            LexiconIssue::UnknownScale { line, label } => {
                write!(f, "line {line}: unknown mood scale `{label}`")
            }
            LexiconIssue::EmptyMainTerm { line } => write!(f, "line {line}: empty main term"),
            LexiconIssue::NotLowercase { term } => {
                write!(f, "main term `{term}` is not lowercase")
            }
            LexiconIssue::DuplicateMainTerm { term } => {
                write!(f, "main term `{term}` appears in more than one entry")
            }
            LexiconIssue::DuplicatePhrase { term, phrase } => {
                write!(f, "`{phrase}` listed twice under `{term}`")
            }
            LexiconIssue::EmptyPhrase { term, phrase } => {
                write!(f, "phrase `{phrase}` under `{term}` has no words")
            }
            LexiconIssue::PhraseTooLong { term, phrase, tokens } => write!(
                f,
                "phrase `{phrase}` under `{term}` has {tokens} words (max {MAX_PHRASE_TOKENS})"
            ),
            LexiconIssue::EmptyScale { scale } => write!(f, "scale `{scale}` has no entries"),
        }
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("failed to read lexicon: {0}")]
    Io(#[from] io::Error),
    #[error("invalid lexicon:\n{}", .0.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<LexiconIssue>),
}

impl LexiconError {
    pub fn issues(&self) -> &[LexiconIssue] {
        match self {
            LexiconError::Invalid(issues) => issues,
            LexiconError::Io(_) => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoodLexicon {
    entries: Vec<LexiconEntry>,
    version: String,
}

impl MoodLexicon {
    /// Validates and builds a lexicon from entries.
    pub fn new(entries: Vec<LexiconEntry>, version: impl Into<String>) -> Result<Self, LexiconError> {
        let issues = validate(&entries);
        if !issues.is_empty() {
            return Err(LexiconError::Invalid(issues));
        }
        Ok(MoodLexicon {
            entries,
            version: version.into(),
        })
    }

    /// The non-proprietary lexicon bundled with the crate.
    pub fn default_lexicon() -> Self {
        parse_lexicon(DEFAULT_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn entries_for(&self, scale: MoodScale) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.iter().filter(move |e| e.scale == scale)
    }

    pub fn synonym_count(&self) -> usize {
        self.entries.iter().map(|e| e.extended.len()).sum()
    }
}

/// Reads and validates a lexicon file.
pub fn load_lexicon<R: Read>(mut input: R) -> Result<MoodLexicon, LexiconError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    parse_lexicon(&text)
}

pub fn parse_lexicon(text: &str) -> Result<MoodLexicon, LexiconError> {
    let mut entries = Vec::new();
    let mut issues = Vec::new();
    let mut version = String::from("unversioned");

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("version:") {
                version = v.trim().to_owned();
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 3 {
            issues.push(LexiconIssue::Syntax {
                line: line_no,
                message: format!("expected `main | scale | synonyms`, found {} field(s)", fields.len()),
            });
            continue;
        }
        if fields[0].is_empty() {
            issues.push(LexiconIssue::EmptyMainTerm { line: line_no });
            continue;
        }
        let scale = match fields[1].parse::<MoodScale>() {
            Ok(s) => s,
            Err(UnknownScale(label)) => {
                issues.push(LexiconIssue::UnknownScale { line: line_no, label });
                continue;
            }
        };
        let extended = fields[2]
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::to_owned)
            .collect();
        entries.push(LexiconEntry {
            main_term: fields[0].to_owned(),
            scale,
            extended,
        });
    }

    issues.extend(validate(&entries));
    if !issues.is_empty() {
        return Err(LexiconError::Invalid(issues));
    }
    Ok(MoodLexicon { entries, version })
}

fn validate(entries: &[LexiconEntry]) -> Vec<LexiconIssue> {
    let mut issues = Vec::new();
    let mut seen_main = HashSet::new();
    let mut reported_dup = HashSet::new();

    for e in entries {
        let term = &e.main_term;
        if term.trim().is_empty() {
            issues.push(LexiconIssue::EmptyMainTerm { line: 0 });
            continue;
        }
        if *term != term.to_lowercase() {
            issues.push(LexiconIssue::NotLowercase { term: term.clone() });
        }
        if !seen_main.insert(term.as_str()) && reported_dup.insert(term.as_str()) {
            issues.push(LexiconIssue::DuplicateMainTerm { term: term.clone() });
        }
        check_phrase(term, term, &mut issues);

        let mut seen_phrase = HashSet::new();
        for p in &e.extended {
            if !seen_phrase.insert(p.as_str()) {
                issues.push(LexiconIssue::DuplicatePhrase {
                    term: term.clone(),
                    phrase: p.clone(),
                });
            }
            check_phrase(term, p, &mut issues);
        }
    }

    let present: BTreeSet<MoodScale> = entries.iter().map(|e| e.scale).collect();
    for scale in MoodScale::ALL {
        if !present.contains(&scale) {
            issues.push(LexiconIssue::EmptyScale { scale });
        }
    }
    issues
}

fn check_phrase(term: &str, phrase: &str, issues: &mut Vec<LexiconIssue>) {
    let n = tokenize(phrase).len();
    if n == 0 {
        issues.push(LexiconIssue::EmptyPhrase {
            term: term.to_owned(),
            phrase: phrase.to_owned(),
        });
    } else if n > MAX_PHRASE_TOKENS {
        issues.push(LexiconIssue::PhraseTooLong {
            term: term.to_owned(),
            phrase: phrase.to_owned(),
            tokens: n,
        });
    }
}

/// Two phrases under different main terms reduced to the same stems.
/// The earlier mapping is kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompileWarning {
    pub phrase: String,
    pub stems: Vec<String>,
    pub kept_term: String,
    pub dropped_term: String,
}

impl CompileWarning {
    pub const CODE: &'static str = "stem_collision";

    /// `code,term,colliding_term,phrase` with the dropped term first.
    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{}",
            Self::CODE,
            self.dropped_term,
            self.kept_term,
            self.stems.join(" ")
        )
    }
}

/// Stem-sequence dictionary built from a [`MoodLexicon`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledMatcher {
    terms: Vec<String>,
    scales: Vec<MoodScale>,
    sequences: HashMap<Vec<String>, usize>,
    max_phrase_len: usize,
    warnings: Vec<CompileWarning>,
    version: String,
}

/// Tokenizes and stems a lexicon phrase.
pub fn phrase_stems(phrase: &str) -> Vec<String> {
    tokenize(phrase).iter().map(|t| stem_surface(t)).collect()
}

/// Builds the stemmed matcher.
///
/// Main terms are inserted before any extended phrase, so a main term always
/// reaches itself; within each pass the earlier entry wins a collision.
pub fn compile(lex: &MoodLexicon) -> CompiledMatcher {
    let entries = lex.entries();
    let mut sequences: HashMap<Vec<String>, usize> = HashMap::new();
    let mut warnings = Vec::new();

    let mut insert = |phrase: &str, owner: usize| {
        let stems = phrase_stems(phrase);
        match sequences.get(&stems) {
            Some(&existing) if existing != owner => warnings.push(CompileWarning {
                phrase: phrase.to_owned(),
                stems,
                kept_term: entries[existing].main_term.clone(),
                dropped_term: entries[owner].main_term.clone(),
            }),
            Some(_) => {}
            None => {
                sequences.insert(stems, owner);
            }
        }
    };

    for (i, e) in entries.iter().enumerate() {
        insert(&e.main_term, i);
    }
    for (i, e) in entries.iter().enumerate() {
        for p in &e.extended {
            insert(p, i);
        }
    }

    let max_phrase_len = sequences.keys().map(Vec::len).max().unwrap_or(0);
    CompiledMatcher {
        terms: entries.iter().map(|e| e.main_term.clone()).collect(),
        scales: entries.iter().map(|e| e.scale).collect(),
        sequences,
        max_phrase_len,
        warnings,
        version: lex.version().to_owned(),
    }
}

impl CompiledMatcher {
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn term(&self, idx: usize) -> &str {
        &self.terms[idx]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.terms.iter().position(|t| t == term)
    }

    pub fn scale_of(&self, idx: usize) -> MoodScale {
        self.scales[idx]
    }

    pub fn scale_of_term(&self, term: &str) -> Option<MoodScale> {
        self.term_index(term).map(|i| self.scales[i])
    }

    pub fn max_phrase_len(&self) -> usize {
        self.max_phrase_len
    }

    pub fn warnings(&self) -> &[CompileWarning] {
        &self.warnings
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    /// Main-term index owning exactly this stem sequence.
    pub fn lookup<S: AsRef<str>>(&self, stems: &[S]) -> Option<usize> {
        if stems.len() > self.max_phrase_len {
            return None;
        }
        let key: Vec<String> = stems.iter().map(|s| s.as_ref().to_owned()).collect();
        self.sequences.get(&key).copied()
    }

    /// Longest stored sequence starting at `pos`, as (term index, length).
    pub fn longest_match(&self, stems: &[String], pos: usize) -> Option<(usize, usize)> {
        let avail = stems.len().saturating_sub(pos).min(self.max_phrase_len);
        (1..=avail)
            .rev()
            .find_map(|len| self.sequences.get(&stems[pos..pos + len]).map(|&t| (t, len)))
    }

    /// All (stem sequence, term index) pairs, sorted by sequence.
    pub fn sequences(&self) -> Vec<(&[String], usize)> {
        let mut out: Vec<_> = self.sequences.iter().map(|(k, &v)| (k.as_slice(), v)).collect();
        out.sort();
        out
    }

    /// Every stem that occurs anywhere in a stored sequence.
    pub fn stem_vocabulary(&self) -> HashSet<&str> {
        self.sequences
            .keys()
            .flat_map(|k| k.iter().map(String::as_str))
            .collect()
    }
}
