//! From token streams to mood vectors, and from mood vectors to
//! delivery-year buckets.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::EmailRecord;
use crate::exec::Exec;
use crate::format::sig6;
use crate::lexicon::{CompiledMatcher, MoodScale};
use crate::textproc::{tokenize, StemCache};

/// Tolerance on the Euclidean norm of a normalized vector.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Match counts per main term, indexed like [`CompiledMatcher::terms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPomsScores {
    counts: Vec<u32>,
}

impl RawPomsScores {
    pub fn zeros(term_count: usize) -> Self {
        RawPomsScores {
            counts: vec![0; term_count],
        }
    }

    pub fn count(&self, term_idx: usize) -> u32 {
        self.counts[term_idx]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    /// Non-zero counts keyed by main term.
    pub fn by_term(&self, matcher: &CompiledMatcher) -> BTreeMap<String, u32> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (matcher.term(i).to_owned(), c))
            .collect()
    }
}

/// Counts lexicon matches in a token stream.
///
/// Scans left to right; at each position the longest stored stem sequence
/// wins and the scan resumes after it, so matches never overlap.
pub fn score_tokens<S: AsRef<str>>(tokens: &[S], matcher: &CompiledMatcher) -> RawPomsScores {
    let mut cache = StemCache::new();
    let stems = cache.stems(tokens);
    score_stems(&stems, matcher)
}

/// [`score_tokens`] over already-stemmed tokens.
pub fn score_stems(stems: &[String], matcher: &CompiledMatcher) -> RawPomsScores {
    let mut scores = RawPomsScores::zeros(matcher.term_count());
    let mut pos = 0;
    while pos < stems.len() {
        match matcher.longest_match(stems, pos) {
            Some((term, len)) => {
                scores.counts[term] += 1;
                pos += len;
            }
            None => pos += 1,
        }
    }
    scores
}

/// Six mood components in scale order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoodVector {
    components: [f64; 6],
    normalized: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cannot normalize the zero mood vector")]
pub struct ZeroVector;

impl MoodVector {
    pub fn raw(components: [f64; 6]) -> Self {
        MoodVector {
            components,
            normalized: false,
        }
    }

    pub fn zero() -> Self {
        Self::raw([0.0; 6])
    }

    pub fn components(&self) -> [f64; 6] {
        self.components
    }

    pub fn get(&self, scale: MoodScale) -> f64 {
        self.components[scale.index()]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&c| c == 0.0)
    }
}

/// Applies the scoring key: each scale sums the counts of its main terms.
pub fn to_mood_vector(scores: &RawPomsScores, matcher: &CompiledMatcher) -> MoodVector {
    let mut v = [0.0; 6];
    for (i, &c) in scores.counts.iter().enumerate() {
        v[matcher.scale_of(i).index()] += f64::from(c);
    }
    MoodVector::raw(v)
}

/// Scales to unit Euclidean length.
pub fn normalize(v: &MoodVector) -> Result<MoodVector, ZeroVector> {
    let norm = v.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(ZeroVector);
    }
    Ok(MoodVector {
        components: v.components.map(|c| c / norm),
        normalized: true,
    })
}

/// Audit row for one scored message.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredEmail {
    pub id: String,
    pub delivery_year: i32,
    pub raw: MoodVector,
    /// `None` when the message matched nothing.
    pub normalized: Option<MoodVector>,
    pub match_count: u64,
}

fn score_one(cache: &mut StemCache, record: &EmailRecord, matcher: &CompiledMatcher) -> ScoredEmail {
    let stems = cache.stems(&tokenize(record.body()));
    let scores = score_stems(&stems, matcher);
    let raw = to_mood_vector(&scores, matcher);
    ScoredEmail {
        id: record.id().to_owned(),
        delivery_year: record.delivery_year(),
        normalized: normalize(&raw).ok(),
        raw,
        match_count: scores.total(),
    }
}

/// Scores every record, in input order.
pub fn score_records(records: &[EmailRecord], matcher: &CompiledMatcher, exec: Exec) -> Vec<ScoredEmail> {
    exec.map_init(records, StemCache::new, |cache, r| score_one(cache, r, matcher))
}

/// All normalized vectors delivered in one calendar year.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct YearBucket {
    pub year: i32,
    vectors: Vec<[f64; 6]>,
    pub zero_match_count: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("bucket {year}: vector {index} has norm {norm}, expected 1")]
pub struct NotNormalized {
    pub year: i32,
    pub index: usize,
    pub norm: f64,
}

impl YearBucket {
    pub fn new(year: i32) -> Self {
        YearBucket {
            year,
            ..Self::default()
        }
    }

    /// Adds a vector; it must already be normalized.
    pub fn push(&mut self, v: MoodVector) {
        assert!(v.is_normalized(), "bucket vectors must be normalized");
        self.vectors.push(v.components);
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> impl Iterator<Item = MoodVector> + '_ {
        self.vectors.iter().map(|&components| MoodVector {
            components,
            normalized: true,
        })
    }

    /// Per-message values of one scale.
    pub fn sample(&self, scale: MoodScale) -> Vec<f64> {
        self.vectors.iter().map(|v| v[scale.index()]).collect()
    }

    pub fn mean(&self, scale: MoodScale) -> Option<f64> {
        if self.vectors.is_empty() {
            return None;
        }
        let sum: f64 = self.vectors.iter().map(|v| v[scale.index()]).sum();
        Some(sum / self.vectors.len() as f64)
    }

    /// Checks the unit-norm invariant, e.g. after deserializing.
    pub fn validate(&self) -> Result<(), NotNormalized> {
        for (index, v) in self.vectors.iter().enumerate() {
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > NORM_TOLERANCE || v.iter().any(|&c| c < 0.0) {
                return Err(NotNormalized {
                    year: self.year,
                    index,
                    norm,
                });
            }
        }
        Ok(())
    }
}

pub type Buckets = BTreeMap<i32, YearBucket>;

/// Groups scored messages by delivery year. Zero-match messages only bump
/// the bucket's `zero_match_count`.
pub fn bucketize(scored: &[ScoredEmail]) -> Buckets {
    let mut buckets = Buckets::new();
    for s in scored {
        let b = buckets
            .entry(s.delivery_year)
            .or_insert_with(|| YearBucket::new(s.delivery_year));
        match s.normalized {
            Some(v) => b.push(v),
            None => b.zero_match_count += 1,
        }
    }
    buckets
}

pub fn score_corpus(records: &[EmailRecord], matcher: &CompiledMatcher) -> Buckets {
    score_corpus_with(records, matcher, Exec::default())
}

pub fn score_corpus_with(records: &[EmailRecord], matcher: &CompiledMatcher, exec: Exec) -> Buckets {
    bucketize(&score_records(records, matcher, exec))
}

/// `id,delivery_year,tension,...,confusion,match_count`, with normalized
/// components (all zero for zero-match messages).
pub fn write_scores_csv<W: Write>(scored: &[ScoredEmail], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["id".to_owned(), "delivery_year".to_owned()];
    header.extend(MoodScale::ALL.iter().map(|s| s.label().to_owned()));
    header.push("match_count".to_owned());
    w.write_record(&header)?;
    for s in scored {
        let comps = s.normalized.map_or([0.0; 6], |v| v.components());
        let mut row = vec![s.id.clone(), s.delivery_year.to_string()];
        row.extend(comps.iter().map(|&c| sig6(c)));
        row.push(s.match_count.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{compile, parse_lexicon, MoodLexicon};
    use chrono::NaiveDate;
    use proptest::prelude::*;

    fn matcher() -> CompiledMatcher {
        compile(&MoodLexicon::default_lexicon())
    }

    fn counts(text: &str, m: &CompiledMatcher) -> BTreeMap<String, u32> {
        score_tokens(&tokenize(text), m).by_term(m)
    }

    fn rec(id: &str, year: i32, body: &str) -> EmailRecord {
        let d = |y| NaiveDate::from_ymd_opt(y, 6, 1).unwrap();
        EmailRecord::new(id, d(2006), d(year), body).unwrap()
    }

    #[test]
    fn daunted_scores_discouraged() {
        let m = matcher();
        assert_eq!(
            counts("I felt daunted today", &m),
            BTreeMap::from([("discouraged".into(), 1)])
        );
    }

    #[test]
    fn angrily_twice_scores_angry_twice() {
        let m = matcher();
        assert_eq!(counts("angrily angrily", &m), BTreeMap::from([("angry".into(), 2)]));
    }

    #[test]
    fn phrase_consumes_its_tokens() {
        // "lost" alone is a confusion synonym in the default lexicon.
        let m = matcher();
        assert_eq!(
            counts("he lost momentum yesterday", &m),
            BTreeMap::from([("discouraged".into(), 1)])
        );
        assert_eq!(counts("he was lost", &m), BTreeMap::from([("disoriented".into(), 1)]));
    }

    #[test]
    fn empty_tokens_score_zero() {
        let m = matcher();
        let s = score_tokens::<String>(&[], &m);
        assert_eq!(s.total(), 0);
        assert!(to_mood_vector(&s, &m).is_zero());
    }

    #[test]
    fn key_application() {
        let m = matcher();
        let s = score_tokens(&tokenize("angry angry discouraged"), &m);
        let v = to_mood_vector(&s, &m);
        assert_eq!(v.components(), [0.0, 1.0, 2.0, 0.0, 0.0, 0.0]);
        let s = score_tokens(&tokenize("sad gloomy sad"), &m);
        assert_eq!(to_mood_vector(&s, &m).get(MoodScale::Depression), 3.0);
    }

    #[test]
    fn normalize_examples() {
        let v = normalize(&MoodVector::raw([3.0, 4.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(v.is_normalized());
        let c = v.components();
        assert!((c[0] - 0.6).abs() < 1e-12 && (c[1] - 0.8).abs() < 1e-12);
        let v = normalize(&MoodVector::raw([1.0; 6])).unwrap();
        for c in v.components() {
            assert!((c - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        }
        assert_eq!(normalize(&MoodVector::zero()), Err(ZeroVector));
    }

    #[test]
    fn corpus_buckets_with_zero_match() {
        let m = matcher();
        let records = vec![rec("a", 2010, "I felt daunted"), rec("b", 2010, "nothing here at all")];
        let buckets = score_corpus(&records, &m);
        assert_eq!(buckets.len(), 1);
        let b = &buckets[&2010];
        assert_eq!(b.len(), 1);
        assert_eq!(b.zero_match_count, 1);
        assert_eq!(b.sample(MoodScale::Depression), [1.0]);
        assert!(score_corpus(&[], &m).is_empty());
    }

    #[test]
    fn bucket_validate_rejects_unnormalized() {
        let json = r#"{"year":2010,"vectors":[[1.0,1.0,0,0,0,0]],"zero_match_count":0}"#;
        let b: YearBucket = serde_json::from_str(json).unwrap();
        assert!(b.validate().is_err());
    }

    #[test]
    fn scores_csv_layout() {
        let m = matcher();
        let scored = score_records(
            &[rec("a", 2012, "tense and sad"), rec("z", 2013, "plain")],
            &m,
            Exec::Sequential,
        );
        let mut buf = Vec::new();
        write_scores_csv(&scored, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(
            lines[0],
            "id,delivery_year,tension,depression,anger,vigor,fatigue,confusion,match_count"
        );
        assert_eq!(lines[1], "a,2012,0.707107,0.707107,0,0,0,0,2");
        assert_eq!(lines[2], "z,2013,0,0,0,0,0,0,0");
    }

    fn single_word_matcher() -> CompiledMatcher {
        compile(
            &parse_lexicon(
                "tense | tension | edgy\nsad | depression | glum\nangry | anger | mad\n\
                 lively | vigor | peppy\ntired | fatigue | weary\nconfused | confusion | muddled\n",
            )
            .unwrap(),
        )
    }

    const WORDS: &[&str] = &[
        "tense", "edgy", "sad", "glum", "mad", "peppy", "weary", "muddled", "table", "the", "angrily",
    ];

    proptest! {
        #[test]
        fn additivity_for_single_word_lexicon(a in prop::collection::vec(0..WORDS.len(), 0..30),
                                              b in prop::collection::vec(0..WORDS.len(), 0..30)) {
            let m = single_word_matcher();
            let ta: Vec<&str> = a.iter().map(|&i| WORDS[i]).collect();
            let tb: Vec<&str> = b.iter().map(|&i| WORDS[i]).collect();
            let joined: Vec<&str> = ta.iter().chain(&tb).copied().collect();
            let sa = score_tokens(&ta, &m);
            let sb = score_tokens(&tb, &m);
            let sj = score_tokens(&joined, &m);
            for i in 0..m.term_count() {
                prop_assert_eq!(sj.count(i), sa.count(i) + sb.count(i));
            }
        }

        #[test]
        fn permutation_invariance_for_single_word_lexicon(a in prop::collection::vec(0..WORDS.len(), 0..30), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let m = single_word_matcher();
            let toks: Vec<&str> = a.iter().map(|&i| WORDS[i]).collect();
            let mut shuffled = toks.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(score_tokens(&toks, &m), score_tokens(&shuffled, &m));
        }

        #[test]
        fn phrase_lexicon_is_additive_across_a_neutral_boundary(text_a in "[a-z ]{0,80}", text_b in "[a-z ]{0,80}") {
            // "table" stems outside the lexicon vocabulary, so no phrase can span it.
            let m = matcher();
            let ta = tokenize(&text_a);
            let tb = tokenize(&text_b);
            let joined: Vec<String> = ta.iter().cloned().chain(["table".to_owned()]).chain(tb.iter().cloned()).collect();
            let (sa, sb, sj) = (score_tokens(&ta, &m), score_tokens(&tb, &m), score_tokens(&joined, &m));
            for i in 0..m.term_count() {
                prop_assert_eq!(sj.count(i), sa.count(i) + sb.count(i));
            }
        }

        #[test]
        fn normalize_is_unit_and_scale_invariant(v in prop::array::uniform6(0.0f64..100.0), c in 0.001f64..1000.0) {
            let raw = MoodVector::raw(v);
            prop_assume!(!raw.is_zero());
            let n = normalize(&raw).unwrap();
            prop_assert!((n.norm() - 1.0).abs() < NORM_TOLERANCE);
            let scaled = normalize(&MoodVector::raw(v.map(|x| x * c))).unwrap();
            for (a, b) in n.components().iter().zip(scaled.components()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn mass_is_preserved(text in "[a-z ]{0,200}") {
            let m = matcher();
            let s = score_tokens(&tokenize(&text), &m);
            let v = to_mood_vector(&s, &m);
            prop_assert_eq!(v.components().iter().sum::<f64>(), s.total() as f64);
        }
    }
}
