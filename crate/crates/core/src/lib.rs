//! Mood scoring for corpora of future-dated messages.
//!
//! Text is tokenized and Porter-stemmed, matched against a mood lexicon
//! (main mood adjectives plus synonym phrases, each main term scoring on one
//! of six mood scales), and turned into unit-length six-dimensional mood
//! vectors. Vectors are grouped by delivery year, compared pairwise with
//! two-sample Kolmogorov-Smirnov tests, and summarized as z-scored yearly
//! trend lines with a quadratic fit.

pub mod corpus;
pub mod exec;
pub mod format;
pub mod lexicon;
pub mod scoring;
pub mod stats;
pub mod synth;
pub mod textproc;

pub use exec::Exec;
