//! Conformance against the published Porter test vocabulary
//! (`voc.txt` / `output.txt`, 23,531 word pairs).

use moodscope::textproc::porter_stem;

const VOC: &str = include_str!("data/porter_voc.txt");
const OUTPUT: &str = include_str!("data/porter_output.txt");

#[test]
fn every_vocabulary_word_stems_as_published() {
    let words: Vec<&str> = VOC.lines().collect();
    let stems: Vec<&str> = OUTPUT.lines().collect();
    assert_eq!(words.len(), 23_531);
    assert_eq!(words.len(), stems.len());

    let mismatches: Vec<_> = words
        .iter()
        .zip(&stems)
        .filter(|(w, s)| porter_stem(w) != **s)
        .map(|(w, s)| format!("{w}: got {}, want {s}", porter_stem(w)))
        .collect();
    assert!(
        mismatches.is_empty(),
        "{} mismatches, first: {:?}",
        mismatches.len(),
        &mismatches[..mismatches.len().min(10)]
    );
}

#[test]
fn stems_never_grow_by_more_than_one() {
    for w in VOC.lines() {
        assert!(porter_stem(w).len() <= w.len() + 1, "{w}");
    }
}
