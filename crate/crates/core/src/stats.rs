//! Corpus statistics: general counts and the POS tag distribution.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use core::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::{AlignedRecord, CorpusDocument, JOIN_MARK, SPLIT_MARK};
use crate::lexicon::PosTag;
use crate::symbols::canonical;

/// Normalized value that closes a sentence.
pub const SENTENCE_END: &str = ".";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub texts: usize,
    /// Non-whitespace code points of the original fields, `&`/`#` marks excluded.
    pub total_chars: usize,
    pub total_words: usize,
    pub mean_chars_per_text: f64,
    pub mean_words_per_text: f64,
    /// Distinct normalized values across the whole corpus.
    pub unique_words: usize,
    /// Mean over texts of each text's distinct normalized values.
    pub mean_unique_words_per_text: f64,
    pub sentences: usize,
    pub mean_sentences_per_text: f64,
    /// Untagged (legacy) records are counted as `UN`.
    pub tag_histogram: BTreeMap<PosTag, usize>,
}

fn count_chars(original: &str) -> usize {
    canonical(original)
        .chars()
        .filter(|&c| !c.is_whitespace() && c != JOIN_MARK && c != SPLIT_MARK)
        .count()
}

/// Per-document partial counts; the corpus figures are a fold of these.
#[derive(Clone, Debug, Default)]
struct Partial {
    chars: usize,
    words: usize,
    unique_in_text: usize,
    sentences: usize,
    vocabulary: BTreeSet<String>,
    tags: BTreeMap<PosTag, usize>,
}

fn partial(doc: &CorpusDocument) -> Partial {
    let mut p = Partial::default();
    for rec in &doc.records {
        match rec {
            AlignedRecord::Continuation { fragment } => p.chars += count_chars(fragment),
            AlignedRecord::Word(w) => {
                p.chars += count_chars(&w.original);
                p.words += 1;
                if w.normalized == SENTENCE_END {
                    p.sentences += 1;
                }
                p.vocabulary.insert(w.normalized.clone());
                *p.tags.entry(w.pos.unwrap_or(PosTag::UN)).or_default() += 1;
            }
        }
    }
    p.unique_in_text = p.vocabulary.len();
    p
}

fn mean(total: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        total as f64 / n as f64
    }
}

pub fn compute_stats(docs: &[CorpusDocument]) -> CorpusStats {
    let mut vocabulary = BTreeSet::new();
    let mut stats = CorpusStats {
        texts: docs.len(),
        ..CorpusStats::default()
    };
    let mut unique_sum = 0;
    for p in docs.iter().map(partial) {
        stats.total_chars += p.chars;
        stats.total_words += p.words;
        stats.sentences += p.sentences;
        unique_sum += p.unique_in_text;
        vocabulary.extend(p.vocabulary);
        for (tag, n) in p.tags {
            *stats.tag_histogram.entry(tag).or_default() += n;
        }
    }
    stats.unique_words = vocabulary.len();
    stats.mean_chars_per_text = mean(stats.total_chars, docs.len());
    stats.mean_words_per_text = mean(stats.total_words, docs.len());
    stats.mean_unique_words_per_text = mean(unique_sum, docs.len());
    stats.mean_sentences_per_text = mean(stats.sentences, docs.len());
    stats
}

impl CorpusStats {
    /// General statistics followed by the tag distribution, tab-separated.
    pub fn to_report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "parameter\ttotal count");
        let _ = writeln!(out, "total non-whitespace characters\t{}", self.total_chars);
        let _ = writeln!(out, "mean characters / text\t{:.2}", self.mean_chars_per_text);
        let _ = writeln!(out, "total gold-standard words\t{}", self.total_words);
        let _ = writeln!(out, "mean words / text\t{:.2}", self.mean_words_per_text);
        let _ = writeln!(
            out,
            "total unique gold-standard words (incl. punctuation)\t{}",
            self.unique_words
        );
        let _ = writeln!(out, "mean unique words / text\t{:.1}", self.mean_unique_words_per_text);
        let _ = writeln!(out, "total sentences\t{}", self.sentences);
        let _ = writeln!(out, "mean sentences / text\t{:.1}", self.mean_sentences_per_text);
        let _ = writeln!(out);
        let _ = writeln!(out, "Tag\tClass\t# Tokens");
        for tag in PosTag::ALL {
            let n = self.tag_histogram.get(&tag).copied().unwrap_or(0);
            let _ = writeln!(out, "{}\t{}\t{}", tag, tag.class_name(), n);
        }
        let total: usize = self.tag_histogram.values().sum();
        let _ = writeln!(out, "Total\t\t{}", total);
        out
    }

    pub fn histogram_total(&self) -> usize {
        self.tag_histogram.values().sum()
    }
}
