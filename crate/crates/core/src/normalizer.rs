//! Token normalization against the lexicon by symbol-series edit distance.
//!
//! Each token is classified as punctuation, foreign material, a matched
//! lemma, or unknown:
//!
//! 1. a token made only of punctuation marks is [`OutcomeKind::Punct`];
//! 2. a token the symbol table cannot reduce, or one the configured foreign
//!    matcher accepts, is [`OutcomeKind::Foreign`];
//! 3. a token whose series equals some variant's series matches it exactly;
//! 4. otherwise the closest variant sharing the token's first class symbol
//!    wins, and when its score is at or below the threshold the search is
//!    repeated on the series with its final suffix stripped. The stripped
//!    search only wins when strictly closer.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::MetricError;
use crate::lexicon::{EntryId, Lexicon, LexiconEntry};
use crate::symbols::{ClassSymbol, SymbolClassTable, SymbolSeries};

/// Default score at or below which the suffix-stripping fallback runs.
pub const DEFAULT_THRESHOLD: f64 = 0.7;

/// Characters treated as punctuation by default.
pub const DEFAULT_PUNCTUATION: &str = ",.;!?\"()[]{}¡¿«»…–—“”„";

/// Minimum number of single-element insertions, deletions and substitutions
/// turning `a` into `b`.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, x) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            let cost = if x == y { diag } else { diag + 1 };
            row[j + 1] = cost.min(up + 1).min(row[j] + 1);
            diag = up;
        }
    }
    row[b.len()]
}

/// Similarity in `[0, 1]`: `1 - distance / max(query_len, candidate_len)`.
pub fn convert_score(distance: usize, query_len: usize, candidate_len: usize) -> Result<f64, MetricError> {
    let longest = query_len.max(candidate_len);
    if longest == 0 {
        return Err(MetricError::UndefinedScore);
    }
    let ratio = distance.min(longest) as f64 / longest as f64;
    Ok(1.0 - ratio)
}

/// One suffix rule applied to the end of a symbol series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SuffixPattern {
    /// Strip exactly one trailing class symbol.
    AnyOne,
    /// Strip this exact symbol sequence when the series ends with it.
    Exact(Vec<ClassSymbol>),
}

/// How the final suffix is removed from a series before the fallback
/// search. Patterns are tried in order and the first that applies wins;
/// a pattern never strips the whole series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuffixPolicy {
    pub patterns: Vec<SuffixPattern>,
    /// How many successive strips the fallback may try.
    pub depth: usize,
}

impl Default for SuffixPolicy {
    fn default() -> Self {
        SuffixPolicy {
            patterns: alloc::vec![SuffixPattern::AnyOne],
            depth: 1,
        }
    }
}

impl SuffixPolicy {
    /// The series with its final suffix removed, if any pattern applies.
    pub fn strip(&self, symbols: &[ClassSymbol]) -> Option<Vec<ClassSymbol>> {
        self.patterns.iter().find_map(|p| match p {
            SuffixPattern::AnyOne if symbols.len() > 1 => Some(symbols[..symbols.len() - 1].to_vec()),
            SuffixPattern::Exact(suffix) if !suffix.is_empty() && symbols.len() > suffix.len() && symbols.ends_with(suffix) => {
                Some(symbols[..symbols.len() - suffix.len()].to_vec())
            }
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid suffix policy: {0}")]
pub struct SuffixPolicyError(pub String);

/// Parses `PATTERN[,PATTERN...][@DEPTH]`, where `*` strips any one symbol
/// and any other pattern is a literal class-symbol sequence, e.g. `n,in,*@2`.
impl FromStr for SuffixPolicy {
    type Err = SuffixPolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (list, depth) = match s.rsplit_once('@') {
            Some((list, d)) => (
                list,
                d.trim()
                    .parse::<usize>()
                    .map_err(|_| SuffixPolicyError(alloc::format!("bad depth `{d}`")))?,
            ),
            None => (s, 1),
        };
        let mut patterns = Vec::new();
        for item in list.split(',').map(str::trim) {
            match item {
                "" => return Err(SuffixPolicyError("empty pattern".to_string())),
                "*" => patterns.push(SuffixPattern::AnyOne),
                lit => patterns.push(SuffixPattern::Exact(lit.chars().map(ClassSymbol).collect())),
            }
        }
        Ok(SuffixPolicy { patterns, depth })
    }
}

/// Decides whether a raw token is foreign material.
pub trait ForeignMatcher {
    fn is_foreign(&self, raw: &str) -> bool;
}

impl<F: Fn(&str) -> bool> ForeignMatcher for F {
    fn is_foreign(&self, raw: &str) -> bool {
        self(raw)
    }
}

/// One token of a transcription.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptToken {
    /// The logical word, with `&`-joined fragments concatenated.
    pub raw: String,
    pub position: usize,
    /// Fragments the word was assembled from across `&` continuations.
    pub joined_from: Option<Vec<String>>,
    /// The transcription carried no space between this token and the next.
    #[serde(default)]
    pub split_next: bool,
}

impl TranscriptToken {
    pub fn new(raw: impl Into<String>, position: usize) -> Self {
        TranscriptToken {
            raw: raw.into(),
            position,
            joined_from: None,
            split_next: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomeKind {
    Punct,
    Foreign,
    Matched,
    Unknown,
}

impl OutcomeKind {
    /// The literal special tag used in corpus files.
    pub fn special_tag(self) -> Option<&'static str> {
        match self {
            OutcomeKind::Punct => Some("[punc]"),
            OutcomeKind::Foreign => Some("[foreign]"),
            OutcomeKind::Unknown => Some("[unknown]"),
            OutcomeKind::Matched => None,
        }
    }
}

/// The winning lexicon variant for a matched token.
#[derive(Clone, Debug, PartialEq)]
pub struct Match<'a> {
    pub entry: &'a LexiconEntry,
    pub id: EntryId,
    /// Index into `entry.variant_forms`.
    pub variant: usize,
    pub distance: usize,
    /// Similarity in `[0, 1]`.
    pub score: f64,
    pub used_fallback: bool,
}

/// Classification of one token.
#[derive(Clone, Debug, PartialEq)]
pub enum NormalizationOutcome<'a> {
    Punct,
    Foreign,
    Matched(Match<'a>),
    Unknown,
}

impl<'a> NormalizationOutcome<'a> {
    pub fn kind(&self) -> OutcomeKind {
        match self {
            NormalizationOutcome::Punct => OutcomeKind::Punct,
            NormalizationOutcome::Foreign => OutcomeKind::Foreign,
            NormalizationOutcome::Matched(_) => OutcomeKind::Matched,
            NormalizationOutcome::Unknown => OutcomeKind::Unknown,
        }
    }

    pub fn entry(&self) -> Option<&'a LexiconEntry> {
        match self {
            NormalizationOutcome::Matched(m) => Some(m.entry),
            _ => None,
        }
    }

    pub fn match_score(&self) -> Option<f64> {
        match self {
            NormalizationOutcome::Matched(m) => Some(m.score),
            _ => None,
        }
    }

    pub fn used_fallback(&self) -> bool {
        matches!(self, NormalizationOutcome::Matched(m) if m.used_fallback)
    }
}

/// A ranked lexicon candidate for a query series.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate<'a> {
    pub entry: &'a LexiconEntry,
    pub id: EntryId,
    pub variant: usize,
    pub distance: usize,
    pub score: f64,
}

impl Candidate<'_> {
    pub fn variant_form(&self) -> &str {
        &self.entry.variant_forms[self.variant]
    }

    fn series_len(&self) -> usize {
        self.entry.series_index[self.variant].len()
    }

    /// distance, then shorter series, then lemma, then load order
    fn rank_cmp(&self, other: &Self) -> Ordering {
        self.distance
            .cmp(&other.distance)
            .then_with(|| self.series_len().cmp(&other.series_len()))
            .then_with(|| self.entry.lemma.cmp(&other.entry.lemma))
            .then_with(|| self.id.cmp(&other.id))
            .then_with(|| self.variant.cmp(&other.variant))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizerConfig {
    pub threshold: f64,
    pub suffix_policy: SuffixPolicy,
    pub punctuation: String,
}

impl Default for NormalizerConfig {
    fn default() -> Self {
        NormalizerConfig {
            threshold: DEFAULT_THRESHOLD,
            suffix_policy: SuffixPolicy::default(),
            punctuation: DEFAULT_PUNCTUATION.to_string(),
        }
    }
}

/// Normalizes tokens against a lexicon. Holds only shared references, so
/// one instance can serve many threads.
pub struct Normalizer<'a> {
    table: &'a SymbolClassTable,
    lexicon: &'a Lexicon,
    config: NormalizerConfig,
    foreign: Option<&'a (dyn ForeignMatcher + Sync)>,
}

impl<'a> Normalizer<'a> {
    pub fn new(table: &'a SymbolClassTable, lexicon: &'a Lexicon, config: NormalizerConfig) -> Self {
        Normalizer {
            table,
            lexicon,
            config,
            foreign: None,
        }
    }

    pub fn with_foreign_matcher(mut self, matcher: &'a (dyn ForeignMatcher + Sync)) -> Self {
        self.foreign = Some(matcher);
        self
    }

    pub fn config(&self) -> &NormalizerConfig {
        &self.config
    }

    pub fn table(&self) -> &'a SymbolClassTable {
        self.table
    }

    pub fn lexicon(&self) -> &'a Lexicon {
        self.lexicon
    }

    pub fn is_punctuation(&self, raw: &str) -> bool {
        !raw.is_empty() && raw.chars().all(|c| self.config.punctuation.contains(c))
    }

    /// Every variant whose series starts with `symbols[0]`, best first.
    /// Variants of the same entry are listed separately.
    pub fn ranked_variants(&self, symbols: &[ClassSymbol]) -> Vec<Candidate<'a>> {
        let Some(&first) = symbols.first() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for &id in self.lexicon.bucket_ids(first) {
            let entry = self.lexicon.get(id);
            for (variant, series) in entry.series_index.iter().enumerate() {
                if series.first() != Some(first) {
                    continue;
                }
                let distance = levenshtein(symbols, series.symbols());
                let score = convert_score(distance, symbols.len(), series.len()).unwrap_or(0.0);
                out.push(Candidate {
                    entry,
                    id,
                    variant,
                    distance,
                    score,
                });
            }
        }
        out.sort_by(Candidate::rank_cmp);
        out
    }

    /// The best `k` distinct entries for a query series.
    pub fn top_candidates(&self, series: &SymbolSeries, k: usize) -> Vec<Candidate<'a>> {
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for c in self.ranked_variants(series.symbols()) {
            if out.len() == k {
                break;
            }
            if !seen.contains(&c.id) {
                seen.push(c.id);
                out.push(c);
            }
        }
        out
    }

    fn best(&self, symbols: &[ClassSymbol]) -> Option<Candidate<'a>> {
        self.ranked_variants(symbols).into_iter().next()
    }

    /// Classifies one token.
    pub fn normalize_token(&self, token: &TranscriptToken) -> NormalizationOutcome<'a> {
        let raw = token.raw.as_str();
        if self.is_punctuation(raw) {
            return NormalizationOutcome::Punct;
        }
        if self.foreign.is_some_and(|m| m.is_foreign(raw)) {
            return NormalizationOutcome::Foreign;
        }
        let series = match self.table.symbol_series(raw) {
            Ok(s) => s,
            Err(_) => return NormalizationOutcome::Foreign,
        };

        if let Some(&id) = self.lexicon.exact_ids(series.symbols()).first() {
            let entry = self.lexicon.get(id);
            let variant = entry
                .series_index
                .iter()
                .position(|s| s.symbols() == series.symbols())
                .expect("exact index agrees with entry series");
            return NormalizationOutcome::Matched(Match {
                entry,
                id,
                variant,
                distance: 0,
                score: 1.0,
                used_fallback: false,
            });
        }

        let Some(best) = self.best(series.symbols()) else {
            return NormalizationOutcome::Unknown;
        };
        let mut winner = Match {
            entry: best.entry,
            id: best.id,
            variant: best.variant,
            distance: best.distance,
            score: best.score,
            used_fallback: false,
        };

        if winner.score <= self.config.threshold {
            let mut current = series.symbols().to_vec();
            for _ in 0..self.config.suffix_policy.depth {
                let Some(stemmed) = self.config.suffix_policy.strip(&current) else {
                    break;
                };
                if let Some(alt) = self.best(&stemmed) {
                    if alt.distance < winner.distance {
                        winner = Match {
                            entry: alt.entry,
                            id: alt.id,
                            variant: alt.variant,
                            distance: alt.distance,
                            score: alt.score,
                            used_fallback: true,
                        };
                    }
                }
                current = stemmed;
            }
        }
        NormalizationOutcome::Matched(winner)
    }

    /// One outcome per token, in token order.
    pub fn normalize_document<'t>(&self, tokens: &'t [TranscriptToken]) -> Vec<(&'t TranscriptToken, NormalizationOutcome<'a>)> {
        tokens.iter().map(|t| (t, self.normalize_token(t))).collect()
    }
}
