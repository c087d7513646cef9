use alloc::string::String;

use thiserror::Error;

/// Errors loading a symbol-class table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("symbol table has no entries")]
    Empty,
    #[error("line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("line {line}: class `{symbol}` is not a single symbol")]
    InvalidClass { line: usize, symbol: String },
    #[error("line {line}: duplicate cluster `{cluster}` (first defined on line {first_line})")]
    DuplicateCluster {
        cluster: String,
        first_line: usize,
        line: usize,
    },
}

/// Errors loading a lexicon.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("line {line}: expected `lemma<TAB>gloss<TAB>pos[<TAB>variants[<TAB>origin]]`")]
    MalformedRow { line: usize },
    #[error("line {line}: empty lemma")]
    EmptyLemma { line: usize },
    #[error("line {line}: unknown POS tag `{tag}`")]
    UnknownPos { line: usize, tag: String },
    #[error("line {line}: variant `{variant}` is not reducible by the symbol table")]
    UnreducibleVariant { line: usize, variant: String },
    #[error("line {line}: lemma `{lemma}` is not among its variants")]
    LemmaNotInVariants { line: usize, lemma: String },
    #[error("line {line}: {pos} entry `{lemma}` may only list its base form")]
    ContentWordVariants {
        line: usize,
        lemma: String,
        pos: crate::lexicon::PosTag,
    },
    #[error("line {line}: invalid origin flag `{value}`")]
    InvalidOrigin { line: usize, value: String },
}

/// Errors reading the aligned corpus format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("line {line}: expected {expected} tab-separated fields, found {found}")]
    FieldCount {
        line: usize,
        expected: &'static str,
        found: usize,
    },
    #[error("line {line}: continuation line must leave the other fields blank")]
    ContinuationNotBlank { line: usize },
    #[error("line {line}: malformed certainty `{value}`")]
    Certainty { line: usize, value: String },
    #[error("line {line}: unknown POS tag `{tag}`")]
    UnknownPos { line: usize, tag: String },
    #[error("line {line}: empty original field")]
    EmptyOriginal { line: usize },
    #[error("line {line}: more than one `#` in original field")]
    MultipleSplits { line: usize },
    #[error("line {line}: `#` not allowed in a continuation line")]
    SplitInContinuation { line: usize },
    #[error("line {line}: `&` is only allowed at the end of the original field")]
    MisplacedJoin { line: usize },
    #[error("line {line}: `&` fragment is not followed by a word")]
    DanglingContinuation { line: usize },
    #[error("line {line}: field contains a line break")]
    EmbeddedNewline { line: usize },
}

impl CorpusError {
    pub fn line(&self) -> usize {
        match *self {
            CorpusError::FieldCount { line, .. }
            | CorpusError::ContinuationNotBlank { line }
            | CorpusError::Certainty { line, .. }
            | CorpusError::UnknownPos { line, .. }
            | CorpusError::EmptyOriginal { line }
            | CorpusError::MultipleSplits { line }
            | CorpusError::SplitInContinuation { line }
            | CorpusError::MisplacedJoin { line }
            | CorpusError::DanglingContinuation { line }
            | CorpusError::EmbeddedNewline { line } => line,
        }
    }
}

/// A document that cannot be serialized without breaking the format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WriteError {
    #[error("record {record}: {reason}")]
    Invalid { record: usize, reason: &'static str },
    #[error("record {record}: missing POS tag")]
    MissingPos { record: usize },
    #[error("document ends with an unresolved `&` fragment")]
    DanglingContinuation,
}

/// Invalid certainty value.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum CertaintyError {
    #[error("certainty must be in (0, 100.0]")]
    OutOfRange,
    #[error("certainty must have at most one decimal place")]
    Precision,
}

/// Errors from metric computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("no documents to evaluate")]
    EmptyCorpus,
    #[error("hypothesis has {hypothesis} documents but reference has {reference}")]
    CountMismatch { hypothesis: usize, reference: usize },
    #[error("normalized score undefined when both lengths are zero")]
    UndefinedScore,
}

/// Errors in transcription input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranscriptError {
    #[error("transcription ends with an unresolved `&` fragment `{fragment}`")]
    DanglingContinuation { fragment: String },
}
