//! Normalization, tagging and evaluation for noisy field transcriptions.
//!
//! Transcribed words are reduced to series of abstract symbol classes and
//! matched against a small lexicon by edit distance. The matches are written
//! out in a tab-separated aligned corpus format, tagged for part of speech by
//! lemma lookup, and scored against gold data with normalized edit distance
//! and BLEU.
//!
//! The crate is `no_std` and only needs `alloc`. File access, the command
//! line and the review service live in the `fieldnorm` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod lexicon;
pub mod normalizer;
pub mod pipeline;
pub mod stats;
pub mod symbols;
pub mod tagger;
pub mod transcript;

pub use corpus::{parse_document, validate, write_document, AlignedRecord, Certainty, CorpusDocument, ParseOptions, WordRecord};
pub use error::{CertaintyError, CorpusError, LexiconError, MetricError, TableError, TranscriptError, WriteError};
pub use evaluation::{bleu, evaluate, mean_wer, normalized_edit_distance, EvalReport};
pub use lexicon::{EntryId, Lexicon, LexiconEntry, PosTag};
pub use normalizer::{
    convert_score, levenshtein, NormalizationOutcome, Normalizer, NormalizerConfig, OutcomeKind, SuffixPattern, SuffixPolicy,
    TranscriptToken,
};
pub use stats::{compute_stats, CorpusStats};
pub use symbols::{ClassSymbol, NotReducible, SymbolClassTable, SymbolSeries};
pub use tagger::{resolve_conflict, tag, ConflictDiagnostic};
