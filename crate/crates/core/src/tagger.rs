//! Deterministic POS tagging by lemma lookup.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::lexicon::{Lexicon, LexiconEntry, PosTag};
use crate::normalizer::NormalizationOutcome;

/// Tag implied by an outcome on its own.
pub fn tag(outcome: &NormalizationOutcome<'_>) -> PosTag {
    match outcome {
        NormalizationOutcome::Matched(m) => m.entry.pos,
        NormalizationOutcome::Punct => PosTag::PU,
        NormalizationOutcome::Foreign => PosTag::FW,
        NormalizationOutcome::Unknown => PosTag::UN,
    }
}

/// A lemma whose lexicon entries disagree on POS with no single origin mark.
/// Left for a human to resolve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictDiagnostic {
    pub lemma: String,
    pub candidates: Vec<PosTag>,
    /// Entries marked as originating class (zero, or more than one).
    pub origin_marks: usize,
    /// Lexicon lines of the conflicting entries.
    pub lines: Vec<usize>,
    /// Token position, when raised while tagging a document.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub position: Option<usize>,
}

/// Picks one tag for entries sharing a lemma surface.
///
/// Agreeing entries yield their common tag. When they disagree, the single
/// entry marked as origin wins; otherwise the result is `UN` with a
/// diagnostic.
pub fn resolve_conflict(entries: &[&LexiconEntry]) -> (PosTag, Option<ConflictDiagnostic>) {
    let Some(first) = entries.first() else {
        return (PosTag::UN, None);
    };
    if entries.iter().all(|e| e.pos == first.pos) {
        return (first.pos, None);
    }
    let origins: Vec<PosTag> = entries.iter().filter(|e| e.origin).map(|e| e.pos).collect();
    match origins.as_slice() {
        [single] => (*single, None),
        _ => {
            let mut candidates: Vec<PosTag> = entries.iter().map(|e| e.pos).collect();
            candidates.sort();
            candidates.dedup();
            (
                PosTag::UN,
                Some(ConflictDiagnostic {
                    lemma: first.lemma.clone(),
                    candidates,
                    origin_marks: origins.len(),
                    lines: entries.iter().map(|e| e.line).collect(),
                    position: None,
                }),
            )
        }
    }
}

/// Tag of a matched lemma, taking every entry for that lemma into account.
pub fn tag_with_lexicon(outcome: &NormalizationOutcome<'_>, lexicon: &Lexicon) -> (PosTag, Option<ConflictDiagnostic>) {
    match outcome {
        NormalizationOutcome::Matched(m) => {
            let entries = lexicon.entries_for_lemma(&m.entry.lemma);
            if entries.len() <= 1 {
                (m.entry.pos, None)
            } else {
                resolve_conflict(&entries)
            }
        }
        other => (tag(other), None),
    }
}

/// Tag for an already-normalized form, as found in a corpus file.
pub fn tag_normalized(normalized: &str, gloss: &str, lexicon: &Lexicon) -> (PosTag, Option<ConflictDiagnostic>) {
    match gloss {
        "[punc]" => return (PosTag::PU, None),
        "[foreign]" => return (PosTag::FW, None),
        "[unknown]" => return (PosTag::UN, None),
        _ => {}
    }
    if normalized == "[unknown]" {
        return (PosTag::UN, None);
    }
    let entries = lexicon.entries_for_lemma(normalized);
    if entries.is_empty() {
        (PosTag::UN, None)
    } else {
        resolve_conflict(&entries)
    }
}
