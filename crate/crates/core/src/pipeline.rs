//! From raw transcription to a pre-annotated corpus document.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{AlignedRecord, Certainty, CorpusDocument, WordRecord, SPLIT_MARK};
use crate::error::TranscriptError;
use crate::lexicon::{Lexicon, PosTag};
use crate::normalizer::{NormalizationOutcome, Normalizer, OutcomeKind, TranscriptToken};
use crate::tagger::{tag_normalized, tag_with_lexicon, ConflictDiagnostic};
use crate::transcript::tokenize;

/// A machine-annotated document and the tagging conflicts it raised.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotation {
    pub document: CorpusDocument,
    pub diagnostics: Vec<ConflictDiagnostic>,
}

/// Glosses are written in single quotes; special tags are not.
pub fn quote_gloss(gloss: &str) -> String {
    if gloss.len() >= 2 && gloss.starts_with('\'') && gloss.ends_with('\'') {
        gloss.to_string()
    } else {
        format!("'{gloss}'")
    }
}

/// The normalized, gloss and certainty fields for an outcome.
pub fn outcome_fields(token: &TranscriptToken, outcome: &NormalizationOutcome<'_>) -> (String, String, Certainty) {
    match outcome {
        NormalizationOutcome::Matched(m) => (m.entry.lemma.clone(), quote_gloss(&m.entry.gloss), Certainty::from_score(m.score)),
        NormalizationOutcome::Punct => (token.raw.clone(), "[punc]".to_string(), Certainty::FULL),
        NormalizationOutcome::Foreign => (token.raw.clone(), "[foreign]".to_string(), Certainty::FULL),
        NormalizationOutcome::Unknown => {
            let tag = OutcomeKind::Unknown.special_tag().unwrap_or("[unknown]");
            (tag.to_string(), tag.to_string(), Certainty::FULL)
        }
    }
}

/// Corpus lines for one token: continuation lines for its `&` fragments,
/// then the annotated line.
pub fn token_records(token: &TranscriptToken, normalized: String, gloss: String, certainty: Certainty, pos: PosTag) -> Vec<AlignedRecord> {
    let mut records = Vec::new();
    let mut original = match &token.joined_from {
        Some(fragments) if fragments.len() > 1 => {
            for f in &fragments[..fragments.len() - 1] {
                records.push(AlignedRecord::Continuation { fragment: f.clone() });
            }
            fragments[fragments.len() - 1].clone()
        }
        _ => token.raw.clone(),
    };
    if token.split_next {
        original.push(SPLIT_MARK);
    }
    records.push(AlignedRecord::Word(WordRecord {
        original,
        normalized,
        gloss,
        certainty,
        pos: Some(pos),
    }));
    records
}

/// Normalizes and tags `tokens` into a document.
pub fn annotate_tokens(id: &str, tokens: &[TranscriptToken], normalizer: &Normalizer<'_>) -> Annotation {
    let lexicon = normalizer.lexicon();
    let mut document = CorpusDocument::new(id);
    let mut diagnostics = Vec::new();
    for (token, outcome) in normalizer.normalize_document(tokens) {
        let (pos, diag) = tag_with_lexicon(&outcome, lexicon);
        if let Some(mut d) = diag {
            d.position = Some(token.position);
            diagnostics.push(d);
        }
        let (normalized, gloss, certainty) = outcome_fields(token, &outcome);
        document.records.extend(token_records(token, normalized, gloss, certainty, pos));
    }
    Annotation { document, diagnostics }
}

/// Tokenizes, normalizes and tags a raw transcription.
pub fn pre_annotate(id: &str, text: &str, normalizer: &Normalizer<'_>) -> Result<Annotation, TranscriptError> {
    let tokens = tokenize(text, &normalizer.config().punctuation)?;
    Ok(annotate_tokens(id, &tokens, normalizer))
}

/// Re-derives every word's POS tag from its normalized form.
pub fn retag(document: &mut CorpusDocument, lexicon: &Lexicon) -> Vec<ConflictDiagnostic> {
    let mut diagnostics = Vec::new();
    let mut word_index = 0;
    for rec in &mut document.records {
        if let AlignedRecord::Word(w) = rec {
            let (pos, diag) = tag_normalized(&w.normalized, &w.gloss, lexicon);
            w.pos = Some(pos);
            if let Some(mut d) = diag {
                d.position = Some(word_index);
                diagnostics.push(d);
            }
            word_index += 1;
        }
    }
    diagnostics
}
