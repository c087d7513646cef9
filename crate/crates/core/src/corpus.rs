//! The aligned corpus format.
//!
//! One file per text, one line per word, five tab-separated fields:
//! original character sequence, normalized form, gloss, certainty and POS
//! tag. Two conventions repair the spacing of the original transcription:
//!
//! * an original ending in `&` is a fragment to be joined with the next
//!   line's original; the rest of such a line is blank;
//! * a `#` in an original marks a missing word boundary; the remainder of
//!   the character sequence continues on the next line with its own fields.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CertaintyError, CorpusError, WriteError};
use crate::lexicon::PosTag;

/// Marks a fragment that joins the next line.
pub const JOIN_MARK: char = '&';
/// Marks a missing word boundary.
pub const SPLIT_MARK: char = '#';

/// Subjective certainty of a gloss, held in tenths of a percent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Certainty(u16);

impl Certainty {
    pub const FULL: Certainty = Certainty(1000);

    pub fn from_tenths(tenths: u16) -> Result<Self, CertaintyError> {
        if tenths == 0 || tenths > 1000 {
            Err(CertaintyError::OutOfRange)
        } else {
            Ok(Certainty(tenths))
        }
    }

    /// Accepts percentages with at most one decimal place.
    pub fn from_percent(percent: f64) -> Result<Self, CertaintyError> {
        if !percent.is_finite() || percent <= 0.0 || percent > 100.0 {
            return Err(CertaintyError::OutOfRange);
        }
        let tenths = libm::round(percent * 10.0);
        if libm::fabs(tenths - percent * 10.0) > 1e-6 {
            return Err(CertaintyError::Precision);
        }
        Self::from_tenths(tenths as u16)
    }

    /// Rounds a `[0, 1]` match score to a certainty, never below 0.1%.
    pub fn from_score(score: f64) -> Self {
        let tenths = libm::round(score.clamp(0.0, 1.0) * 1000.0) as u16;
        Certainty(tenths.max(1))
    }

    pub fn tenths(self) -> u16 {
        self.0
    }

    pub fn percent(self) -> f64 {
        f64::from(self.0) / 10.0
    }
}

impl TryFrom<f64> for Certainty {
    type Error = CertaintyError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Certainty::from_percent(value)
    }
}

impl From<Certainty> for f64 {
    fn from(c: Certainty) -> f64 {
        c.percent()
    }
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}%", self.0 / 10, self.0 % 10)
    }
}

impl FromStr for Certainty {
    type Err = CertaintyError;

    /// Parses exactly `D.D%`, e.g. `100.0%` or `50.0%`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.strip_suffix('%').ok_or(CertaintyError::Precision)?;
        let (int, frac) = body.split_once('.').ok_or(CertaintyError::Precision)?;
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(int) || int.len() > 3 || frac.len() != 1 || !digits(frac) || (int.len() > 1 && int.starts_with('0')) {
            return Err(CertaintyError::Precision);
        }
        let whole: u16 = int.parse().map_err(|_| CertaintyError::Precision)?;
        let tenth: u16 = frac.parse().map_err(|_| CertaintyError::Precision)?;
        Certainty::from_tenths(whole * 10 + tenth)
    }
}

/// A line that carries an annotated word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordRecord {
    /// Original characters on this line, including a `#` split mark if any.
    pub original: String,
    pub normalized: String,
    pub gloss: String,
    pub certainty: Certainty,
    /// `None` only for lines read from four-field legacy files.
    pub pos: Option<PosTag>,
}

impl WordRecord {
    /// The original with any `#` mark removed.
    pub fn original_text(&self) -> String {
        self.original.chars().filter(|&c| c != SPLIT_MARK).collect()
    }

    pub fn has_split(&self) -> bool {
        self.original.contains(SPLIT_MARK)
    }
}

/// One corpus line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlignedRecord {
    /// A fragment ending in `&`; stored without the mark.
    Continuation { fragment: String },
    Word(WordRecord),
}

impl AlignedRecord {
    pub fn is_continuation(&self) -> bool {
        matches!(self, AlignedRecord::Continuation { .. })
    }

    pub fn as_word(&self) -> Option<&WordRecord> {
        match self {
            AlignedRecord::Word(w) => Some(w),
            AlignedRecord::Continuation { .. } => None,
        }
    }

    /// The original field as written in the file.
    pub fn original_field(&self) -> String {
        match self {
            AlignedRecord::Continuation { fragment } => {
                let mut s = fragment.clone();
                s.push(JOIN_MARK);
                s
            }
            AlignedRecord::Word(w) => w.original.clone(),
        }
    }
}

/// One text of the corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusDocument {
    pub id: String,
    pub records: Vec<AlignedRecord>,
    /// Free-text provenance. Not stored in the file body.
    #[serde(default)]
    pub source: Option<String>,
}

/// A word after joining `&` fragments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalWord<'d> {
    /// Joined original characters, markers removed.
    pub original: String,
    /// Index of the annotated record within the document.
    pub record_index: usize,
    pub record: &'d WordRecord,
    /// Number of continuation lines folded into this word.
    pub fragments: usize,
}

impl CorpusDocument {
    pub fn new(id: impl Into<String>) -> Self {
        CorpusDocument {
            id: id.into(),
            records: Vec::new(),
            source: None,
        }
    }

    /// Words with `&` fragments joined onto the record that annotates them.
    pub fn logical_words(&self) -> Vec<LogicalWord<'_>> {
        let mut out = Vec::new();
        let mut pending = String::new();
        let mut fragments = 0;
        for (i, rec) in self.records.iter().enumerate() {
            match rec {
                AlignedRecord::Continuation { fragment } => {
                    pending.push_str(fragment);
                    fragments += 1;
                }
                AlignedRecord::Word(w) => {
                    pending.push_str(&w.original_text());
                    out.push(LogicalWord {
                        original: core::mem::take(&mut pending),
                        record_index: i,
                        record: w,
                        fragments,
                    });
                    fragments = 0;
                }
            }
        }
        out
    }

    /// Normalized forms of the logical words, the token stream metrics use.
    pub fn normalized_tokens(&self) -> Vec<&str> {
        self.records
            .iter()
            .filter_map(AlignedRecord::as_word)
            .map(|w| w.normalized.as_str())
            .collect()
    }

    pub fn word_count(&self) -> usize {
        self.records.iter().filter(|r| !r.is_continuation()).count()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Also accept four-field lines without a POS column.
    pub legacy: bool,
}

/// Reads a document; stops at the first problem.
pub fn parse_document(text: &str, id: &str, options: ParseOptions) -> Result<CorpusDocument, CorpusError> {
    let (records, mut errors) = scan(text, options);
    if !errors.is_empty() {
        return Err(errors.swap_remove(0));
    }
    Ok(CorpusDocument {
        id: id.to_string(),
        records,
        source: None,
    })
}

/// Every format violation in a document, in line order.
pub fn validate(text: &str, options: ParseOptions) -> Vec<CorpusError> {
    scan(text, options).1
}

fn scan(text: &str, options: ParseOptions) -> (Vec<AlignedRecord>, Vec<CorpusError>) {
    let mut records = Vec::new();
    let mut errors = Vec::new();
    if text.is_empty() {
        return (records, errors);
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut last_line = 0;
    let mut open_continuation: Option<usize> = None;

    for (idx, line) in body.split('\n').enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        match parse_line(line, line_no, options) {
            Ok(rec) => {
                open_continuation = rec.is_continuation().then_some(line_no);
                records.push(rec);
            }
            Err(e) => {
                open_continuation = None;
                errors.push(e);
            }
        }
    }
    if let Some(line) = open_continuation {
        debug_assert!(line <= last_line);
        errors.push(CorpusError::DanglingContinuation { line });
    }
    (records, errors)
}

fn parse_line(line: &str, line_no: usize, options: ParseOptions) -> Result<AlignedRecord, CorpusError> {
    let fields: Vec<&str> = line.split('\t').collect();
    let legacy_ok = options.legacy && fields.len() == 4;
    if fields.len() != 5 && !legacy_ok {
        return Err(CorpusError::FieldCount {
            line: line_no,
            expected: if options.legacy { "4 or 5" } else { "5" },
            found: fields.len(),
        });
    }
    let original = fields[0];
    if original.is_empty() {
        return Err(CorpusError::EmptyOriginal { line: line_no });
    }

    if let Some(fragment) = original.strip_suffix(JOIN_MARK) {
        if fields[1..].iter().any(|f| !f.is_empty()) {
            return Err(CorpusError::ContinuationNotBlank { line: line_no });
        }
        if fragment.contains(SPLIT_MARK) {
            return Err(CorpusError::SplitInContinuation { line: line_no });
        }
        if fragment.is_empty() || fragment.contains(JOIN_MARK) {
            return Err(CorpusError::MisplacedJoin { line: line_no });
        }
        return Ok(AlignedRecord::Continuation {
            fragment: fragment.to_string(),
        });
    }

    if original.contains(JOIN_MARK) {
        return Err(CorpusError::MisplacedJoin { line: line_no });
    }
    if original.matches(SPLIT_MARK).count() > 1 {
        return Err(CorpusError::MultipleSplits { line: line_no });
    }
    let certainty: Certainty = fields[3].parse().map_err(|_| CorpusError::Certainty {
        line: line_no,
        value: fields[3].to_string(),
    })?;
    let pos = match fields.get(4) {
        Some(tag) => Some(tag.parse::<PosTag>().map_err(|_| CorpusError::UnknownPos {
            line: line_no,
            tag: tag.to_string(),
        })?),
        None => None,
    };
    Ok(AlignedRecord::Word(WordRecord {
        original: original.to_string(),
        normalized: fields[1].to_string(),
        gloss: fields[2].to_string(),
        certainty,
        pos,
    }))
}

fn clean_field(s: &str) -> bool {
    !s.contains(['\t', '\n', '\r'])
}

/// Serializes a document, refusing any record that would not read back
/// identically.
pub fn write_document(doc: &CorpusDocument) -> Result<String, WriteError> {
    let mut out = String::new();
    for (i, rec) in doc.records.iter().enumerate() {
        match rec {
            AlignedRecord::Continuation { fragment } => {
                if fragment.is_empty() {
                    return Err(WriteError::Invalid {
                        record: i,
                        reason: "empty continuation fragment",
                    });
                }
                if fragment.contains([JOIN_MARK, SPLIT_MARK]) || !clean_field(fragment) {
                    return Err(WriteError::Invalid {
                        record: i,
                        reason: "continuation fragment contains a marker or separator",
                    });
                }
                out.push_str(fragment);
                out.push(JOIN_MARK);
                out.push_str("\t\t\t\t\n");
            }
            AlignedRecord::Word(w) => {
                if w.original.is_empty() {
                    return Err(WriteError::Invalid {
                        record: i,
                        reason: "empty original",
                    });
                }
                if w.original.contains(JOIN_MARK) {
                    return Err(WriteError::Invalid {
                        record: i,
                        reason: "`&` in a word's original",
                    });
                }
                if w.original.matches(SPLIT_MARK).count() > 1 {
                    return Err(WriteError::Invalid {
                        record: i,
                        reason: "more than one `#` in original",
                    });
                }
                if ![&w.original, &w.normalized, &w.gloss].iter().all(|f| clean_field(f)) {
                    return Err(WriteError::Invalid {
                        record: i,
                        reason: "field contains a tab or line break",
                    });
                }
                let pos = w.pos.ok_or(WriteError::MissingPos { record: i })?;
                out.push_str(&w.original);
                out.push('\t');
                out.push_str(&w.normalized);
                out.push('\t');
                out.push_str(&w.gloss);
                out.push('\t');
                out.push_str(&w.certainty.to_string());
                out.push('\t');
                out.push_str(pos.as_str());
                out.push('\n');
            }
        }
    }
    if doc.records.last().is_some_and(AlignedRecord::is_continuation) {
        return Err(WriteError::DanglingContinuation);
    }
    Ok(out)
}
