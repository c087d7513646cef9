//! Review sessions: machine pre-annotations, ranked alternatives, and the
//! reviewer's decisions.
//!
//! A session persists as a JSON-lines log. `document` events carry a
//! document's machine state, `decision` events carry one reviewer decision.
//! The session is rebuilt by replaying the log in order.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::Path;
use std::sync::{Mutex, RwLock};

use fieldnorm_core::corpus::{write_document, AlignedRecord, Certainty, CorpusDocument, WordRecord};
use fieldnorm_core::pipeline::{quote_gloss, Annotation};
use fieldnorm_core::{ConflictDiagnostic, Normalizer, PosTag, WriteError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The machine's annotation of one word line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Annotated {
    pub normalized: String,
    pub gloss: String,
    pub certainty: Certainty,
    pub pos: PosTag,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedCandidate {
    pub rank: usize,
    pub lemma: String,
    pub gloss: String,
    pub pos: PosTag,
    /// The lexicon variant the distance was measured against.
    pub variant: String,
    pub distance: usize,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Choice {
    /// Keep the machine annotation.
    Machine,
    /// Take the candidate at `rank`.
    Candidate { rank: usize },
    Override {
        normalized: String,
        gloss: String,
        pos: PosTag,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub choice: Choice,
    /// Defaults to 100.0% on export.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certainty: Option<Certainty>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReviewRecord {
    Continuation {
        index: usize,
        fragment: String,
    },
    Word {
        index: usize,
        /// The original field as written, `#` included.
        original: String,
        /// With `&` fragments joined and markers removed.
        logical_original: String,
        machine: Annotated,
        candidates: Vec<RankedCandidate>,
        #[serde(default)]
        decision: Option<Decision>,
    },
}

impl ReviewRecord {
    pub fn decision(&self) -> Option<&Decision> {
        match self {
            ReviewRecord::Word { decision, .. } => decision.as_ref(),
            ReviewRecord::Continuation { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pending,
    Approved,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReviewDocument {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub records: Vec<ReviewRecord>,
    #[serde(default)]
    pub diagnostics: Vec<ConflictDiagnostic>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocumentSummary {
    pub id: String,
    pub status: Status,
    pub words: usize,
    pub decided: usize,
}

#[derive(Debug, Error)]
pub enum ReviewError {
    #[error("no document `{0}`")]
    UnknownDocument(String),
    #[error("document `{document}` has no record {record}")]
    UnknownRecord { document: String, record: usize },
    #[error("record {0} is a continuation line and takes no decision")]
    Continuation(usize),
    #[error("{0}")]
    InvalidDecision(String),
    #[error("document `{document}` has {} undecided records", undecided.len())]
    Incomplete { document: String, undecided: Vec<usize> },
    #[error("document `{0}` already in session")]
    DuplicateDocument(String),
    #[error("session log: {0}")]
    Io(#[from] io::Error),
    #[error("session log line {line}")]
    Log {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("export: {0}")]
    Write(#[from] WriteError),
}

impl ReviewDocument {
    /// Attaches the top `k` candidates to each word of a machine annotation.
    pub fn from_annotation(annotation: Annotation, normalizer: &Normalizer<'_>, k: usize) -> Self {
        let Annotation { document, diagnostics } = annotation;
        let mut logical: BTreeMap<usize, String> = document
            .logical_words()
            .into_iter()
            .map(|w| (w.record_index, w.original))
            .collect();
        let records = document
            .records
            .iter()
            .enumerate()
            .map(|(index, rec)| match rec {
                AlignedRecord::Continuation { fragment } => ReviewRecord::Continuation {
                    index,
                    fragment: fragment.clone(),
                },
                AlignedRecord::Word(w) => {
                    let logical_original = logical.remove(&index).unwrap_or_default();
                    let candidates = if normalizer.is_punctuation(&logical_original) {
                        Vec::new()
                    } else {
                        match normalizer.table().symbol_series(&logical_original) {
                            Ok(series) => normalizer
                                .top_candidates(&series, k)
                                .into_iter()
                                .enumerate()
                                .map(|(rank, c)| RankedCandidate {
                                    rank,
                                    lemma: c.entry.lemma.clone(),
                                    gloss: quote_gloss(&c.entry.gloss),
                                    pos: c.entry.pos,
                                    variant: c.variant_form().to_string(),
                                    distance: c.distance,
                                    score: c.score,
                                })
                                .collect(),
                            Err(_) => Vec::new(),
                        }
                    };
                    ReviewRecord::Word {
                        index,
                        original: w.original.clone(),
                        logical_original,
                        machine: Annotated {
                            normalized: w.normalized.clone(),
                            gloss: w.gloss.clone(),
                            certainty: w.certainty,
                            pos: w.pos.unwrap_or(PosTag::UN),
                        },
                        candidates,
                        decision: None,
                    }
                }
            })
            .collect();
        ReviewDocument {
            id: document.id,
            source: document.source,
            records,
            diagnostics,
        }
    }

    pub fn undecided(&self) -> Vec<usize> {
        self.records
            .iter()
            .filter_map(|r| match r {
                ReviewRecord::Word { index, decision: None, .. } => Some(*index),
                _ => None,
            })
            .collect()
    }

    pub fn status(&self) -> Status {
        if self.undecided().is_empty() {
            Status::Approved
        } else {
            Status::Pending
        }
    }

    pub fn summary(&self) -> DocumentSummary {
        let words = self.records.iter().filter(|r| matches!(r, ReviewRecord::Word { .. })).count();
        let decided = self.records.iter().filter(|r| r.decision().is_some()).count();
        DocumentSummary {
            id: self.id.clone(),
            status: self.status(),
            words,
            decided,
        }
    }

    fn check(&self, record: usize, decision: &Decision) -> Result<(), ReviewError> {
        let Some(rec) = self.records.get(record) else {
            return Err(ReviewError::UnknownRecord {
                document: self.id.clone(),
                record,
            });
        };
        let ReviewRecord::Word { candidates, .. } = rec else {
            return Err(ReviewError::Continuation(record));
        };
        match &decision.choice {
            Choice::Machine => {}
            Choice::Candidate { rank } => {
                if *rank >= candidates.len() {
                    return Err(ReviewError::InvalidDecision(format!(
                        "record {record} has {} candidates, no rank {rank}",
                        candidates.len()
                    )));
                }
            }
            Choice::Override { normalized, gloss, .. } => {
                if normalized.is_empty() {
                    return Err(ReviewError::InvalidDecision("override with empty normalized form".into()));
                }
                if [normalized, gloss].iter().any(|f| f.contains(['\t', '\n', '\r'])) {
                    return Err(ReviewError::InvalidDecision("override field contains a tab or line break".into()));
                }
            }
        }
        if decision.note.as_ref().is_some_and(|n| n.contains('\n')) {
            return Err(ReviewError::InvalidDecision("note contains a line break".into()));
        }
        Ok(())
    }

    /// The gold document implied by the decisions. Undecided words keep the
    /// machine annotation.
    pub fn to_corpus(&self) -> CorpusDocument {
        let mut doc = CorpusDocument::new(self.id.clone());
        doc.source = self.source.clone();
        for rec in &self.records {
            let out = match rec {
                ReviewRecord::Continuation { fragment, .. } => AlignedRecord::Continuation {
                    fragment: fragment.clone(),
                },
                ReviewRecord::Word {
                    original,
                    machine,
                    candidates,
                    decision,
                    ..
                } => {
                    let (normalized, gloss, pos, certainty) = match decision {
                        None => (machine.normalized.clone(), machine.gloss.clone(), machine.pos, machine.certainty),
                        Some(d) => {
                            let certainty = d.certainty.unwrap_or(Certainty::FULL);
                            match &d.choice {
                                Choice::Machine => (machine.normalized.clone(), machine.gloss.clone(), machine.pos, certainty),
                                Choice::Candidate { rank } => {
                                    let c = &candidates[*rank];
                                    (c.lemma.clone(), c.gloss.clone(), c.pos, certainty)
                                }
                                Choice::Override { normalized, gloss, pos } => {
                                    (normalized.clone(), gloss.clone(), *pos, certainty)
                                }
                            }
                        }
                    };
                    AlignedRecord::Word(WordRecord {
                        original: original.clone(),
                        normalized,
                        gloss,
                        certainty,
                        pos: Some(pos),
                    })
                }
            };
            doc.records.push(out);
        }
        doc
    }

    /// Corpus file content. Refused while words are undecided, unless forced.
    pub fn export(&self, force: bool) -> Result<String, ReviewError> {
        let undecided = self.undecided();
        if !force && !undecided.is_empty() {
            return Err(ReviewError::Incomplete {
                document: self.id.clone(),
                undecided,
            });
        }
        Ok(write_document(&self.to_corpus())?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
enum Event {
    Document {
        document: ReviewDocument,
    },
    Decision {
        document: String,
        record: usize,
        decision: Decision,
    },
}

/// Review documents shared by the HTTP handlers. Each document has its own
/// lock, so writes to one document are serialized while other documents and
/// all reads proceed.
#[derive(Debug, Default)]
pub struct Session {
    documents: BTreeMap<String, RwLock<ReviewDocument>>,
    log: Option<Mutex<File>>,
}

fn append(log: &Mutex<File>, event: &Event) -> Result<(), ReviewError> {
    let mut line = serde_json::to_vec(event).map_err(io::Error::other)?;
    line.push(b'\n');
    let mut file = log.lock().unwrap_or_else(|e| e.into_inner());
    file.write_all(&line)?;
    file.sync_data()?;
    Ok(())
}

impl Session {
    /// A session that keeps nothing on disk.
    pub fn in_memory() -> Self {
        Session::default()
    }

    /// Opens or creates the log at `path` and replays it. A torn final line
    /// (no trailing newline) is dropped.
    pub fn open(path: &Path) -> Result<Self, ReviewError> {
        let mut session = Session::default();
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(e.into()),
        };
        let complete = match text.rfind('\n') {
            Some(i) => &text[..=i],
            None => "",
        };
        for (i, line) in complete.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let event: Event = serde_json::from_str(line).map_err(|source| ReviewError::Log { line: i + 1, source })?;
            session.apply(event)?;
        }
        let file = OpenOptions::new().create(true).truncate(false).read(true).write(true).open(path)?;
        file.set_len(complete.len() as u64)?;
        let mut file = file;
        io::Seek::seek(&mut file, io::SeekFrom::End(0))?;
        session.log = Some(Mutex::new(file));
        Ok(session)
    }

    fn apply(&mut self, event: Event) -> Result<(), ReviewError> {
        match event {
            Event::Document { document } => {
                if self.documents.contains_key(&document.id) {
                    return Err(ReviewError::DuplicateDocument(document.id));
                }
                self.documents.insert(document.id.clone(), RwLock::new(document));
            }
            Event::Decision {
                document,
                record,
                decision,
            } => {
                let doc = self
                    .documents
                    .get_mut(&document)
                    .ok_or(ReviewError::UnknownDocument(document))?
                    .get_mut()
                    .unwrap_or_else(|e| e.into_inner());
                doc.check(record, &decision)?;
                if let ReviewRecord::Word { decision: slot, .. } = &mut doc.records[record] {
                    *slot = Some(decision);
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, id: &str) -> bool {
        self.documents.contains_key(id)
    }

    /// Adds a document with no decisions, logging it.
    pub fn add_document(&mut self, mut document: ReviewDocument) -> Result<(), ReviewError> {
        if self.contains(&document.id) {
            return Err(ReviewError::DuplicateDocument(document.id));
        }
        for rec in &mut document.records {
            if let ReviewRecord::Word { decision, .. } = rec {
                *decision = None;
            }
        }
        let event = Event::Document { document };
        if let Some(log) = &self.log {
            append(log, &event)?;
        }
        self.apply(event)
    }

    pub fn summaries(&self) -> Vec<DocumentSummary> {
        self.documents
            .values()
            .map(|d| d.read().unwrap_or_else(|e| e.into_inner()).summary())
            .collect()
    }

    fn lock(&self, id: &str) -> Result<&RwLock<ReviewDocument>, ReviewError> {
        self.documents.get(id).ok_or_else(|| ReviewError::UnknownDocument(id.to_string()))
    }

    pub fn document(&self, id: &str) -> Result<ReviewDocument, ReviewError> {
        Ok(self.lock(id)?.read().unwrap_or_else(|e| e.into_inner()).clone())
    }

    /// Records a decision and returns the updated record. Repeating the
    /// current decision changes nothing and writes nothing.
    pub fn decide(&self, id: &str, record: usize, decision: Decision) -> Result<ReviewRecord, ReviewError> {
        let mut doc = self.lock(id)?.write().unwrap_or_else(|e| e.into_inner());
        doc.check(record, &decision)?;
        if doc.records[record].decision() != Some(&decision) {
            let event = Event::Decision {
                document: id.to_string(),
                record,
                decision: decision.clone(),
            };
            if let Some(log) = &self.log {
                append(log, &event)?;
            }
            if let ReviewRecord::Word { decision: slot, .. } = &mut doc.records[record] {
                *slot = Some(decision);
            }
        }
        Ok(doc.records[record].clone())
    }

    pub fn export(&self, id: &str, force: bool) -> Result<String, ReviewError> {
        self.lock(id)?.read().unwrap_or_else(|e| e.into_inner()).export(force)
    }
}
