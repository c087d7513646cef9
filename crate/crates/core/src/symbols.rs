//! Symbol classes: collapsing transcription variants of one phoneme onto a
//! single abstract symbol.
//!
//! A [`SymbolClassTable`] is loaded from a tab-separated file of
//! `cluster<TAB>class` rows. A transcribed word is reduced to its
//! [`SymbolSeries`] by greedy longest-match segmentation over the canonically
//! composed (NFC) form of the word.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;
use unicode_segmentation::UnicodeSegmentation;

use crate::error::TableError;

/// Starter table covering every cluster listed in the classic symbol-class
/// examples plus the characters of the bundled corpus excerpt.
pub const STARTER_TABLE: &str = include_str!("../data/starter_symbols.tsv");

/// Version reported when a table file carries no `# version:` comment.
pub const UNVERSIONED: &str = "unversioned";

/// One abstract class symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassSymbol(pub char);

impl fmt::Display for ClassSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Canonical composition applied to clusters and words before matching.
pub fn canonical(text: &str) -> String {
    text.nfc().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TableLine {
    Entry(usize),
    Other(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct TableEntry {
    raw: String,
    cluster: String,
    class: ClassSymbol,
}

/// Mapping from grapheme clusters to class symbols.
///
/// Immutable once loaded. The original file text is retained line by line so
/// that [`SymbolClassTable::to_text`] reproduces the loaded document exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolClassTable {
    entries: Vec<TableEntry>,
    lines: Vec<TableLine>,
    trailing_newline: bool,
    version: String,
    // first char of cluster -> entry indices, longest cluster first
    by_first: BTreeMap<char, Vec<usize>>,
}

impl SymbolClassTable {
    /// Parses a table document.
    pub fn parse(document: &str) -> Result<Self, TableError> {
        let mut entries: Vec<TableEntry> = Vec::new();
        let mut lines = Vec::new();
        let mut version = None;
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();

        let trailing_newline = document.ends_with('\n');
        let body = document.strip_suffix('\n').unwrap_or(document);

        if !document.is_empty() {
            for (idx, raw_line) in body.split('\n').enumerate() {
                let line_no = idx + 1;
                let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);

                if line.trim().is_empty() || line.starts_with('#') {
                    if version.is_none() {
                        if let Some(v) = line.strip_prefix('#').map(str::trim).and_then(|c| c.strip_prefix("version:")) {
                            version = Some(v.trim().to_string());
                        }
                    }
                    lines.push(TableLine::Other(raw_line.to_string()));
                    continue;
                }

                let mut fields = line.split('\t');
                let (cluster, class) = match (fields.next(), fields.next(), fields.next()) {
                    (Some(c), Some(s), None) => (c, s),
                    _ => {
                        return Err(TableError::MalformedRow {
                            line: line_no,
                            reason: "expected `cluster<TAB>class`".to_string(),
                        })
                    }
                };
                if cluster.is_empty() || cluster.chars().any(char::is_whitespace) {
                    return Err(TableError::MalformedRow {
                        line: line_no,
                        reason: "cluster must be non-empty and contain no whitespace".to_string(),
                    });
                }
                let class = parse_class(class).ok_or_else(|| TableError::InvalidClass {
                    line: line_no,
                    symbol: class.to_string(),
                })?;
                let cluster = canonical(cluster);
                if let Some(&first) = seen.get(&cluster) {
                    return Err(TableError::DuplicateCluster {
                        cluster,
                        first_line: first,
                        line: line_no,
                    });
                }
                seen.insert(cluster.clone(), line_no);
                lines.push(TableLine::Entry(entries.len()));
                entries.push(TableEntry {
                    raw: raw_line.to_string(),
                    cluster,
                    class,
                });
            }
        }

        if entries.is_empty() {
            return Err(TableError::Empty);
        }

        let mut by_first: BTreeMap<char, Vec<usize>> = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            let first = e.cluster.chars().next().expect("non-empty cluster");
            by_first.entry(first).or_default().push(i);
        }
        for bucket in by_first.values_mut() {
            bucket.sort_by(|&a, &b| {
                let (ea, eb) = (&entries[a], &entries[b]);
                eb.cluster
                    .len()
                    .cmp(&ea.cluster.len())
                    .then_with(|| ea.cluster.cmp(&eb.cluster))
            });
        }

        Ok(SymbolClassTable {
            entries,
            lines,
            trailing_newline,
            version: version.unwrap_or_else(|| UNVERSIONED.to_string()),
            by_first,
        })
    }

    /// The bundled starter table.
    pub fn starter() -> Self {
        Self::parse(STARTER_TABLE).expect("bundled starter table is valid")
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(cluster, class)` pairs in file order. Clusters are NFC-composed.
    pub fn entries(&self) -> impl Iterator<Item = (&str, ClassSymbol)> + '_ {
        self.entries.iter().map(|e| (e.cluster.as_str(), e.class))
    }

    /// The declared class alphabet: every class symbol used by some row.
    pub fn alphabet(&self) -> BTreeSet<ClassSymbol> {
        self.entries.iter().map(|e| e.class).collect()
    }

    pub fn class_of(&self, cluster: &str) -> Option<ClassSymbol> {
        let cluster = canonical(cluster);
        self.entries.iter().find(|e| e.cluster == cluster).map(|e| e.class)
    }

    /// Reproduces the loaded document byte for byte.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, line) in self.lines.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            match line {
                TableLine::Entry(idx) => out.push_str(&self.entries[*idx].raw),
                TableLine::Other(text) => out.push_str(text),
            }
        }
        if self.trailing_newline {
            out.push('\n');
        }
        out
    }

    /// Splits `word` into table clusters, greedy longest match from the left.
    ///
    /// A cluster only matches if it ends on a grapheme boundary, so a base
    /// letter never matches on its own when a combining mark follows it.
    pub fn segment(&self, word: &str) -> Result<Vec<Segment>, NotReducible> {
        let word = canonical(word);
        let mut boundaries: BTreeSet<usize> = word.grapheme_indices(true).map(|(i, _)| i).collect();
        boundaries.insert(word.len());

        let mut segments = Vec::new();
        let mut pos = 0;
        while pos < word.len() {
            let rest = &word[pos..];
            let first = rest.chars().next().expect("pos inside word");
            let hit = self.by_first.get(&first).and_then(|bucket| {
                bucket.iter().map(|&i| &self.entries[i]).find(|e| {
                    rest.starts_with(e.cluster.as_str()) && boundaries.contains(&(pos + e.cluster.len()))
                })
            });
            match hit {
                Some(entry) => {
                    segments.push(Segment {
                        text: entry.cluster.clone(),
                        class: entry.class,
                    });
                    pos += entry.cluster.len();
                }
                None => {
                    return Err(NotReducible {
                        char_offset: word[..pos].chars().count(),
                        word,
                    })
                }
            }
        }
        Ok(segments)
    }

    /// Reduces a transcribed word to its symbol series.
    pub fn symbol_series(&self, word: &str) -> Result<SymbolSeries, NotReducible> {
        let segments = self.segment(word)?;
        Ok(SymbolSeries {
            symbols: segments.iter().map(|s| s.class).collect(),
            source_word: canonical(word),
        })
    }
}

fn parse_class(field: &str) -> Option<ClassSymbol> {
    let mut chars = field.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if !c.is_whitespace() && !c.is_control() && c != '#' => Some(ClassSymbol(c)),
        _ => None,
    }
}

/// One matched cluster of a segmented word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub text: String,
    pub class: ClassSymbol,
}

/// The word could not be fully covered by table clusters.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("`{word}` has no matching cluster at char {char_offset}")]
pub struct NotReducible {
    /// The NFC-composed word.
    pub word: String,
    /// Char offset of the first position no cluster matches.
    pub char_offset: usize,
}

/// A word reduced to class symbols.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolSeries {
    symbols: Vec<ClassSymbol>,
    source_word: String,
}

impl SymbolSeries {
    /// Builds a series directly from class symbols, e.g. for suffix patterns.
    pub fn from_symbols(symbols: Vec<ClassSymbol>, source_word: impl Into<String>) -> Self {
        SymbolSeries {
            symbols,
            source_word: source_word.into(),
        }
    }

    pub fn symbols(&self) -> &[ClassSymbol] {
        &self.symbols
    }

    pub fn source_word(&self) -> &str {
        &self.source_word
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn first(&self) -> Option<ClassSymbol> {
        self.symbols.first().copied()
    }
}

impl fmt::Display for SymbolSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s)?;
        }
        Ok(())
    }
}

/// Parses a string of class symbols (one char each) into a symbol vector.
pub fn symbols_from_str(s: &str) -> Vec<ClassSymbol> {
    s.chars().map(ClassSymbol).collect()
}
