//! The target dictionary: normalized lemmas with gloss, POS tag and the
//! surface forms the normalizer may match against.
//!
//! File format, one entry per line:
//!
//! ```text
//! lemma<TAB>gloss<TAB>pos[<TAB>variant1,variant2,...[<TAB>origin]]
//! ```
//!
//! The variant list defaults to the lemma itself. The optional fifth column
//! marks the entry as the originating class of a grammaticalized lemma; it is
//! consulted when several entries share a lemma but disagree on POS.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::LexiconError;
use crate::symbols::{canonical, ClassSymbol, SymbolClassTable, SymbolSeries};

/// Part-of-speech tag. Closed set of fifteen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PosTag {
    CC,
    CD,
    DT,
    FW,
    JJ,
    NN,
    NP,
    ON,
    PN,
    PP,
    PU,
    RB,
    UH,
    UN,
    VB,
}

impl PosTag {
    pub const ALL: [PosTag; 15] = [
        PosTag::CC,
        PosTag::CD,
        PosTag::DT,
        PosTag::FW,
        PosTag::JJ,
        PosTag::NN,
        PosTag::NP,
        PosTag::ON,
        PosTag::PN,
        PosTag::PP,
        PosTag::PU,
        PosTag::RB,
        PosTag::UH,
        PosTag::UN,
        PosTag::VB,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::CC => "CC",
            PosTag::CD => "CD",
            PosTag::DT => "DT",
            PosTag::FW => "FW",
            PosTag::JJ => "JJ",
            PosTag::NN => "NN",
            PosTag::NP => "NP",
            PosTag::ON => "ON",
            PosTag::PN => "PN",
            PosTag::PP => "PP",
            PosTag::PU => "PU",
            PosTag::RB => "RB",
            PosTag::UH => "UH",
            PosTag::UN => "UN",
            PosTag::VB => "VB",
        }
    }

    /// Human-readable class name.
    pub fn class_name(self) -> &'static str {
        match self {
            PosTag::CC => "Conjunction",
            PosTag::CD => "Cardinal Number",
            PosTag::DT => "Determiner",
            PosTag::FW => "Foreign Word",
            PosTag::JJ => "Adjective",
            PosTag::NN => "Common Noun",
            PosTag::NP => "Proper Noun",
            PosTag::ON => "Onomatopoeia",
            PosTag::PN => "Pronoun",
            PosTag::PP => "Adposition-like Element",
            PosTag::PU => "Punctuation",
            PosTag::RB => "Adverb",
            PosTag::UH => "Interjection",
            PosTag::UN => "Unknown",
            PosTag::VB => "Verb",
        }
    }

    /// Function-word classes, whose entries may list a full paradigm.
    pub fn allows_paradigm(self) -> bool {
        matches!(self, PosTag::PN | PosTag::DT | PosTag::CC | PosTag::PP)
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl FromStr for PosTag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| UnknownTag(s.to_string()))
    }
}

/// One dictionary row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconEntry {
    pub lemma: String,
    pub gloss: String,
    pub pos: PosTag,
    /// Normalized surface forms; always contains `lemma`.
    pub variant_forms: Vec<String>,
    /// Symbol series of each variant, parallel to `variant_forms`.
    pub series_index: Vec<SymbolSeries>,
    /// Marks the originating class of a grammaticalized lemma.
    pub origin: bool,
    /// 1-based line in the source document.
    pub line: usize,
}

/// Handle to an entry inside a [`Lexicon`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntryId(pub usize);

/// A loaded, indexed lexicon. Immutable after load.
#[derive(Clone, Debug)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    exact: BTreeMap<Vec<ClassSymbol>, Vec<EntryId>>,
    buckets: BTreeMap<ClassSymbol, Vec<EntryId>>,
    by_lemma: BTreeMap<String, Vec<EntryId>>,
}

fn parse_origin(value: &str) -> Option<bool> {
    match value.trim() {
        "" | "0" | "false" | "no" => Some(false),
        "1" | "true" | "yes" | "origin" => Some(true),
        _ => None,
    }
}

impl Lexicon {
    /// Loads a lexicon document, indexing every variant through `table`.
    pub fn parse(document: &str, table: &SymbolClassTable) -> Result<Self, LexiconError> {
        let mut entries = Vec::new();
        for (idx, raw) in document.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            if !(3..=5).contains(&fields.len()) {
                return Err(LexiconError::MalformedRow { line });
            }
            let lemma = canonical(fields[0].trim());
            if lemma.is_empty() {
                return Err(LexiconError::EmptyLemma { line });
            }
            let gloss = fields[1].to_string();
            let pos: PosTag = fields[2].trim().parse().map_err(|UnknownTag(tag)| LexiconError::UnknownPos { line, tag })?;

            let mut variant_forms: Vec<String> = Vec::new();
            match fields.get(3).map(|v| v.trim()) {
                None | Some("") => variant_forms.push(lemma.clone()),
                Some(list) => {
                    for v in list.split(',').map(str::trim).filter(|v| !v.is_empty()) {
                        let v = canonical(v);
                        if !variant_forms.contains(&v) {
                            variant_forms.push(v);
                        }
                    }
                }
            }
            if !variant_forms.contains(&lemma) {
                return Err(LexiconError::LemmaNotInVariants { line, lemma });
            }
            if !pos.allows_paradigm() && variant_forms.len() > 1 {
                return Err(LexiconError::ContentWordVariants { line, lemma, pos });
            }
            let origin = match fields.get(4) {
                None => false,
                Some(v) => parse_origin(v).ok_or_else(|| LexiconError::InvalidOrigin {
                    line,
                    value: v.to_string(),
                })?,
            };

            let mut series_index = Vec::with_capacity(variant_forms.len());
            for v in &variant_forms {
                let series = table
                    .symbol_series(v)
                    .map_err(|_| LexiconError::UnreducibleVariant { line, variant: v.clone() })?;
                series_index.push(series);
            }

            entries.push(LexiconEntry {
                lemma,
                gloss,
                pos,
                variant_forms,
                series_index,
                origin,
                line,
            });
        }
        Ok(Self::from_entries(entries))
    }

    fn from_entries(entries: Vec<LexiconEntry>) -> Self {
        let mut exact: BTreeMap<Vec<ClassSymbol>, Vec<EntryId>> = BTreeMap::new();
        let mut buckets: BTreeMap<ClassSymbol, Vec<EntryId>> = BTreeMap::new();
        let mut by_lemma: BTreeMap<String, Vec<EntryId>> = BTreeMap::new();

        for (i, entry) in entries.iter().enumerate() {
            let id = EntryId(i);
            by_lemma.entry(entry.lemma.clone()).or_default().push(id);
            for series in &entry.series_index {
                let ids = exact.entry(series.symbols().to_vec()).or_default();
                if !ids.contains(&id) {
                    ids.push(id);
                }
                if let Some(first) = series.first() {
                    let ids = buckets.entry(first).or_default();
                    if !ids.contains(&id) {
                        ids.push(id);
                    }
                }
            }
        }
        let order = |ids: &mut Vec<EntryId>| {
            ids.sort_by(|a, b| entries[a.0].lemma.cmp(&entries[b.0].lemma).then(a.cmp(b)));
        };
        exact.values_mut().for_each(order);
        buckets.values_mut().for_each(order);

        Lexicon {
            entries,
            exact,
            buckets,
            by_lemma,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn get(&self, id: EntryId) -> &LexiconEntry {
        &self.entries[id.0]
    }

    /// Entries any of whose variants reduce to exactly `series`, ordered by
    /// lemma.
    pub fn exact_lookup(&self, series: &SymbolSeries) -> Vec<&LexiconEntry> {
        self.exact_ids(series.symbols()).iter().map(|id| self.get(*id)).collect()
    }

    pub(crate) fn exact_ids(&self, symbols: &[ClassSymbol]) -> &[EntryId] {
        self.exact.get(symbols).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Entries with at least one variant whose series starts with `class`.
    pub fn candidates_by_first_class(&self, class: ClassSymbol) -> Vec<&LexiconEntry> {
        self.bucket_ids(class).iter().map(|id| self.get(*id)).collect()
    }

    pub(crate) fn bucket_ids(&self, class: ClassSymbol) -> &[EntryId] {
        self.buckets.get(&class).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All entries sharing a lemma, in file order.
    pub fn entries_for_lemma(&self, lemma: &str) -> Vec<&LexiconEntry> {
        self.by_lemma
            .get(&canonical(lemma))
            .map(|ids| ids.iter().map(|id| self.get(*id)).collect())
            .unwrap_or_default()
    }

    /// Canonical serialization. Identical input documents give identical
    /// output.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.lemma);
            out.push('\t');
            out.push_str(&e.gloss);
            out.push('\t');
            out.push_str(e.pos.as_str());
            out.push('\t');
            out.push_str(&e.variant_forms.join(","));
            if e.origin {
                out.push_str("\torigin");
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::symbols_from_str;

    fn table() -> SymbolClassTable {
        SymbolClassTable::starter()
    }

    fn lemmas(entries: &[&LexiconEntry]) -> Vec<String> {
        entries.iter().map(|e| e.lemma.clone()).collect()
    }

    #[test]
    fn tag_set_is_closed() {
        assert_eq!(PosTag::ALL.len(), 15);
        for t in PosTag::ALL {
            assert_eq!(t.as_str().parse::<PosTag>(), Ok(t));
        }
        assert!("XX".parse::<PosTag>().is_err());
        assert!("nn".parse::<PosTag>().is_err());
    }

    #[test]
    fn entry_found_by_first_class_bucket() {
        let t = table();
        let lex = Lexicon::parse("mak'\t1DU.INCL.NOM\tPN\n", &t).unwrap();
        let series = t.symbol_series("mak'").unwrap();
        let bucket = lex.candidates_by_first_class(series.first().unwrap());
        assert_eq!(lemmas(&bucket), ["mak'"]);
        assert_eq!(lex.get(EntryId(0)).variant_forms, ["mak'"]);
    }

    #[test]
    fn unknown_pos_rejected() {
        let err = Lexicon::parse("mak'\tgloss\tXX\n", &table()).unwrap_err();
        assert_eq!(err, LexiconError::UnknownPos { line: 1, tag: "XX".into() });
    }

    #[test]
    fn unreducible_variant_named() {
        let err = Lexicon::parse("ama\tand\tPN\tama,ɣæ\n", &table()).unwrap_err();
        assert_eq!(err, LexiconError::UnreducibleVariant { line: 1, variant: "ɣæ".into() });
    }

    #[test]
    fn content_words_take_base_form_only() {
        let err = Lexicon::parse("wiyi\tsay\tVB\twiyi,wiyin\n", &table()).unwrap_err();
        assert!(matches!(err, LexiconError::ContentWordVariants { pos: PosTag::VB, .. }));
        assert!(Lexicon::parse("traw\tthat\tDT\ttraw,tra:w\n", &table()).is_ok());
    }

    #[test]
    fn lemma_must_be_a_variant() {
        let err = Lexicon::parse("traw\tthat\tDT\ttra:w\n", &table()).unwrap_err();
        assert!(matches!(err, LexiconError::LemmaNotInVariants { .. }));
    }

    #[test]
    fn same_lemma_different_pos_both_kept() {
        let t = table();
        let lex = Lexicon::parse("traw\tthat.SG.LOC\tDT\t\torigin\ntraw\tif\tCC\n", &t).unwrap();
        assert_eq!(lex.len(), 2);
        let hits = lex.exact_lookup(&t.symbol_series("traw").unwrap());
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].pos, PosTag::DT);
        assert!(hits[0].origin);
        assert_eq!(hits[1].pos, PosTag::CC);
        assert_eq!(lex.entries_for_lemma("traw").len(), 2);
    }

    #[test]
    fn self_match_and_miss() {
        let t = table();
        let lex = Lexicon::parse("mak'\t1DU.INCL.NOM\tPN\n", &t).unwrap();
        assert_eq!(lemmas(&lex.exact_lookup(&t.symbol_series("mak'").unwrap())), ["mak'"]);
        assert!(lex.exact_lookup(&t.symbol_series("wiyi").unwrap()).is_empty());
    }

    #[test]
    fn homophones_in_lemma_order() {
        let t = table();
        // k' and g both reduce to class k: same series, different lemmas
        let lex = Lexicon::parse("kin\tthis\tDT\ngin\tother\tNN\n", &t).unwrap();
        let hits = lex.exact_lookup(&t.symbol_series("kin").unwrap());
        assert_eq!(lemmas(&hits), ["gin", "kin"]);
    }

    #[test]
    fn empty_bucket() {
        let lex = Lexicon::parse("mak'\tx\tPN\n", &table()).unwrap();
        assert!(lex.candidates_by_first_class(ClassSymbol('w')).is_empty());
    }

    #[test]
    fn variant_in_each_bucket_once() {
        let t = table();
        let lex = Lexicon::parse("'ama\t3SG.NOM\tPN\t'ama,ma,mam\n", &t).unwrap();
        assert_eq!(lex.candidates_by_first_class(ClassSymbol('?')).len(), 1);
        // two variants start with m; the entry still appears once
        assert_eq!(lex.candidates_by_first_class(ClassSymbol('m')).len(), 1);
        assert_eq!(lex.exact_lookup(&SymbolSeries::from_symbols(symbols_from_str("mam"), "")).len(), 1);
    }

    #[test]
    fn serialization_is_canonical() {
        let t = table();
        let doc = "# comment\ntraw\tthat.SG.LOC\tDT\ttraw, tra:w\torigin\n\nwiyi\tsay, do\tVB\n";
        let a = Lexicon::parse(doc, &t).unwrap().to_text();
        let b = Lexicon::parse(doc, &t).unwrap().to_text();
        assert_eq!(a, b);
        assert_eq!(a, "traw\tthat.SG.LOC\tDT\ttraw,tra:w\torigin\nwiyi\tsay, do\tVB\twiyi\n");
        assert_eq!(Lexicon::parse(&a, &t).unwrap().to_text(), a);
    }
}
