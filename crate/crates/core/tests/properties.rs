use std::collections::BTreeSet;

use fieldnorm_core::corpus::{AlignedRecord, Certainty, CorpusDocument, ParseOptions, WordRecord};
use fieldnorm_core::evaluation::{bleu_tokens, normalized_edit_distance_ratio};
use fieldnorm_core::normalizer::{NormalizationOutcome, TranscriptToken};
use fieldnorm_core::symbols::canonical;
use fieldnorm_core::{
    compute_stats, levenshtein, normalized_edit_distance, parse_document, validate, write_document, Lexicon,
    Normalizer, NormalizerConfig, PosTag, SymbolClassTable,
};
use proptest::prelude::*;

fn seq(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, 0..=max)
}

fn starter_clusters() -> Vec<String> {
    SymbolClassTable::starter().entries().map(|(c, _)| c.to_string()).collect()
}

proptest! {
    #[test]
    fn segmentation_is_lossless(idx in prop::collection::vec(any::<prop::sample::Index>(), 1..8)) {
        let table = SymbolClassTable::starter();
        let clusters = starter_clusters();
        let word: String = idx.iter().map(|i| clusters[i.index(clusters.len())].as_str()).collect();
        if let Ok(segments) = table.segment(&word) {
            let joined: String = segments.iter().map(|s| s.text.as_str()).collect();
            prop_assert_eq!(joined, canonical(&word));
            let series = table.symbol_series(&word).unwrap();
            prop_assert_eq!(series.len(), segments.len());
            prop_assert!(series.len() <= canonical(&word).chars().count());
        }
    }

    #[test]
    fn reducible_iff_every_char_is_a_cluster(word in "[abcxyz]{0,10}") {
        // single-char clusters only, so coverage is decidable per char
        let table = SymbolClassTable::parse("a\ta\nb\tb\nc\ta\n").unwrap();
        let expected = word.chars().position(|c| !"abc".contains(c));
        match (table.symbol_series(&word), expected) {
            (Ok(series), None) => prop_assert_eq!(series.len(), word.chars().count()),
            (Err(e), Some(offset)) => prop_assert_eq!(e.char_offset, offset),
            (got, want) => prop_assert!(false, "{:?} vs first bad char {:?}", got, want),
        }
    }

    #[test]
    fn levenshtein_metric(a in seq(8), b in seq(8), c in seq(6)) {
        let ab = levenshtein(&a, &b);
        prop_assert_eq!(ab, levenshtein(&b, &a));
        prop_assert_eq!(ab == 0, a == b);
        prop_assert!(ab >= a.len().abs_diff(b.len()));
        prop_assert!(ab <= a.len().max(b.len()));
        prop_assert!(levenshtein(&a, &c) <= ab + levenshtein(&b, &c));
    }

    #[test]
    fn ned_bounds(a in seq(8), b in seq(8)) {
        let ned = normalized_edit_distance(&a, &b);
        prop_assert!((0.0..=1.0).contains(&ned));
        prop_assert_eq!(normalized_edit_distance_ratio(&a, &b), normalized_edit_distance_ratio(&b, &a));
        prop_assert_eq!(ned == 0.0, a == b);
        if !a.is_empty() || !b.is_empty() {
            let lev = levenshtein(&a, &b) as f64;
            // the plain edit path is one candidate; no path is longer than m + n
            prop_assert!(ned <= lev / a.len().max(b.len()) as f64 + 1e-12);
            prop_assert!(ned >= lev / (a.len() + b.len()) as f64 - 1e-12);
        }
    }

    #[test]
    fn bleu_in_unit_interval(a in seq(12), b in seq(12)) {
        let scores = bleu_tokens(&[(a.as_slice(), b.as_slice())], 4).unwrap();
        for v in scores.values() {
            prop_assert!((0.0..=1.0 + 1e-12).contains(v));
        }
        if !a.is_empty() {
            let same = bleu_tokens(&[(a.as_slice(), a.as_slice())], 1).unwrap();
            prop_assert!((same[&1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn certainty_text_round_trip(tenths in 1u16..=1000) {
        let c = Certainty::from_tenths(tenths).unwrap();
        prop_assert_eq!(c.to_string().parse::<Certainty>().unwrap(), c);
    }

    #[test]
    fn corpus_round_trip(doc in document()) {
        let text = write_document(&doc).unwrap();
        prop_assert!(validate(&text, ParseOptions::default()).is_empty());
        let back = parse_document(&text, &doc.id, ParseOptions::default()).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(write_document(&back).unwrap(), text);
    }

    #[test]
    fn stats_conservation(docs in prop::collection::vec(document(), 0..5)) {
        let stats = compute_stats(&docs);
        let words: Vec<&WordRecord> = docs.iter().flat_map(|d| d.records.iter().filter_map(AlignedRecord::as_word)).collect();
        prop_assert_eq!(stats.total_words, words.len());
        prop_assert_eq!(stats.histogram_total(), stats.total_words);
        prop_assert_eq!(stats.sentences, words.iter().filter(|w| w.normalized == ".").count());
        let vocab: BTreeSet<&str> = words.iter().map(|w| w.normalized.as_str()).collect();
        prop_assert_eq!(stats.unique_words, vocab.len());
        let chars: usize = docs
            .iter()
            .flat_map(|d| &d.records)
            .map(|r| r.original_field().chars().filter(|&c| c != '&' && c != '#').count())
            .sum();
        prop_assert_eq!(stats.total_chars, chars);
    }

    #[test]
    fn normalizer_properties(
        lemmas in prop::collection::btree_set("[kmst][aiu]{0,2}[kmst]?", 1..8),
        query in "[kmstp][aiu]{0,3}[kmst]{0,2}",
    ) {
        let table = SymbolClassTable::parse("k\tk\nm\tm\ns\ts\nt\tt\np\tp\na\ta\ni\ti\nu\tu\n").unwrap();
        let doc: String = lemmas.iter().map(|l| format!("{l}\tg\tNN\n")).collect();
        let lexicon = Lexicon::parse(&doc, &table).unwrap();
        let n = Normalizer::new(&table, &lexicon, NormalizerConfig::default());
        let token = TranscriptToken::new(query.clone(), 0);
        let out = n.normalize_token(&token);
        prop_assert_eq!(&out, &n.normalize_token(&token));

        if lemmas.contains(&query) {
            let NormalizationOutcome::Matched(m) = &out else { panic!("{query} not matched") };
            prop_assert_eq!(&m.entry.lemma, &query);
            prop_assert_eq!(m.score, 1.0);
        }
        let first = query.chars().next().unwrap();
        match &out {
            NormalizationOutcome::Matched(m) => {
                prop_assert_eq!(m.entry.lemma.chars().next(), Some(first));
                if m.used_fallback {
                    // only reached when the full-series best was at or under threshold
                    let full = n.ranked_variants(table.symbol_series(&query).unwrap().symbols());
                    prop_assert!(full[0].score <= n.config().threshold);
                    prop_assert!(m.distance < full[0].distance);
                }
            }
            NormalizationOutcome::Unknown => {
                prop_assert!(lemmas.iter().all(|l| !l.starts_with(first)));
            }
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }
}

fn field() -> impl Strategy<Value = String> {
    "[a-zé'`:%]{1,6}"
}

fn record() -> impl Strategy<Value = AlignedRecord> {
    prop_oneof![
        1 => field().prop_map(|fragment| AlignedRecord::Continuation { fragment }),
        4 => (field(), any::<bool>(), prop_oneof![field(), Just(".".to_string())], "[a-z '.,]{0,8}", 1u16..=1000, 0..PosTag::ALL.len())
            .prop_map(|(mut original, split, normalized, gloss, tenths, tag)| {
                if split {
                    original.push('#');
                }
                AlignedRecord::Word(WordRecord {
                    original,
                    normalized,
                    gloss,
                    certainty: Certainty::from_tenths(tenths).unwrap(),
                    pos: Some(PosTag::ALL[tag]),
                })
            }),
    ]
}

fn document() -> impl Strategy<Value = CorpusDocument> {
    (prop::collection::vec(record(), 0..12), field()).prop_map(|(mut records, last)| {
        if records.last().is_some_and(AlignedRecord::is_continuation) {
            records.push(AlignedRecord::Word(WordRecord {
                original: last.clone(),
                normalized: last,
                gloss: String::new(),
                certainty: Certainty::FULL,
                pos: Some(PosTag::NN),
            }));
        }
        let mut doc = CorpusDocument::new("p");
        doc.records = records;
        doc
    })
}
