//! Scoring pre-annotations against a gold standard.
//!
//! WER is approximated by the normalized edit distance of Marzal and Vidal:
//! the minimum, over all edit paths, of path weight divided by path length,
//! where matches cost nothing but still count towards the length. BLEU is
//! the usual corpus-level clipped n-gram precision with a brevity penalty and
//! no smoothing.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::CorpusDocument;
use crate::error::MetricError;

/// An exact `weight / length` ratio.
#[derive(Clone, Copy, Debug, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub weight: usize,
    pub length: usize,
}

impl Ratio {
    pub fn value(self) -> f64 {
        if self.length == 0 {
            0.0
        } else {
            self.weight as f64 / self.length as f64
        }
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        // a/b vs c/d with zero-length treated as 0/1
        let (a, b) = (self.weight, self.length.max(1));
        let (c, d) = (other.weight, other.length.max(1));
        (a as u128 * d as u128).cmp(&(c as u128 * b as u128))
    }
}

/// Minimum path weight over path length, as an exact ratio.
///
/// Runs over the number `k` of diagonal steps: a path with `k` diagonal
/// steps has length `m + n - k` and weight `m + n - 2k + s`, where `s` is
/// the number of mismatched diagonal steps. One table layer per `k` holds
/// the fewest mismatches reaching each cell. O(m·n·min(m, n)) time,
/// O(m·n) space.
pub fn normalized_edit_distance_ratio<T: PartialEq>(a: &[T], b: &[T]) -> Ratio {
    let (m, n) = (a.len(), b.len());
    if m == 0 && n == 0 {
        return Ratio { weight: 0, length: 0 };
    }
    // cells only ever hold a mismatch count <= min(m, n)
    const INF: u32 = u32::MAX / 2;
    let width = n + 1;
    // k = 0: pure insert/delete paths, no mismatches
    let mut prev = vec![0u32; (m + 1) * width];
    let mut best = Ratio {
        weight: m + n,
        length: m + n,
    };
    // layer k only reads cells with i, j >= k, so stale entries elsewhere
    // are never seen
    let mut cur = vec![INF; (m + 1) * width];
    for k in 1..=m.min(n) {
        for i in k..=m {
            let ai = &a[i - 1];
            let diag_row = &prev[(i - 1) * width..i * width];
            let (above, rest) = cur.split_at_mut(i * width);
            let up_row = &above[(i - 1) * width..];
            let row = &mut rest[..width];
            let mut left = INF;
            for j in k..=n {
                let diag = diag_row[j - 1] + u32::from(*ai != b[j - 1]);
                let up = if i > k { up_row[j] } else { INF };
                let v = diag.min(up).min(left);
                row[j] = v;
                left = v;
            }
        }
        let subs = cur[m * width + n];
        if subs < INF {
            let candidate = Ratio {
                weight: m + n - 2 * k + subs as usize,
                length: m + n - k,
            };
            if candidate < best {
                best = candidate;
            }
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    best
}

/// Normalized edit distance in `[0, 1]`; 0 for two empty sequences.
pub fn normalized_edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    normalized_edit_distance_ratio(a, b).value()
}

/// Mean per-document NED between hypothesis and gold normalized tokens.
pub fn mean_wer(pairs: &[(&CorpusDocument, &CorpusDocument)]) -> Result<f64, MetricError> {
    if pairs.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    let total: f64 = pairs
        .iter()
        .map(|(hyp, gold)| normalized_edit_distance(&hyp.normalized_tokens(), &gold.normalized_tokens()))
        .sum();
    Ok(total / pairs.len() as f64)
}

fn ngram_counts<T: Ord>(tokens: &[T], n: usize) -> BTreeMap<&[T], usize> {
    let mut counts = BTreeMap::new();
    if n > 0 && tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

/// Clipped matches and hypothesis n-gram total for one order.
fn clipped<T: Ord>(hyp: &[T], reference: &[T], n: usize) -> (usize, usize) {
    let hyp_counts = ngram_counts(hyp, n);
    let ref_counts = ngram_counts(reference, n);
    let matched = hyp_counts
        .iter()
        .map(|(g, &c)| c.min(ref_counts.get(g).copied().unwrap_or(0)))
        .sum();
    (matched, hyp.len().saturating_sub(n - 1))
}

/// Corpus-level BLEU-1..=max_n over paired token sequences.
pub fn bleu_tokens<T: Ord>(pairs: &[(&[T], &[T])], max_n: usize) -> Result<BTreeMap<usize, f64>, MetricError> {
    if pairs.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    let mut matched = vec![0usize; max_n + 1];
    let mut totals = vec![0usize; max_n + 1];
    let (mut hyp_len, mut ref_len) = (0usize, 0usize);
    for (hyp, reference) in pairs {
        hyp_len += hyp.len();
        ref_len += reference.len();
        for n in 1..=max_n {
            let (m, t) = clipped(hyp, reference, n);
            matched[n] += m;
            totals[n] += t;
        }
    }
    let brevity = if hyp_len == 0 {
        0.0
    } else if hyp_len < ref_len {
        libm::exp(1.0 - ref_len as f64 / hyp_len as f64)
    } else {
        1.0
    };

    let mut out = BTreeMap::new();
    let mut log_sum = 0.0;
    let mut zero = false;
    for n in 1..=max_n {
        if matched[n] == 0 || totals[n] == 0 {
            zero = true;
        } else {
            log_sum += libm::log(matched[n] as f64 / totals[n] as f64);
        }
        let score = if zero || brevity == 0.0 {
            0.0
        } else {
            brevity * libm::exp(log_sum / n as f64)
        };
        out.insert(n, score);
    }
    Ok(out)
}

/// Hypothesis and gold normalized tokens of one document.
type TokenPair<'d> = (Vec<&'d str>, Vec<&'d str>);

fn doc_pairs<'d>(
    hypothesis: &'d [CorpusDocument],
    reference: &'d [CorpusDocument],
) -> Result<Vec<TokenPair<'d>>, MetricError> {
    if hypothesis.len() != reference.len() {
        return Err(MetricError::CountMismatch {
            hypothesis: hypothesis.len(),
            reference: reference.len(),
        });
    }
    if hypothesis.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    Ok(hypothesis
        .iter()
        .zip(reference)
        .map(|(h, r)| (h.normalized_tokens(), r.normalized_tokens()))
        .collect())
}

/// Corpus-level BLEU over the normalized tokens of paired documents.
pub fn bleu(
    hypothesis: &[CorpusDocument],
    reference: &[CorpusDocument],
    max_n: usize,
) -> Result<BTreeMap<usize, f64>, MetricError> {
    let docs = doc_pairs(hypothesis, reference)?;
    let pairs: Vec<(&[&str], &[&str])> = docs.iter().map(|(h, r)| (h.as_slice(), r.as_slice())).collect();
    bleu_tokens(&pairs, max_n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub wer: f64,
    /// Corpus-level BLEU by order.
    pub bleu: BTreeMap<usize, f64>,
    /// Mean of per-document BLEU by order.
    pub bleu_document_mean: BTreeMap<usize, f64>,
    pub hypothesis_tokens: usize,
    pub reference_tokens: usize,
}

/// WER and BLEU-1..=4 for paired hypothesis and gold documents.
pub fn evaluate(hypothesis: &[CorpusDocument], reference: &[CorpusDocument]) -> Result<EvalReport, MetricError> {
    const MAX_N: usize = 4;
    let docs = doc_pairs(hypothesis, reference)?;
    let pairs: Vec<(&[&str], &[&str])> = docs.iter().map(|(h, r)| (h.as_slice(), r.as_slice())).collect();

    let wer = pairs.iter().map(|(h, r)| normalized_edit_distance(h, r)).sum::<f64>() / pairs.len() as f64;
    let bleu = bleu_tokens(&pairs, MAX_N)?;

    let mut bleu_document_mean: BTreeMap<usize, f64> = (1..=MAX_N).map(|n| (n, 0.0)).collect();
    for pair in &pairs {
        for (n, v) in bleu_tokens(core::slice::from_ref(pair), MAX_N)? {
            *bleu_document_mean.entry(n).or_default() += v / pairs.len() as f64;
        }
    }

    Ok(EvalReport {
        wer,
        bleu,
        bleu_document_mean,
        hypothesis_tokens: pairs.iter().map(|(h, _)| h.len()).sum(),
        reference_tokens: pairs.iter().map(|(_, r)| r.len()).sum(),
    })
}

impl EvalReport {
    /// `Metric<TAB>Performance` rows: WER then BLEU-n, four decimals.
    pub fn to_report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Metric\tPerformance");
        let _ = writeln!(out, "WER\t{:.4}", self.wer);
        for (n, v) in &self.bleu {
            let _ = writeln!(out, "BLEU-{n}\t{v:.4}");
        }
        out
    }

    /// Per-document mean BLEU in the same layout.
    pub fn document_mean_report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Metric\tDocument mean");
        for (n, v) in &self.bleu_document_mean {
            let _ = writeln!(out, "BLEU-{n}\t{v:.4}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ned_examples() {
        assert_eq!(normalized_edit_distance(&["a", "b"], &["a", "b"]), 0.0);
        assert_eq!(normalized_edit_distance(&["a"], &["b"]), 1.0);
        assert_eq!(normalized_edit_distance(&["a", "b"], &["a"]), 0.5);
        assert_eq!(normalized_edit_distance::<&str>(&[], &[]), 0.0);
        assert_eq!(normalized_edit_distance(&[], &["a", "b"]), 1.0);
    }

    #[test]
    fn ned_prefers_longer_paths() {
        // substitution path: 1/1; delete+insert path: 2/2; one match saves
        // nothing here, but for abc vs xbc: sub gives 1/3
        let r = normalized_edit_distance_ratio(&['a', 'b', 'c'], &['x', 'b', 'c']);
        assert_eq!(r, Ratio { weight: 1, length: 3 });
    }

    #[test]
    fn bleu_hand_computed() {
        let hyp = ["a", "b", "c", "d"];
        let reference = ["a", "b", "x", "d"];
        let b = bleu_tokens(&[(&hyp[..], &reference[..])], 4).unwrap();
        assert!((b[&1] - 0.75).abs() < 1e-12);
        assert!((b[&2] - 0.5).abs() < 1e-12);
        // no trigram matches
        assert_eq!(b[&3], 0.0);
        assert_eq!(b[&4], 0.0);
    }

    #[test]
    fn bleu_identity_and_disjoint() {
        let t = ["a", "b", "c", "d", "e"];
        let b = bleu_tokens(&[(&t[..], &t[..])], 4).unwrap();
        assert!(b.values().all(|&v| v == 1.0));
        let d = ["p", "q", "r", "s", "u"];
        assert_eq!(bleu_tokens(&[(&d[..], &t[..])], 4).unwrap()[&1], 0.0);
    }

    #[test]
    fn brevity_penalty() {
        let hyp = ["a", "b"];
        let reference = ["a", "b", "c", "d"];
        let b = bleu_tokens(&[(&hyp[..], &reference[..])], 1).unwrap();
        assert!((b[&1] - libm::exp(1.0 - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn empty_inputs_rejected() {
        assert_eq!(bleu_tokens::<&str>(&[], 4), Err(MetricError::EmptyCorpus));
        assert_eq!(mean_wer(&[]), Err(MetricError::EmptyCorpus));
        assert_eq!(
            bleu(&[CorpusDocument::new("a")], &[], 4),
            Err(MetricError::CountMismatch {
                hypothesis: 1,
                reference: 0
            })
        );
    }

    #[test]
    fn report_layout() {
        let report = EvalReport {
            wer: 0.32549,
            bleu: (1..=4).map(|n| (n, 1.0 / n as f64)).collect(),
            bleu_document_mean: BTreeMap::new(),
            hypothesis_tokens: 0,
            reference_tokens: 0,
        };
        assert_eq!(
            report.to_report(),
            "Metric\tPerformance\nWER\t0.3255\nBLEU-1\t1.0000\nBLEU-2\t0.5000\nBLEU-3\t0.3333\nBLEU-4\t0.2500\n"
        );
    }
}
