//! Context extraction and the relevance-weighted overlap score.

use std::collections::{BTreeMap, HashMap};

use super::{DisambiguationInstance, SenseVector};
use crate::corpus::PosTag;
use crate::relmatrix::RelevanceModel;

/// Which context tokens take part in scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ContextFilter {
    /// Tokens on each side of the target; `None` keeps the whole context.
    pub radius: Option<usize>,
    /// Drop tagged tokens whose tag cannot relate to the target's POS.
    pub pos_compat: bool,
}

/// `freq(w, C)`: lemma counts of the context, target excluded.
pub fn context_frequencies(inst: &DisambiguationInstance, filter: ContextFilter) -> BTreeMap<String, f64> {
    let t = inst.target_index;
    let (lo, hi) = match filter.radius {
        Some(r) => (t.saturating_sub(r), (t + r).min(inst.context.len().saturating_sub(1))),
        None => (0, inst.context.len().saturating_sub(1)),
    };
    let mut freq = BTreeMap::new();
    if inst.context.is_empty() {
        return freq;
    }
    for (i, tok) in inst.context[lo..=hi].iter().enumerate() {
        if lo + i == t {
            continue;
        }
        if filter.pos_compat {
            if let Some(tag) = tok.pos_tag {
                if !compatible(inst.pos, tag) {
                    continue;
                }
            }
        }
        *freq.entry(tok.lemma.clone()).or_insert(0.0) += 1.0;
    }
    freq
}

fn compatible(target: PosTag, other: PosTag) -> bool {
    target.compatible(other)
}

/// `d_w`: how many of the sense vectors contain each word.
pub fn document_frequencies(senses: &[SenseVector]) -> HashMap<String, usize> {
    let mut df = HashMap::new();
    for s in senses {
        for (w, _) in s.iter() {
            *df.entry(w.to_string()).or_insert(0) += 1;
        }
    }
    df
}

/// `sum over w in C of R(w, target) * freq(w, C) * freq(w, S) * ln(N / d_w)`.
///
/// `doc_freq` holds `d_w` over all `n_senses` sense vectors of the target
/// lemma; words with `d_w = 0` contribute nothing.
pub fn score_relevance(
    context: &BTreeMap<String, f64>,
    target_lemma: &str,
    sense: &SenseVector,
    doc_freq: &HashMap<String, usize>,
    n_senses: usize,
    model: &RelevanceModel,
) -> f64 {
    let mut score = 0.0;
    for (w, &fc) in context {
        let fs = sense.get(w);
        if fs == 0.0 {
            continue;
        }
        let d = doc_freq.get(w).copied().unwrap_or(0);
        if d == 0 {
            continue;
        }
        let r = model.weight(w, target_lemma);
        if r == 0.0 {
            continue;
        }
        let idf = (n_senses as f64 / d as f64).ln();
        score += r * fc * fs * idf;
    }
    score
}

/// `sum over w in C of freq(w, C) * enriched(w)`.
pub fn score_enriched(context: &BTreeMap<String, f64>, enriched: &SenseVector) -> f64 {
    context.iter().map(|(w, &fc)| fc * enriched.get(w)).sum()
}
