use std::collections::HashMap;

use rayon::prelude::*;

use super::Vocabulary;
use crate::corpus::Token;
use crate::{Error, Result};

pub const DEFAULT_RADIUS: usize = 30;

/// Window-presence counts over a corpus.
///
/// Every token position is the center of a window spanning `radius` tokens
/// on each side, clipped to its document. `occ[a]` counts windows containing
/// `a` at least once; `pairs[(a, b)]` (with `a < b`) counts windows
/// containing both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoocCounts {
    radius: usize,
    vocab_hash: String,
    total_positions: u64,
    occ: Vec<u64>,
    pairs: HashMap<(u32, u32), u64>,
}

impl CoocCounts {
    pub fn empty(vocab: &Vocabulary, radius: usize) -> Self {
        CoocCounts {
            radius,
            vocab_hash: vocab.hash().to_string(),
            total_positions: 0,
            occ: vec![0; vocab.len()],
            pairs: HashMap::new(),
        }
    }

    /// Assemble counts directly, validating the count invariants.
    pub fn from_parts(
        radius: usize,
        vocab_hash: impl Into<String>,
        total_positions: u64,
        occ: Vec<u64>,
        pairs: HashMap<(u32, u32), u64>,
    ) -> Result<Self> {
        if let Some(o) = occ.iter().find(|&&o| o > total_positions) {
            return Err(Error::Invalid(format!(
                "occurrence count {o} exceeds {total_positions} positions"
            )));
        }
        for (&(a, b), &n) in &pairs {
            if a >= b || b as usize >= occ.len() {
                return Err(Error::Invalid(format!("invalid pair key ({a}, {b})")));
            }
            if n > occ[a as usize].min(occ[b as usize]) {
                return Err(Error::Invalid(format!(
                    "pair ({a}, {b}) count {n} exceeds an occurrence count"
                )));
            }
        }
        Ok(CoocCounts {
            radius,
            vocab_hash: vocab_hash.into(),
            total_positions,
            occ,
            pairs,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vocab_hash(&self) -> &str {
        &self.vocab_hash
    }

    pub fn vocab_size(&self) -> usize {
        self.occ.len()
    }

    pub fn total_positions(&self) -> u64 {
        self.total_positions
    }

    pub fn occ(&self, id: u32) -> u64 {
        self.occ.get(id as usize).copied().unwrap_or(0)
    }

    pub fn pair(&self, a: u32, b: u32) -> u64 {
        if a == b {
            return 0;
        }
        self.pairs.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }

    /// All stored pairs as `(a, b, count)` with `a < b`, in no fixed order.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32, u64)> + '_ {
        self.pairs.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Unthresholded ratio `P(a and b) / (P(a) P(b))` with probabilities
    /// estimated over window centers.
    pub fn raw_mi(&self, a: u32, b: u32) -> f64 {
        let (oa, ob) = (self.occ(a), self.occ(b));
        let p = self.pair(a, b);
        if p == 0 || oa == 0 || ob == 0 {
            return 0.0;
        }
        (p as f64 * self.total_positions as f64) / (oa as f64 * ob as f64)
    }

    /// Count one document given the vocabulary id of each token
    /// (`None` for out-of-vocabulary tokens, which still occupy a position).
    pub fn add_document(&mut self, ids: &[Option<u32>]) {
        let n = ids.len();
        if n == 0 {
            return;
        }
        self.total_positions += n as u64;
        let r = self.radius;

        // Each quantity is accumulated as (exit center - entry center) over
        // the episodes during which the word, or both words of a pair, are
        // present in the sliding window.
        let mut in_window: HashMap<u32, u32> = HashMap::new();
        let mut present: Vec<u32> = Vec::new();
        let mut occ_acc: HashMap<u32, i64> = HashMap::new();
        let mut pair_acc: HashMap<(u32, u32), i64> = HashMap::new();

        let enter = |x: u32,
                     p: i64,
                     present: &mut Vec<u32>,
                     occ_acc: &mut HashMap<u32, i64>,
                     pair_acc: &mut HashMap<(u32, u32), i64>| {
            *occ_acc.entry(x).or_default() -= p;
            for &y in present.iter() {
                *pair_acc.entry((x.min(y), x.max(y))).or_default() -= p;
            }
            present.push(x);
        };
        let leave = |x: u32,
                     p: i64,
                     present: &mut Vec<u32>,
                     occ_acc: &mut HashMap<u32, i64>,
                     pair_acc: &mut HashMap<(u32, u32), i64>| {
            let i = present.iter().position(|&y| y == x).expect("word present");
            present.swap_remove(i);
            *occ_acc.entry(x).or_default() += p;
            for &y in present.iter() {
                *pair_acc.entry((x.min(y), x.max(y))).or_default() += p;
            }
        };

        for p in 0..n {
            let center = p as i64;
            if p > r {
                if let Some(x) = ids[p - 1 - r] {
                    let c = in_window.get_mut(&x).expect("counted on entry");
                    *c -= 1;
                    if *c == 0 {
                        in_window.remove(&x);
                        leave(x, center, &mut present, &mut occ_acc, &mut pair_acc);
                    }
                }
            }
            let added: std::ops::Range<usize> = if p == 0 {
                0..(r + 1).min(n)
            } else if p + r < n {
                p + r..p + r + 1
            } else {
                0..0
            };
            for q in added {
                if let Some(x) = ids[q] {
                    let c = in_window.entry(x).or_default();
                    *c += 1;
                    if *c == 1 {
                        enter(x, center, &mut present, &mut occ_acc, &mut pair_acc);
                    }
                }
            }
        }
        let end = n as i64;
        while let Some(&x) = present.last() {
            leave(x, end, &mut present, &mut occ_acc, &mut pair_acc);
        }

        for (x, c) in occ_acc {
            debug_assert!(c >= 0);
            self.occ[x as usize] += c as u64;
        }
        for (key, c) in pair_acc {
            debug_assert!(c >= 0);
            if c > 0 {
                *self.pairs.entry(key).or_default() += c as u64;
            }
        }
    }

    /// Fieldwise sum of counts gathered with the same radius and vocabulary.
    pub fn merge(mut self, mut other: CoocCounts) -> Result<CoocCounts> {
        if self.radius != other.radius {
            return Err(Error::Mismatch {
                what: "window radius",
                expected: self.radius.to_string(),
                found: other.radius.to_string(),
            });
        }
        if self.vocab_hash != other.vocab_hash || self.occ.len() != other.occ.len() {
            return Err(Error::Mismatch {
                what: "vocabulary hash",
                expected: self.vocab_hash,
                found: other.vocab_hash,
            });
        }
        self.total_positions += other.total_positions;
        for (a, b) in self.occ.iter_mut().zip(other.occ) {
            *a += b;
        }
        if self.pairs.len() < other.pairs.len() {
            std::mem::swap(&mut self.pairs, &mut other.pairs);
        }
        for (k, c) in other.pairs {
            *self.pairs.entry(k).or_default() += c;
        }
        Ok(self)
    }
}

/// Merge a sequence of partial counts; the sequence must be nonempty.
pub fn merge_counts<I>(parts: I) -> Result<CoocCounts>
where
    I: IntoIterator<Item = CoocCounts>,
{
    let mut iter = parts.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::Invalid("merge_counts needs at least one part".into()))?;
    iter.try_fold(first, CoocCounts::merge)
}

pub fn token_ids(tokens: &[Token], vocab: &Vocabulary) -> Vec<Option<u32>> {
    tokens.iter().map(|t| vocab.id(&t.lemma)).collect()
}

/// Count window cooccurrences over a set of documents, in parallel.
pub fn count_cooccurrences(streams: &[Vec<Token>], vocab: &Vocabulary, radius: usize) -> Result<CoocCounts> {
    if radius == 0 {
        return Err(Error::Invalid("window radius must be at least 1".into()));
    }
    streams
        .par_iter()
        .fold(
            || CoocCounts::empty(vocab, radius),
            |mut acc, doc| {
                acc.add_document(&token_ids(doc, vocab));
                acc
            },
        )
        .map(Ok::<_, Error>)
        .try_reduce(|| CoocCounts::empty(vocab, radius), CoocCounts::merge)
}
