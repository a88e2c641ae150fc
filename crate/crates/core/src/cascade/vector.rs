use std::collections::BTreeMap;

use crate::relmatrix::RelevanceModel;

/// Sparse nonnegative weights over lemmas. Zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SenseVector {
    weights: BTreeMap<String, f64>,
}

impl SenseVector {
    /// Term frequencies of a token list.
    pub fn term_frequencies<S: AsRef<str>>(tokens: &[S]) -> Self {
        let mut v = SenseVector::default();
        for t in tokens {
            v.add(t.as_ref(), 1.0);
        }
        v
    }

    pub fn from_weights<I, S>(weights: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut v = SenseVector::default();
        for (w, x) in weights {
            v.add(&w.into(), x);
        }
        v
    }

    pub fn add(&mut self, lemma: &str, weight: f64) {
        if weight == 0.0 {
            return;
        }
        let slot = self.weights.entry(lemma.to_string()).or_insert(0.0);
        *slot += weight;
        if *slot == 0.0 {
            self.weights.remove(lemma);
        }
    }

    /// `self += factor * other`
    pub fn add_scaled(&mut self, other: &SenseVector, factor: f64) {
        for (w, &x) in &other.weights {
            self.add(w, factor * x);
        }
    }

    pub fn get(&self, lemma: &str) -> f64 {
        self.weights.get(lemma).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.weights.contains_key(lemma)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(w, &x)| (w.as_str(), x))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> SenseVector {
        let mut v = SenseVector::default();
        v.add_scaled(self, factor);
        v
    }

    /// `R v + v`: each word contributes itself plus its matrix neighbours,
    /// weighted by the relevance entry.
    pub fn enrich(&self, model: &RelevanceModel) -> SenseVector {
        let mut acc: BTreeMap<&str, f64> = BTreeMap::new();
        for (w, x) in self.iter() {
            *acc.entry(w).or_default() += x;
            for (u, r) in model.neighbors(w) {
                *acc.entry(u).or_default() += r * x;
            }
        }
        SenseVector::from_weights(acc.into_iter().map(|(w, x)| (w.to_string(), x)))
    }
}

pub fn enrich_vector(v: &SenseVector, model: &RelevanceModel) -> SenseVector {
    v.enrich(model)
}
