use super::{CoocCounts, Vocabulary};
use crate::{Error, Result};

pub const DEFAULT_THRESHOLD: f64 = 2.0;

/// Header fields persisted with a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixMeta {
    pub vocab_hash: String,
    /// Hash of the stopword list the corpus was normalized with.
    pub stopword_hash: String,
    /// Hash of the run configuration that produced the matrix.
    pub config_hash: String,
    pub radius: u32,
    pub threshold: f64,
    pub total_positions: u64,
    pub vocab_size: u64,
}

/// Thresholded, symmetric mutual-information matrix over vocabulary ids.
///
/// Cells are kept as an upper-triangle list keyed by `(min id, max id)`;
/// a symmetric row index is derived from it for neighbourhood queries.
/// Every stored weight is at least `threshold`; anything else reads as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RelevanceMatrix {
    meta: MatrixMeta,
    cells: Vec<(u32, u32, f64)>,
    row_start: Vec<usize>,
    row_cols: Vec<u32>,
    row_weights: Vec<f64>,
}

impl RelevanceMatrix {
    /// Apply the threshold to the raw ratios of `counts`.
    pub fn from_counts(counts: &CoocCounts, threshold: f64) -> Result<Self> {
        if counts.total_positions() == 0 {
            return Err(Error::EmptyCorpus);
        }
        if !(threshold > 0.0 && threshold.is_finite()) {
            return Err(Error::Invalid(format!("threshold must be positive, got {threshold}")));
        }
        let cells = counts
            .pairs()
            .filter_map(|(a, b, _)| {
                let raw = counts.raw_mi(a, b);
                (raw >= threshold).then_some((a, b, raw))
            })
            .collect();
        let meta = MatrixMeta {
            vocab_hash: counts.vocab_hash().to_string(),
            stopword_hash: String::new(),
            config_hash: String::new(),
            radius: counts.radius() as u32,
            threshold,
            total_positions: counts.total_positions(),
            vocab_size: counts.vocab_size() as u64,
        };
        Self::from_cells(meta, cells)
    }

    /// Build from explicit upper-triangle cells, validating every invariant.
    pub fn from_cells(meta: MatrixMeta, mut cells: Vec<(u32, u32, f64)>) -> Result<Self> {
        let n = meta.vocab_size as usize;
        cells.sort_by_key(|&(a, b, _)| (a, b));
        for w in cells.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::Invalid(format!("duplicate cell ({}, {})", w[0].0, w[0].1)));
            }
        }
        for &(a, b, v) in &cells {
            if a >= b {
                return Err(Error::Invalid(format!("cell ({a}, {b}) is not upper-triangle")));
            }
            if b as usize >= n {
                return Err(Error::IdOutOfRange { id: b, size: n });
            }
            if !(v.is_finite() && v >= meta.threshold) {
                return Err(Error::Invalid(format!(
                    "cell ({a}, {b}) weight {v} is below threshold {}",
                    meta.threshold
                )));
            }
        }

        let mut degree = vec![0usize; n + 1];
        for &(a, b, _) in &cells {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut row_start = vec![0usize; n + 1];
        for i in 0..n {
            row_start[i + 1] = row_start[i] + degree[i];
        }
        let mut fill = row_start.clone();
        let mut row_cols = vec![0u32; 2 * cells.len()];
        let mut row_weights = vec![0f64; 2 * cells.len()];
        // Cells are sorted by (a, b), so each row receives columns in
        // ascending order: smaller partners (as b) first, then larger (as a).
        for &(a, b, v) in &cells {
            let slot = fill[b as usize];
            row_cols[slot] = a;
            row_weights[slot] = v;
            fill[b as usize] += 1;
        }
        for &(a, b, v) in &cells {
            let slot = fill[a as usize];
            row_cols[slot] = b;
            row_weights[slot] = v;
            fill[a as usize] += 1;
        }
        Ok(RelevanceMatrix {
            meta,
            cells,
            row_start,
            row_cols,
            row_weights,
        })
    }

    pub fn meta(&self) -> &MatrixMeta {
        &self.meta
    }

    pub fn with_stopword_hash(mut self, hash: impl Into<String>) -> Self {
        self.meta.stopword_hash = hash.into();
        self
    }

    pub fn with_config_hash(mut self, hash: impl Into<String>) -> Self {
        self.meta.config_hash = hash.into();
        self
    }

    pub fn vocab_size(&self) -> usize {
        self.meta.vocab_size as usize
    }

    pub fn threshold(&self) -> f64 {
        self.meta.threshold
    }

    /// Stored cells, upper triangle, sorted by `(a, b)`.
    pub fn cells(&self) -> &[(u32, u32, f64)] {
        &self.cells
    }

    pub fn nnz(&self) -> usize {
        self.cells.len()
    }

    fn check(&self, id: u32) -> Result<()> {
        if (id as usize) < self.vocab_size() {
            Ok(())
        } else {
            Err(Error::IdOutOfRange {
                id,
                size: self.vocab_size(),
            })
        }
    }

    /// Stored weight of `(a, b)` or 0. Self-relevance is always 0.
    pub fn relevance(&self, a: u32, b: u32) -> Result<f64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.get(a, b))
    }

    /// Unchecked lookup for ids known to be in range.
    pub fn get(&self, a: u32, b: u32) -> f64 {
        if a == b {
            return 0.0;
        }
        let (cols, weights) = self.row(a);
        match cols.binary_search(&b) {
            Ok(i) => weights[i],
            Err(_) => 0.0,
        }
    }

    /// Nonzero entries of row `id`, columns ascending.
    pub fn row(&self, id: u32) -> (&[u32], &[f64]) {
        let i = id as usize;
        if i >= self.vocab_size() {
            return (&[], &[]);
        }
        let range = self.row_start[i]..self.row_start[i + 1];
        (&self.row_cols[range.clone()], &self.row_weights[range])
    }

    /// Every cell and the threshold multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Invalid(format!("scale factor must be positive, got {factor}")));
        }
        let mut meta = self.meta.clone();
        meta.threshold *= factor;
        let cells = self.cells.iter().map(|&(a, b, v)| (a, b, v * factor)).collect();
        Self::from_cells(meta, cells)
    }
}

/// A matrix paired with the vocabulary it was built over.
#[derive(Debug, Clone)]
pub struct RelevanceModel {
    vocab: Vocabulary,
    matrix: RelevanceMatrix,
    content_hash: String,
}

impl RelevanceModel {
    pub fn new(vocab: Vocabulary, matrix: RelevanceMatrix) -> Result<Self> {
        if vocab.hash() != matrix.meta().vocab_hash {
            return Err(Error::Mismatch {
                what: "vocabulary hash",
                expected: matrix.meta().vocab_hash.clone(),
                found: vocab.hash().to_string(),
            });
        }
        if vocab.len() != matrix.vocab_size() {
            return Err(Error::Mismatch {
                what: "vocabulary size",
                expected: matrix.vocab_size().to_string(),
                found: vocab.len().to_string(),
            });
        }
        let content_hash = crate::hash::short_hash(&super::codec::encode_binary(&matrix));
        Ok(RelevanceModel {
            vocab,
            matrix,
            content_hash,
        })
    }

    /// A model with no vocabulary: every weight reads as 0.
    pub fn empty() -> Self {
        let vocab = Vocabulary::build(std::iter::empty::<&[crate::corpus::Token]>(), 0);
        let meta = MatrixMeta {
            vocab_hash: vocab.hash().to_string(),
            stopword_hash: String::new(),
            config_hash: String::new(),
            radius: 0,
            threshold: DEFAULT_THRESHOLD,
            total_positions: 0,
            vocab_size: 0,
        };
        let matrix = RelevanceMatrix::from_cells(meta, Vec::new()).expect("empty matrix is valid");
        Self::new(vocab, matrix).expect("hashes agree")
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn matrix(&self) -> &RelevanceMatrix {
        &self.matrix
    }

    /// Hash of the matrix's binary encoding.
    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }

    /// Relevance between two lemmas; 0 when either is out of vocabulary.
    pub fn weight(&self, a: &str, b: &str) -> f64 {
        match (self.vocab.id(a), self.vocab.id(b)) {
            (Some(x), Some(y)) => self.matrix.get(x, y),
            _ => 0.0,
        }
    }

    /// Related lemmas of `lemma` with their weights.
    pub fn neighbors<'a>(&'a self, lemma: &str) -> impl Iterator<Item = (&'a str, f64)> + 'a {
        let (cols, weights) = match self.vocab.id(lemma) {
            Some(id) => self.matrix.row(id),
            None => (&[][..], &[][..]),
        };
        cols.iter()
            .zip(weights)
            .map(move |(&c, &w)| (self.vocab.word(c).expect("row ids are in vocabulary"), w))
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.vocab.clone(), self.matrix.scaled(factor)?)
    }
}
