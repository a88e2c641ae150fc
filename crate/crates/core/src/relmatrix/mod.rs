//! Vocabulary, windowed cooccurrence counting and the thresholded
//! mutual-information relevance matrix.

pub mod codec;
mod cooc;
mod matrix;
mod vocab;

pub use cooc::{count_cooccurrences, merge_counts, token_ids, CoocCounts, DEFAULT_RADIUS};
pub use matrix::{MatrixMeta, RelevanceMatrix, RelevanceModel, DEFAULT_THRESHOLD};
pub use vocab::{FrequencyCounter, Vocabulary, DEFAULT_VOCAB_SIZE};

use crate::Result;

/// Threshold the raw ratios of `counts` into a relevance matrix.
pub fn build_relevance(counts: &CoocCounts, threshold: f64) -> Result<RelevanceMatrix> {
    RelevanceMatrix::from_counts(counts, threshold)
}

#[cfg(test)]
mod tests;
