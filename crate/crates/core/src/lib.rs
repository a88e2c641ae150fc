//! Word sense disambiguation driven by a mutual-information relevance matrix.
//!
//! The crate is organised as a pipeline:
//!
//! - [`corpus`] turns raw text into normalized token streams.
//! - [`relmatrix`] builds the vocabulary, windowed cooccurrence counts and the
//!   thresholded relevance matrix.
//! - [`lexicon`] holds the sense inventory and the multiword detector.
//! - [`cascade`] runs ordered heuristic pipelines over disambiguation instances.
//! - [`eval`] scores answers against a gold standard and provides baselines.
//! - [`pseudo`] generates pseudoword benchmarks from a plain corpus.

pub mod cascade;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod hash;
pub mod lexicon;
pub mod pseudo;
pub mod relmatrix;

pub use error::{Error, Result};

/// Name and version stamped into every artifact header.
pub const TOOL_VERSION: &str = concat!("relwsd ", env!("CARGO_PKG_VERSION"));
