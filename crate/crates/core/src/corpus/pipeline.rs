//! Whole-corpus normalization: read, strip, filter, then normalize every
//! document with a shared proper-noun first pass.

use std::collections::HashSet;
use std::path::Path;

use rayon::prelude::*;

use super::{is_english, strip_boilerplate, BoilerplateMarkers, Diagnostics, Normalizer, RawDocument, Token};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    pub markers: BoilerplateMarkers,
    /// Stopword ratio below which a document is dropped; `None` keeps all.
    pub english_threshold: Option<f64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            markers: BoilerplateMarkers::default(),
            english_threshold: Some(super::DEFAULT_ENGLISH_THRESHOLD),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedDocument {
    pub doc_id: String,
    pub tokens: Vec<Token>,
}

/// Regular files of `dir` in name order (or `dir` itself when it is a
/// file), decoded with invalid UTF-8 skipped. Returns the number of
/// skipped sequences alongside.
pub fn read_corpus(dir: &Path) -> Result<(Vec<RawDocument>, u64)> {
    let mut paths = Vec::new();
    if dir.is_file() {
        paths.push(dir.to_path_buf());
    } else {
        let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        for entry in entries {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            if path.is_file() {
                paths.push(path);
            }
        }
        paths.sort();
    }
    let mut docs = Vec::with_capacity(paths.len());
    let mut skipped = 0;
    for path in paths {
        let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let (doc, bad) = RawDocument::from_bytes(id, &bytes);
        skipped += bad;
        docs.push(doc);
    }
    Ok((docs, skipped))
}

/// Strip boilerplate, drop non-English documents and normalize the rest.
/// Output order follows input order.
pub fn normalize_corpus(
    docs: &[RawDocument],
    normalizer: &Normalizer,
    options: &PipelineOptions,
) -> (Vec<NormalizedDocument>, Diagnostics) {
    let mut diag = Diagnostics::default();
    let kept: Vec<RawDocument> = docs
        .iter()
        .map(|d| strip_boilerplate(d, &options.markers))
        .filter(|d| {
            let keep = options
                .english_threshold
                .is_none_or(|t| is_english(d, normalizer.stopwords(), t));
            if keep {
                diag.documents_kept += 1;
            } else {
                diag.documents_dropped += 1;
            }
            keep
        })
        .collect();
    let seen: HashSet<String> =
        kept.par_iter()
            .map(|d| Normalizer::lowercase_forms(&d.text))
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            });
    let out: Vec<NormalizedDocument> = kept
        .par_iter()
        .map(|d| NormalizedDocument {
            doc_id: d.doc_id.clone(),
            tokens: normalizer.normalize_with(d, &seen),
        })
        .collect();
    diag.tokens_emitted = out.iter().map(|d| d.tokens.len() as u64).sum();
    (out, diag)
}
