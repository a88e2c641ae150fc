use std::collections::BTreeSet;
use std::path::Path;

use crate::hash::short_hash;
use crate::{Error, Result};

const DEFAULT_EN: &str = include_str!("../../data/stopwords-en.txt");

/// A set of lowercase lemmas removed during normalization.
///
/// The list carries a content hash so that artifacts built under different
/// lists can be told apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordList {
    entries: BTreeSet<String>,
    hash: String,
}

impl StopwordList {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let entries: BTreeSet<String> = entries
            .into_iter()
            .map(|s| s.as_ref().trim().to_lowercase())
            .filter(|s| !s.is_empty())
            .collect();
        let mut canonical = String::new();
        for e in &entries {
            canonical.push_str(e);
            canonical.push('\n');
        }
        let hash = short_hash(canonical.as_bytes());
        StopwordList { entries, hash }
    }

    /// Parse the one-entry-per-line format; `#` starts a comment line.
    pub fn parse(text: &str) -> Self {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    /// The English list shipped with the crate.
    pub fn english() -> Self {
        Self::parse(DEFAULT_EN)
    }

    pub fn empty() -> Self {
        Self::new(std::iter::empty::<&str>())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(word)
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }
}
