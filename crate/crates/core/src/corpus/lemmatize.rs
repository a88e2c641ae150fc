use std::collections::HashMap;
use std::path::Path;

use crate::hash::short_hash;
use crate::{Error, Result};

const DEFAULT_RULES: &str = include_str!("../../data/lemma-rules-en.tsv");
const DEFAULT_EXCEPTIONS: &str = include_str!("../../data/lemma-exceptions-en.tsv");

/// Rewriting is repeated until a fixed point; this bounds pathological tables.
const MAX_PASSES: usize = 8;

/// Maps a lowercase word to its base form.
pub trait Lemmatizer: Send + Sync {
    fn lemmatize(&self, word: &str) -> String;

    /// Identifier folded into configuration hashes.
    fn id(&self) -> String;
}

/// Leaves every word unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityLemmatizer;

impl Lemmatizer for IdentityLemmatizer {
    fn lemmatize(&self, word: &str) -> String {
        word.to_string()
    }

    fn id(&self) -> String {
        "identity".to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct SuffixRule {
    suffix: String,
    replacement: String,
    min_stem: usize,
}

impl SuffixRule {
    fn is_stop(&self) -> bool {
        self.suffix == self.replacement
    }
}

/// Exception table lookup followed by ordered suffix rules.
///
/// Output is always a fixed point: lemmatizing a lemma returns it unchanged.
#[derive(Debug, Clone)]
pub struct SuffixLemmatizer {
    exceptions: HashMap<String, String>,
    rules: Vec<SuffixRule>,
    id: String,
}

impl SuffixLemmatizer {
    pub fn parse(rules: &str, exceptions: &str) -> Result<Self> {
        let mut parsed = Vec::new();
        for (i, line) in data_lines(rules) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(
                    format!("lemma rules line {}", i + 1),
                    "expected suffix<TAB>replacement<TAB>min_stem",
                ));
            }
            let min_stem: usize = cols[2]
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("lemma rules line {}", i + 1), "min_stem is not an integer"))?;
            let rule = SuffixRule {
                suffix: cols[0].to_string(),
                replacement: cols[1].to_string(),
                min_stem,
            };
            if rule.suffix.is_empty() {
                return Err(Error::parse(format!("lemma rules line {}", i + 1), "empty suffix"));
            }
            // Rewrites must shrink the word so the fixed-point loop terminates,
            // and must leave a nonempty stem.
            if !rule.is_stop()
                && (rule.replacement.len() >= rule.suffix.len() || (rule.min_stem == 0 && rule.replacement.is_empty()))
            {
                return Err(Error::parse(
                    format!("lemma rules line {}", i + 1),
                    "rewrite rules must shorten the word and keep a nonempty stem",
                ));
            }
            parsed.push(rule);
        }

        let mut table = HashMap::new();
        for (i, line) in data_lines(exceptions) {
            let (surface, base) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(format!("lemma exceptions line {}", i + 1), "expected surface<TAB>base"))?;
            if base.is_empty() {
                return Err(Error::parse(
                    format!("lemma exceptions line {}", i + 1),
                    "empty base form",
                ));
            }
            table.insert(surface.to_string(), base.to_string());
        }

        let id = format!("suffix:{}", short_hash(format!("{rules}\u{0}{exceptions}").as_bytes()));
        Ok(SuffixLemmatizer {
            exceptions: table,
            rules: parsed,
            id,
        })
    }

    pub fn from_paths(rules: &Path, exceptions: &Path) -> Result<Self> {
        let r = std::fs::read_to_string(rules).map_err(|e| Error::io(rules, e))?;
        let x = std::fs::read_to_string(exceptions).map_err(|e| Error::io(exceptions, e))?;
        Self::parse(&r, &x)
    }

    /// The English tables shipped with the crate.
    pub fn english() -> Self {
        Self::parse(DEFAULT_RULES, DEFAULT_EXCEPTIONS).expect("shipped lemmatizer tables are valid")
    }

    fn step(&self, word: &str) -> Option<String> {
        if let Some(base) = self.exceptions.get(word) {
            return if base == word { None } else { Some(base.clone()) };
        }
        for rule in &self.rules {
            if let Some(stem) = word.strip_suffix(rule.suffix.as_str()) {
                if stem.chars().count() < rule.min_stem {
                    continue;
                }
                if rule.is_stop() {
                    return None;
                }
                return Some(format!("{stem}{}", rule.replacement));
            }
        }
        None
    }
}

impl Lemmatizer for SuffixLemmatizer {
    fn lemmatize(&self, word: &str) -> String {
        let mut current = word.to_string();
        for _ in 0..MAX_PASSES {
            match self.step(&current) {
                Some(next) if next != current => current = next,
                _ => break,
            }
        }
        current
    }

    fn id(&self) -> String {
        self.id.clone()
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}
