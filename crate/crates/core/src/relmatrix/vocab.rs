use std::collections::HashMap;
use std::fmt::Write as _;

use crate::corpus::Token;
use crate::hash::short_hash;
use crate::{Error, Result};

pub const DEFAULT_VOCAB_SIZE: usize = 20_000;

/// The `K` most frequent lemmas (or labels) of a corpus.
///
/// Entries are sorted by descending frequency with ties broken
/// lexicographically; a word's id is its index in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<(String, u64)>,
    index: HashMap<String, u32>,
    hash: String,
}

/// Mergeable frequency table used to build a [`Vocabulary`].
#[derive(Debug, Clone, Default)]
pub struct FrequencyCounter {
    counts: HashMap<String, u64>,
}

impl FrequencyCounter {
    pub fn add_stream(&mut self, tokens: &[Token]) {
        for t in tokens {
            *self.counts.entry(t.lemma.clone()).or_default() += 1;
        }
    }

    pub fn merge(mut self, other: FrequencyCounter) -> Self {
        for (w, c) in other.counts {
            *self.counts.entry(w).or_default() += c;
        }
        self
    }

    pub fn into_vocabulary(self, max_size: usize) -> Vocabulary {
        let mut entries: Vec<(String, u64)> = self.counts.into_iter().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        entries.truncate(max_size);
        Vocabulary::from_entries(entries)
    }
}

impl Vocabulary {
    /// Build from token streams keeping at most `max_size` entries.
    pub fn build<'a, I>(streams: I, max_size: usize) -> Vocabulary
    where
        I: IntoIterator<Item = &'a [Token]>,
    {
        let mut counter = FrequencyCounter::default();
        for s in streams {
            counter.add_stream(s);
        }
        counter.into_vocabulary(max_size)
    }

    /// Entries must already be in canonical order.
    fn from_entries(entries: Vec<(String, u64)>) -> Vocabulary {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, (w, _))| (w.clone(), i as u32))
            .collect();
        let hash = short_hash(Self::entries_tsv(&entries).as_bytes());
        Vocabulary { entries, index, hash }
    }

    fn entries_tsv(entries: &[(String, u64)]) -> String {
        let mut out = String::new();
        for (w, f) in entries {
            let _ = writeln!(out, "{w}\t{f}");
        }
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: u32) -> Option<&str> {
        self.entries.get(id as usize).map(|(w, _)| w.as_str())
    }

    pub fn frequency(&self, id: u32) -> Option<u64> {
        self.entries.get(id as usize).map(|&(_, f)| f)
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    /// Checksum of the entry list; matrices record it to bind themselves
    /// to the vocabulary they were counted with.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// `lemma<TAB>frequency` lines preceded by `#` metadata lines.
    pub fn to_tsv(&self, header: &[(String, String)]) -> String {
        let mut out = String::new();
        for (k, v) in header {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str(&Self::entries_tsv(&self.entries));
        out
    }

    pub fn from_tsv(text: &str, source: &str) -> Result<Vocabulary> {
        let mut entries: Vec<(String, u64)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.starts_with('#') || line.is_empty() {
                continue;
            }
            let loc = || format!("{source}:{}", i + 1);
            let (w, f) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(loc(), "expected lemma<TAB>frequency"))?;
            let f: u64 = f
                .parse()
                .map_err(|_| Error::parse(loc(), "frequency is not an integer"))?;
            if w.is_empty() {
                return Err(Error::parse(loc(), "empty lemma"));
            }
            if let Some((pw, pf)) = entries.last() {
                if f > *pf || (f == *pf && w <= pw.as_str()) {
                    return Err(Error::parse(loc(), "entries not in descending frequency order"));
                }
            }
            entries.push((w.to_string(), f));
        }
        Ok(Self::from_entries(entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(words: &str) -> Vec<Token> {
        words
            .split_whitespace()
            .enumerate()
            .map(|(i, w)| Token::word(w, i))
            .collect()
    }

    #[test]
    fn top_k_with_tie_break() {
        let s = stream("a a b");
        let v = Vocabulary::build([s.as_slice()], 2);
        assert_eq!(v.entries(), [("a".to_string(), 2), ("b".to_string(), 1)]);
        let v10 = Vocabulary::build([s.as_slice()], 10);
        assert_eq!(v10.len(), 2);
        let tie = stream("b a");
        let v = Vocabulary::build([tie.as_slice()], 2);
        assert_eq!(v.entries(), [("a".to_string(), 1), ("b".to_string(), 1)]);
        assert_eq!(v.id("b"), Some(1));
        assert_eq!(v.word(1), Some("b"));
        let one = Vocabulary::build([s.as_slice()], 1);
        assert_eq!(one.entries(), [("a".to_string(), 2)]);
    }

    #[test]
    fn empty_corpus_gives_empty_vocabulary() {
        let v = Vocabulary::build(std::iter::empty::<&[Token]>(), 5);
        assert!(v.is_empty());
    }

    #[test]
    fn tsv_round_trip_and_order_check() {
        let s = stream("x y y z z z");
        let v = Vocabulary::build([s.as_slice()], 10);
        let text = v.to_tsv(&[("tool".into(), "t".into())]);
        assert!(text.starts_with("# tool=t\nz\t3\n"));
        let back = Vocabulary::from_tsv(&text, "v").unwrap();
        assert_eq!(back, v);
        assert!(Vocabulary::from_tsv("a\t1\nb\t2\n", "v").is_err());
        assert!(Vocabulary::from_tsv("b\t1\na\t1\n", "v").is_err());
    }
}
