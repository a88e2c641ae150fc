//! Multiword index and longest-match detector.

use std::collections::{BTreeSet, HashMap};

use crate::corpus::Token;
use crate::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct TrieNode {
    children: HashMap<String, TrieNode>,
    /// Index into `MultiwordIndex::targets` when a sequence ends here.
    target: Option<usize>,
}

/// A multiword expression: its lexicon lemma and the senses it carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiwordTarget {
    pub lemma: String,
    pub components: Vec<String>,
    pub sense_keys: BTreeSet<String>,
}

/// Component-lemma sequences (length two or more) mapped to sense keys,
/// plus a surface-to-base inflection table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiwordIndex {
    root: TrieNode,
    targets: Vec<MultiwordTarget>,
    inflections: HashMap<String, BTreeSet<String>>,
}

/// One detected span `[start, end)` over the token sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiwordMatch {
    pub start: usize,
    pub end: usize,
    pub lemma: String,
    pub sense_keys: BTreeSet<String>,
}

impl MultiwordMatch {
    pub fn covers(&self, index: usize) -> bool {
        (self.start..self.end).contains(&index)
    }
}

impl MultiwordIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a component sequence. Sense keys of identical sequences are
    /// merged.
    pub fn insert(
        &mut self,
        lemma: &str,
        components: Vec<String>,
        sense_keys: impl IntoIterator<Item = String>,
    ) -> Result<()> {
        if components.len() < 2 {
            return Err(Error::Invalid(format!(
                "multiword `{lemma}` has fewer than two components after normalization"
            )));
        }
        let mut node = &mut self.root;
        for c in &components {
            node = node.children.entry(c.clone()).or_default();
        }
        match node.target {
            Some(i) => self.targets[i].sense_keys.extend(sense_keys),
            None => {
                node.target = Some(self.targets.len());
                self.targets.push(MultiwordTarget {
                    lemma: lemma.to_string(),
                    components,
                    sense_keys: sense_keys.into_iter().collect(),
                });
            }
        }
        Ok(())
    }

    pub fn add_inflection(&mut self, surface: &str, base: &str) {
        self.inflections
            .entry(surface.to_lowercase())
            .or_default()
            .insert(base.to_string());
    }

    /// Load `surface<TAB>base` lines.
    pub fn add_inflections_tsv(&mut self, text: &str, source: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (s, b) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(format!("{source}:{}", i + 1), "expected surface<TAB>base"))?;
            self.add_inflection(s, b);
        }
        Ok(())
    }

    pub fn inflections(&self) -> impl Iterator<Item = (&str, &str)> {
        self.inflections
            .iter()
            .flat_map(|(s, bases)| bases.iter().map(move |b| (s.as_str(), b.as_str())))
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn targets(&self) -> &[MultiwordTarget] {
        &self.targets
    }

    /// The forms a token may match a component by: lowercase surface, lemma,
    /// and any inflection-table base of either.
    fn forms(&self, token: &Token) -> Vec<String> {
        let mut forms: Vec<String> = Vec::with_capacity(4);
        let mut push = |f: &str| {
            if !forms.iter().any(|x| x == f) {
                forms.push(f.to_string());
            }
        };
        let lower = token.surface.to_lowercase();
        push(&lower);
        push(&token.lemma);
        for key in [lower.as_str(), token.lemma.as_str()] {
            if let Some(bases) = self.inflections.get(key) {
                for b in bases {
                    push(b);
                }
            }
        }
        forms
    }

    /// Longest sequence starting at `start`, backtracking over each token's
    /// candidate forms. Returns `(end, target)`.
    fn longest_from(&self, tokens: &[Token], start: usize) -> Option<(usize, usize)> {
        fn walk(
            index: &MultiwordIndex,
            node: &TrieNode,
            tokens: &[Token],
            at: usize,
            best: &mut Option<(usize, usize)>,
        ) {
            if let Some(t) = node.target {
                if best.is_none_or(|(end, _)| at > end) {
                    *best = Some((at, t));
                }
            }
            let Some(token) = tokens.get(at) else { return };
            for form in index.forms(token) {
                if let Some(child) = node.children.get(&form) {
                    walk(index, child, tokens, at + 1, best);
                }
            }
        }
        let mut best = None;
        walk(self, &self.root, tokens, start, &mut best);
        best.filter(|&(end, _)| end > start)
    }

    /// Scan left to right emitting maximal non-overlapping matches.
    pub fn detect(&self, tokens: &[Token]) -> Vec<MultiwordMatch> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            match self.longest_from(tokens, i) {
                Some((end, t)) => {
                    let target = &self.targets[t];
                    out.push(MultiwordMatch {
                        start: i,
                        end,
                        lemma: target.lemma.clone(),
                        sense_keys: target.sense_keys.clone(),
                    });
                    i = end;
                }
                None => i += 1,
            }
        }
        out
    }
}

pub fn detect_multiwords(tokens: &[Token], index: &MultiwordIndex) -> Vec<MultiwordMatch> {
    index.detect(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tok(surface: &str, lemma: &str, position: usize) -> Token {
        let mut t = Token::word(lemma, position);
        t.surface = surface.to_string();
        t
    }

    fn words(ws: &[&str]) -> Vec<Token> {
        ws.iter().enumerate().map(|(i, w)| Token::word(*w, i)).collect()
    }

    fn keys(k: &[&str]) -> Vec<String> {
        k.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn good_old_days() {
        let mut idx = MultiwordIndex::new();
        idx.insert(
            "the_good_old_days",
            keys(&["good", "old", "day"]),
            keys(&["the_good_old_days%1"]),
        )
        .unwrap();
        let toks = vec![tok("good", "good", 0), tok("old", "old", 1), tok("days", "day", 2)];
        let m = idx.detect(&toks);
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].start, m[0].end), (0, 3));
        assert_eq!(m[0].sense_keys.len(), 1);
        assert!(idx.detect(&words(&["bad", "new", "day"])).is_empty());
    }

    #[test]
    fn longest_match_wins() {
        let mut idx = MultiwordIndex::new();
        idx.insert("a_b", keys(&["a", "b"]), keys(&["ab"])).unwrap();
        idx.insert("a_b_c", keys(&["a", "b", "c"]), keys(&["abc"])).unwrap();
        let m = idx.detect(&words(&["a", "b", "c"]));
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].start, m[0].end, m[0].lemma.as_str()), (0, 3, "a_b_c"));
        let m = idx.detect(&words(&["a", "b", "d", "a", "b"]));
        assert_eq!(m.iter().map(|m| (m.start, m.end)).collect::<Vec<_>>(), [(0, 2), (3, 5)]);
    }

    #[test]
    fn leftmost_wins_on_overlap() {
        let mut idx = MultiwordIndex::new();
        idx.insert("a_b", keys(&["a", "b"]), keys(&["ab"])).unwrap();
        idx.insert("b_c", keys(&["b", "c"]), keys(&["bc"])).unwrap();
        let m = idx.detect(&words(&["a", "b", "c"]));
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].lemma, "a_b");
    }

    #[test]
    fn backtracks_over_forms() {
        // "ran" lemmatized to "run" but the expression lists the surface "ran".
        let mut idx = MultiwordIndex::new();
        idx.insert("ran_off", keys(&["ran", "off"]), keys(&["k1"])).unwrap();
        idx.insert("run_down_street", keys(&["run", "down", "street"]), keys(&["k2"]))
            .unwrap();
        let toks = vec![tok("ran", "run", 0), tok("down", "down", 1), tok("street", "street", 2)];
        let m = idx.detect(&toks);
        assert_eq!(m[0].lemma, "run_down_street");
        let toks = vec![tok("ran", "run", 0), tok("off", "off", 1)];
        assert_eq!(idx.detect(&toks)[0].lemma, "ran_off");
    }

    #[test]
    fn inflection_table_is_consulted() {
        let mut idx = MultiwordIndex::new();
        idx.insert("kick_bucket", keys(&["kick", "bucket"]), keys(&["die"]))
            .unwrap();
        idx.add_inflections_tsv("kicks\tkick\nkicked\tkick\n", "t").unwrap();
        for surface in ["kicks", "kicked"] {
            let toks = vec![tok(surface, surface, 0), tok("bucket", "bucket", 1)];
            assert_eq!(idx.detect(&toks).len(), 1, "{surface}");
        }
    }

    #[test]
    fn rejects_short_sequences() {
        let mut idx = MultiwordIndex::new();
        assert!(idx.insert("x", keys(&["x"]), keys(&["k"])).is_err());
    }
}
