//! Sense inventory: ordered senses with normalized glosses, relative sense
//! frequencies, hyponym links and the multiword index.
//!
//! The on-disk format is JSON:
//!
//! ```json
//! {
//!   "provenance": "free text describing where the counts come from",
//!   "entries": [
//!     { "lemma": "bank", "pos": "noun",
//!       "senses": [
//!         { "sense_key": "bank%1", "rank": 1, "gloss": "a financial institution",
//!           "count": 90, "hyponyms": ["savings_bank%1"], "examples": ["..."] }
//!       ] }
//!   ],
//!   "inflections": { "days": ["day"] }
//! }
//! ```
//!
//! Each sense gives either a raw `count` or a `rel_freq`, not both. Entries
//! whose lemma contains `_` are indexed as multiword expressions.

mod multiword;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use multiword::{detect_multiwords, MultiwordIndex, MultiwordMatch, MultiwordTarget};

use crate::corpus::{Normalizer, PosTag};
use crate::{Error, Result};

pub const DEFAULT_EXPAND_DEPTH: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct SenseEntry {
    pub sense_key: String,
    pub rank: usize,
    pub gloss: Vec<String>,
    pub rel_freq: f64,
    pub hyponym_keys: Vec<String>,
    /// Normalized training examples; `None` when the lexicon has none.
    pub examples: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconEntry {
    pub lemma: String,
    pub pos: PosTag,
    pub senses: Vec<SenseEntry>,
}

impl LexiconEntry {
    pub fn first_sense(&self) -> &SenseEntry {
        &self.senses[0]
    }

    pub fn sense(&self, key: &str) -> Option<&SenseEntry> {
        self.senses.iter().find(|s| s.sense_key == key)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLexicon {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
    entries: Vec<RawEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    inflections: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    lemma: String,
    pos: String,
    senses: Vec<RawSense>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSense {
    sense_key: String,
    rank: usize,
    gloss: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rel_freq: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    hyponyms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    examples: Option<Vec<String>>,
}

/// Options applied while loading.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// When set, only these multiword lemmas are indexed.
    pub multiword_allow: Option<HashSet<String>>,
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    provenance: Option<String>,
    entries: Vec<LexiconEntry>,
    by_lemma: HashMap<(String, PosTag), usize>,
    by_key: HashMap<String, (usize, usize)>,
    multiwords: MultiwordIndex,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.provenance == other.provenance && self.entries == other.entries && self.multiwords == other.multiwords
    }
}

impl Lexicon {
    pub fn load(path: &Path, normalizer: &Normalizer, options: &LoadOptions) -> Result<Lexicon> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, normalizer, options)
    }

    pub fn from_json(text: &str, normalizer: &Normalizer, options: &LoadOptions) -> Result<Lexicon> {
        let (lexicon, violations) = Self::build(text, normalizer, options)?;
        match violations.into_iter().next() {
            Some(first) => Err(first),
            None => Ok(lexicon),
        }
    }

    /// Every invariant violation found in `text`, for reporting.
    pub fn check(text: &str, normalizer: &Normalizer) -> Vec<Error> {
        match Self::build(text, normalizer, &LoadOptions::default()) {
            Ok((_, v)) => v,
            Err(e) => vec![e],
        }
    }

    fn build(text: &str, normalizer: &Normalizer, options: &LoadOptions) -> Result<(Lexicon, Vec<Error>)> {
        let raw: RawLexicon = serde_json::from_str(text)
            .map_err(|e| Error::lexicon(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        let mut violations = Vec::new();
        let mut entries = Vec::with_capacity(raw.entries.len());
        let mut by_lemma = HashMap::new();
        let mut by_key = HashMap::new();

        for (ei, re) in raw.entries.into_iter().enumerate() {
            let loc = format!("entries[{ei}] ({})", re.lemma);
            let pos: PosTag = match re.pos.parse() {
                Ok(PosTag::Other) | Err(_) => {
                    violations.push(Error::lexicon(&loc, format!("invalid pos `{}`", re.pos)));
                    continue;
                }
                Ok(p) => p,
            };
            if re.lemma.is_empty() {
                violations.push(Error::lexicon(&loc, "empty lemma"));
            }
            if re.senses.is_empty() {
                violations.push(Error::lexicon(&loc, "entry has no senses"));
                continue;
            }
            let mut senses = Vec::with_capacity(re.senses.len());
            let mut ranks = BTreeSet::new();
            for (si, rs) in re.senses.iter().enumerate() {
                let sloc = format!("{loc} senses[{si}] ({})", rs.sense_key);
                if !ranks.insert(rs.rank) {
                    violations.push(Error::lexicon(&sloc, format!("duplicate rank {}", rs.rank)));
                }
                if rs.sense_key.is_empty() {
                    violations.push(Error::lexicon(&sloc, "empty sense key"));
                }
                if rs.count.is_some() && rs.rel_freq.is_some() {
                    violations.push(Error::lexicon(&sloc, "give either count or rel_freq, not both"));
                }
                let gloss = normalizer.lemmas(&rs.gloss);
                if gloss.is_empty() {
                    violations.push(Error::lexicon(&sloc, "gloss is empty after normalization"));
                }
                let examples = rs
                    .examples
                    .as_ref()
                    .map(|ex| ex.iter().map(|e| normalizer.lemmas(e)).collect());
                senses.push(SenseEntry {
                    sense_key: rs.sense_key.clone(),
                    rank: rs.rank,
                    gloss,
                    rel_freq: 0.0,
                    hyponym_keys: rs.hyponyms.clone(),
                    examples,
                });
            }
            let expected: BTreeSet<usize> = (1..=re.senses.len()).collect();
            if ranks.len() == re.senses.len() && ranks != expected {
                violations.push(Error::lexicon(&loc, "ranks must be 1..n without gaps"));
            }
            match relative_frequencies(&re.senses) {
                Ok(freqs) => {
                    for (s, f) in senses.iter_mut().zip(freqs) {
                        s.rel_freq = f;
                    }
                }
                Err(msg) => violations.push(Error::lexicon(&loc, msg)),
            }
            senses.sort_by_key(|s| s.rank);

            let idx = entries.len();
            if by_lemma.insert((re.lemma.clone(), pos), idx).is_some() {
                violations.push(Error::lexicon(&loc, "duplicate lemma and pos"));
            }
            for (si, s) in senses.iter().enumerate() {
                if by_key.insert(s.sense_key.clone(), (idx, si)).is_some() {
                    violations.push(Error::lexicon(&loc, format!("duplicate sense key `{}`", s.sense_key)));
                }
            }
            entries.push(LexiconEntry {
                lemma: re.lemma,
                pos,
                senses,
            });
        }

        for e in &entries {
            for s in &e.senses {
                for h in &s.hyponym_keys {
                    if !by_key.contains_key(h) {
                        violations.push(Error::lexicon(
                            format!("{} sense {}", e.lemma, s.sense_key),
                            format!("dangling hyponym key `{h}`"),
                        ));
                    }
                }
            }
        }

        let mut multiwords = MultiwordIndex::new();
        for (surface, bases) in &raw.inflections {
            for b in bases {
                multiwords.add_inflection(surface, b);
            }
        }
        for e in &entries {
            if !e.lemma.contains('_') {
                continue;
            }
            if let Some(allow) = &options.multiword_allow {
                if !allow.contains(&e.lemma) {
                    continue;
                }
            }
            let components = multiword_components(&e.lemma, normalizer);
            let keys = e.senses.iter().map(|s| s.sense_key.clone());
            // Expressions that collapse to a single content word are not
            // indexed; they still work as ordinary lemmas.
            if components.len() >= 2 {
                multiwords.insert(&e.lemma, components, keys)?;
            }
        }

        Ok((
            Lexicon {
                provenance: raw.provenance,
                entries,
                by_lemma,
                by_key,
                multiwords,
            },
            violations,
        ))
    }

    /// Serialize back to the JSON format with normalized glosses and
    /// relative frequencies.
    pub fn to_json(&self) -> String {
        let mut inflections: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (s, b) in self.multiwords.inflections() {
            inflections.entry(s.to_string()).or_default().push(b.to_string());
        }
        for v in inflections.values_mut() {
            v.sort();
        }
        let raw = RawLexicon {
            provenance: self.provenance.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| RawEntry {
                    lemma: e.lemma.clone(),
                    pos: e.pos.as_str().to_lowercase(),
                    senses: e
                        .senses
                        .iter()
                        .map(|s| RawSense {
                            sense_key: s.sense_key.clone(),
                            rank: s.rank,
                            gloss: s.gloss.join(" "),
                            count: None,
                            rel_freq: Some(s.rel_freq),
                            hyponyms: s.hyponym_keys.clone(),
                            examples: s.examples.as_ref().map(|ex| ex.iter().map(|e| e.join(" ")).collect()),
                        })
                        .collect(),
                })
                .collect(),
            inflections,
        };
        let mut out = serde_json::to_string_pretty(&raw).expect("lexicon serializes");
        out.push('\n');
        out
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn lookup(&self, lemma: &str, pos: PosTag) -> Option<&LexiconEntry> {
        self.by_lemma.get(&(lemma.to_string(), pos)).map(|&i| &self.entries[i])
    }

    pub fn sense(&self, key: &str) -> Option<&SenseEntry> {
        self.by_key.get(key).map(|&(e, s)| &self.entries[e].senses[s])
    }

    /// The entry owning a sense key.
    pub fn entry_of(&self, key: &str) -> Option<&LexiconEntry> {
        self.by_key.get(key).map(|&(e, _)| &self.entries[e])
    }

    pub fn multiwords(&self) -> &MultiwordIndex {
        &self.multiwords
    }

    pub fn multiwords_mut(&mut self) -> &mut MultiwordIndex {
        &mut self.multiwords
    }

    /// The sense's gloss followed by the glosses of hyponyms reachable in at
    /// most `depth` steps, breadth first, each hyponym once.
    pub fn expand_gloss(&self, sense: &SenseEntry, depth: usize) -> Vec<String> {
        let mut out = sense.gloss.clone();
        let mut seen: HashSet<&str> = HashSet::from([sense.sense_key.as_str()]);
        let mut queue: VecDeque<(&str, usize)> = sense.hyponym_keys.iter().map(|k| (k.as_str(), 1)).collect();
        while let Some((key, d)) = queue.pop_front() {
            if d > depth || !seen.insert(key) {
                continue;
            }
            let Some(h) = self.sense(key) else { continue };
            out.extend(h.gloss.iter().cloned());
            queue.extend(h.hyponym_keys.iter().map(|k| (k.as_str(), d + 1)));
        }
        out
    }
}

pub fn expand_gloss(sense: &SenseEntry, lexicon: &Lexicon, depth: usize) -> Vec<String> {
    lexicon.expand_gloss(sense, depth)
}

/// Components of a multiword lemma: lowercase, split on `_`, normalized
/// like any text (so stopwords drop out and inflections are reduced).
pub fn multiword_components(lemma: &str, normalizer: &Normalizer) -> Vec<String> {
    normalizer.lemmas(&lemma.replace('_', " ").to_lowercase())
}

fn relative_frequencies(senses: &[RawSense]) -> std::result::Result<Vec<f64>, String> {
    let n = senses.len();
    let given: Vec<Option<f64>> = senses.iter().map(|s| s.rel_freq).collect();
    if given.iter().any(Option::is_some) {
        if given.iter().any(Option::is_none) {
            return Err("rel_freq must be given for every sense or none".into());
        }
        let f: Vec<f64> = given.into_iter().map(|x| x.expect("checked")).collect();
        if f.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err("rel_freq must lie in [0, 1]".into());
        }
        let sum: f64 = f.iter().sum();
        if sum != 0.0 && (sum - 1.0).abs() > 1e-9 {
            return Err(format!("rel_freq values sum to {sum}, expected 1"));
        }
        return Ok(f);
    }
    let counts: Vec<u64> = senses.iter().map(|s| s.count.unwrap_or(0)).collect();
    let total: u64 = counts.iter().sum();
    if total == 0 {
        // No frequency information: a single sense is certain, several are
        // left at zero.
        return Ok(if n == 1 { vec![1.0] } else { vec![0.0; n] });
    }
    Ok(counts.iter().map(|&c| c as f64 / total as f64).collect())
}
