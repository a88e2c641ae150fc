//! Corpus normalization: boilerplate stripping, tokenization,
//! lemmatization, stopword removal and NUMBER / PROPER_NOUN labeling.

mod lemmatize;
mod pipeline;
mod stopwords;
pub mod stream;
mod tokenize;

use std::collections::HashSet;
use std::fmt;
use std::ops::AddAssign;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use lemmatize::{IdentityLemmatizer, Lemmatizer, SuffixLemmatizer};
pub use pipeline::{normalize_corpus, read_corpus, NormalizedDocument, PipelineOptions};
pub use stopwords::StopwordList;
pub use tokenize::{is_number, raw_tokens, RawToken};

use crate::Error;

pub const NUMBER_LABEL: &str = "NUMBER";
pub const PROPER_NOUN_LABEL: &str = "PROPER_NOUN";
pub const DEFAULT_ENGLISH_THRESHOLD: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub doc_id: String,
    pub text: String,
}

impl RawDocument {
    pub fn new(doc_id: impl Into<String>, text: impl Into<String>) -> Self {
        RawDocument {
            doc_id: doc_id.into(),
            text: text.into(),
        }
    }

    /// Decode bytes as UTF-8, skipping invalid sequences.
    ///
    /// Returns the document and the number of invalid sequences dropped.
    pub fn from_bytes(doc_id: impl Into<String>, bytes: &[u8]) -> (Self, u64) {
        let mut text = String::with_capacity(bytes.len());
        let mut skipped = 0;
        for chunk in bytes.utf8_chunks() {
            text.push_str(chunk.valid());
            if !chunk.invalid().is_empty() {
                skipped += 1;
            }
        }
        (RawDocument::new(doc_id, text), skipped)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    Word,
    Number,
    ProperNoun,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Word => "WORD",
            Label::Number => "NUMBER",
            Label::ProperNoun => "PROPER_NOUN",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "WORD" => Ok(Label::Word),
            "NUMBER" => Ok(Label::Number),
            "PROPER_NOUN" => Ok(Label::ProperNoun),
            _ => Err(Error::Invalid(format!("unknown token label `{s}`"))),
        }
    }
}

/// Part-of-speech tag carried by test data. Never inferred from raw text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Other,
}

impl PosTag {
    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Other => "OTHER",
        }
    }

    /// Whether two words can stand in an intra-phrase relation.
    pub fn compatible(self, other: PosTag) -> bool {
        use PosTag::*;
        matches!(
            (self, other),
            (Noun, Noun)
                | (Noun, Verb)
                | (Verb, Noun)
                | (Noun, Adj)
                | (Adj, Noun)
                | (Verb, Verb)
                | (Verb, Adv)
                | (Adv, Verb)
        )
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = Error;

    /// Accepts the canonical names, lowercase variants and the single-letter
    /// WordNet codes (`n`, `v`, `a`, `s`, `r`).
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_uppercase().as_str() {
            "NOUN" | "N" => Ok(PosTag::Noun),
            "VERB" | "V" => Ok(PosTag::Verb),
            "ADJ" | "A" | "S" | "ADJECTIVE" => Ok(PosTag::Adj),
            "ADV" | "R" | "ADVERB" => Ok(PosTag::Adv),
            "OTHER" => Ok(PosTag::Other),
            _ => Err(Error::Invalid(format!("unknown part of speech `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub label: Label,
    pub position: usize,
    pub pos_tag: Option<PosTag>,
}

impl Token {
    pub fn word(lemma: impl Into<String>, position: usize) -> Self {
        let lemma = lemma.into();
        Token {
            surface: lemma.clone(),
            lemma,
            label: Label::Word,
            position,
            pos_tag: None,
        }
    }
}

/// Counters gathered while normalizing; merged across documents.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub documents_kept: u64,
    pub documents_dropped: u64,
    pub tokens_emitted: u64,
    pub invalid_sequences_skipped: u64,
}

impl AddAssign for Diagnostics {
    fn add_assign(&mut self, rhs: Self) {
        self.documents_kept += rhs.documents_kept;
        self.documents_dropped += rhs.documents_dropped;
        self.tokens_emitted += rhs.tokens_emitted;
        self.invalid_sequences_skipped += rhs.invalid_sequences_skipped;
    }
}

/// Line markers delimiting the body of a document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoilerplateMarkers {
    pub start: Option<String>,
    pub end: Option<String>,
}

impl Default for BoilerplateMarkers {
    fn default() -> Self {
        BoilerplateMarkers {
            start: Some("*** START OF".to_string()),
            end: Some("*** END OF".to_string()),
        }
    }
}

/// Drop the header up to and including the first line containing the start
/// marker, and everything from the first later line containing the end marker.
pub fn strip_boilerplate(doc: &RawDocument, markers: &BoilerplateMarkers) -> RawDocument {
    let lines: Vec<&str> = doc.text.split_inclusive('\n').collect();
    let mut from = 0;
    if let Some(start) = markers.start.as_deref().filter(|m| !m.is_empty()) {
        if let Some(i) = lines.iter().position(|l| l.contains(start)) {
            from = i + 1;
        }
    }
    let mut to = lines.len();
    if let Some(end) = markers.end.as_deref().filter(|m| !m.is_empty()) {
        if let Some(i) = lines[from..].iter().position(|l| l.contains(end)) {
            to = from + i;
        }
    }
    RawDocument::new(doc.doc_id.clone(), lines[from..to].concat())
}

/// Stopword-ratio language check: the share of whitespace-delimited words
/// found in `stopwords` must reach `threshold`.
pub fn is_english(doc: &RawDocument, stopwords: &StopwordList, threshold: f64) -> bool {
    let mut total = 0usize;
    let mut hits = 0usize;
    for word in doc.text.split_whitespace() {
        total += 1;
        let w = word
            .trim_matches(|c: char| !c.is_alphanumeric() && c != '\'')
            .to_lowercase();
        if stopwords.contains(&w) {
            hits += 1;
        }
    }
    total > 0 && hits as f64 / total as f64 >= threshold
}

/// Tokenizer + labeler + lemmatizer bound to a stopword list.
#[derive(Clone)]
pub struct Normalizer {
    stopwords: StopwordList,
    lemmatizer: Arc<dyn Lemmatizer>,
}

impl fmt::Debug for Normalizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Normalizer")
            .field("stopwords", &self.stopwords.hash())
            .field("lemmatizer", &self.lemmatizer.id())
            .finish()
    }
}

impl Normalizer {
    pub fn new(stopwords: StopwordList, lemmatizer: Arc<dyn Lemmatizer>) -> Self {
        Normalizer { stopwords, lemmatizer }
    }

    /// English stopwords with the shipped suffix lemmatizer.
    pub fn english() -> Self {
        Self::new(StopwordList::english(), Arc::new(SuffixLemmatizer::english()))
    }

    pub fn stopwords(&self) -> &StopwordList {
        &self.stopwords
    }

    pub fn lemmatizer(&self) -> &dyn Lemmatizer {
        self.lemmatizer.as_ref()
    }

    /// First pass of the proper-noun rule: every word form seen starting
    /// with a lowercase letter.
    pub fn lowercase_forms(text: &str) -> HashSet<String> {
        raw_tokens(text)
            .into_iter()
            .filter(|t| t.text.chars().next().is_some_and(char::is_lowercase))
            .map(|t| normalize_apostrophes(t.text))
            .collect()
    }

    /// Normalize a single document, using the document itself for the
    /// proper-noun first pass.
    pub fn normalize(&self, doc: &RawDocument) -> Vec<Token> {
        let seen = Self::lowercase_forms(&doc.text);
        self.normalize_with(doc, &seen)
    }

    /// Second pass: label, lemmatize and filter, given the lowercase forms
    /// collected over the whole corpus run.
    pub fn normalize_with(&self, doc: &RawDocument, lowercase_seen: &HashSet<String>) -> Vec<Token> {
        let mut out = Vec::new();
        for raw in raw_tokens(&doc.text) {
            let surface = normalize_apostrophes(raw.text);
            let (label, lemma) = if surface == NUMBER_LABEL || is_number(&surface) {
                (Label::Number, NUMBER_LABEL.to_string())
            } else if surface == PROPER_NOUN_LABEL {
                (Label::ProperNoun, PROPER_NOUN_LABEL.to_string())
            } else {
                let lower = surface.to_lowercase();
                if self.stopwords.contains(&lower) {
                    continue;
                }
                let capitalized = surface.chars().next().is_some_and(char::is_uppercase);
                if capitalized && (!raw.sentence_initial || !lowercase_seen.contains(&lower)) {
                    (Label::ProperNoun, PROPER_NOUN_LABEL.to_string())
                } else {
                    let mut lemma = self.lemmatizer.lemmatize(&lower);
                    if !lemma.chars().last().is_some_and(char::is_alphanumeric) {
                        lemma = lower;
                    }
                    if self.stopwords.contains(&lemma) {
                        continue;
                    }
                    (Label::Word, lemma)
                }
            };
            let position = out.len();
            out.push(Token {
                surface,
                lemma,
                label,
                position,
                pos_tag: None,
            });
        }
        out
    }

    /// Normalize free text (a gloss or an example) to its lemma sequence.
    pub fn lemmas(&self, text: &str) -> Vec<String> {
        self.normalize(&RawDocument::new("", text))
            .into_iter()
            .map(|t| t.lemma)
            .collect()
    }
}

fn normalize_apostrophes(s: &str) -> String {
    s.replace('\u{2019}', "'")
}

/// Join lemmas back into text.
pub fn detokenize(tokens: &[Token]) -> String {
    tokens.iter().map(|t| t.lemma.as_str()).collect::<Vec<_>>().join(" ")
}
