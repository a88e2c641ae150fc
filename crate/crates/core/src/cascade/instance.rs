//! Disambiguation instances and their JSON-lines encoding.
//!
//! One JSON object per line:
//!
//! ```json
//! {"id": "d001.s01.t03", "lemma": "bank", "pos": "noun", "target": 2,
//!  "tokens": ["river", {"lemma": "flow", "pos": "VERB"}, "bank", "fish"]}
//! ```
//!
//! A token is either a bare lemma or an object with `lemma` and optional
//! `surface`, `pos` and `label`. An optional first line
//! `{"header": {"stopword_hash": "..."}}` records how the tokens were
//! normalized.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Label, PosTag, Token};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DisambiguationInstance {
    pub instance_id: String,
    pub lemma: String,
    pub pos: PosTag,
    pub context: Vec<Token>,
    pub target_index: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawToken {
    Lemma(String),
    Full {
        lemma: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        surface: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pos: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    id: String,
    lemma: String,
    pos: String,
    tokens: Vec<RawToken>,
    target: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawHeaderLine {
    header: BTreeMap<String, String>,
}

/// Metadata from the optional header line.
pub type InstanceHeader = BTreeMap<String, String>;

impl DisambiguationInstance {
    pub fn target(&self) -> &Token {
        &self.context[self.target_index]
    }

    fn from_raw(raw: RawInstance, loc: &str) -> Result<Self> {
        let pos: PosTag = raw.pos.parse().map_err(|e: Error| Error::parse(loc, e.to_string()))?;
        let mut context = Vec::with_capacity(raw.tokens.len());
        for (i, t) in raw.tokens.into_iter().enumerate() {
            let token = match t {
                RawToken::Lemma(lemma) => Token::word(lemma, i),
                RawToken::Full {
                    lemma,
                    surface,
                    pos,
                    label,
                } => Token {
                    surface: surface.unwrap_or_else(|| lemma.clone()),
                    label: match label {
                        Some(l) => l.parse().map_err(|e: Error| Error::parse(loc, e.to_string()))?,
                        None => Label::Word,
                    },
                    lemma,
                    position: i,
                    pos_tag: match pos {
                        Some(p) => Some(p.parse().map_err(|e: Error| Error::parse(loc, e.to_string()))?),
                        None => None,
                    },
                },
            };
            if token.lemma.is_empty() {
                return Err(Error::parse(loc, format!("token {i} has an empty lemma")));
            }
            context.push(token);
        }
        if raw.target >= context.len() {
            return Err(Error::parse(
                loc,
                format!(
                    "target index {} outside context of {} tokens",
                    raw.target,
                    context.len()
                ),
            ));
        }
        Ok(DisambiguationInstance {
            instance_id: raw.id,
            lemma: raw.lemma,
            pos,
            context,
            target_index: raw.target,
        })
    }

    fn to_raw(&self) -> RawInstance {
        RawInstance {
            id: self.instance_id.clone(),
            lemma: self.lemma.clone(),
            pos: self.pos.as_str().to_lowercase(),
            target: self.target_index,
            tokens: self
                .context
                .iter()
                .map(|t| {
                    if t.surface == t.lemma && t.pos_tag.is_none() && t.label == Label::Word {
                        RawToken::Lemma(t.lemma.clone())
                    } else {
                        RawToken::Full {
                            lemma: t.lemma.clone(),
                            surface: (t.surface != t.lemma).then(|| t.surface.clone()),
                            pos: t.pos_tag.map(|p| p.as_str().to_string()),
                            label: (t.label != Label::Word).then(|| t.label.as_str().to_string()),
                        }
                    }
                })
                .collect(),
        }
    }
}

pub fn parse_instances(text: &str, source: &str) -> Result<(InstanceHeader, Vec<DisambiguationInstance>)> {
    let mut header = InstanceHeader::new();
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let loc = format!("{source}:{}", i + 1);
        if out.is_empty() && header.is_empty() {
            if let Ok(h) = serde_json::from_str::<RawHeaderLine>(line) {
                header = h.header;
                continue;
            }
        }
        let raw: RawInstance = serde_json::from_str(line).map_err(|e| Error::parse(&loc, e.to_string()))?;
        out.push(DisambiguationInstance::from_raw(raw, &loc)?);
    }
    Ok((header, out))
}

pub fn write_instances(header: &InstanceHeader, instances: &[DisambiguationInstance]) -> String {
    let mut out = String::new();
    if !header.is_empty() {
        let line = RawHeaderLine { header: header.clone() };
        out.push_str(&serde_json::to_string(&line).expect("header serializes"));
        out.push('\n');
    }
    for inst in instances {
        out.push_str(&serde_json::to_string(&inst.to_raw()).expect("instance serializes"));
        out.push('\n');
    }
    out
}
