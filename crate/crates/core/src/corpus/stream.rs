//! Token-stream files: `# key=value` header lines followed by
//! `position<TAB>lemma<TAB>label[<TAB>pos_tag]` records.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Label, PosTag, Token};
use crate::{Error, Result};

/// Metadata carried in the header of a token-stream file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StreamHeader {
    pub fields: BTreeMap<String, String>,
}

impl StreamHeader {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.fields.insert(key.to_string(), value.into());
    }
}

pub fn write_stream(header: &StreamHeader, tokens: &[Token]) -> String {
    let mut out = String::new();
    for (k, v) in &header.fields {
        let _ = writeln!(out, "# {k}={v}");
    }
    for t in tokens {
        let _ = write!(out, "{}\t{}\t{}", t.position, t.lemma, t.label);
        if let Some(pos) = t.pos_tag {
            let _ = write!(out, "\t{pos}");
        }
        out.push('\n');
    }
    out
}

/// Parse a token-stream file. Surfaces are not stored, so each token's
/// surface is set to its lemma.
pub fn read_stream(text: &str, source: &str) -> Result<(StreamHeader, Vec<Token>)> {
    let mut header = StreamHeader::default();
    let mut tokens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let loc = || format!("{source}:{}", i + 1);
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((k, v)) = meta.trim().split_once('=') {
                header.set(k.trim(), v.trim());
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if !(3..=4).contains(&cols.len()) {
            return Err(Error::parse(loc(), "expected position<TAB>lemma<TAB>label[<TAB>pos]"));
        }
        let position: usize = cols[0]
            .parse()
            .map_err(|_| Error::parse(loc(), "position is not an integer"))?;
        if position != tokens.len() {
            return Err(Error::parse(loc(), format!("expected position {}", tokens.len())));
        }
        if cols[1].is_empty() {
            return Err(Error::parse(loc(), "empty lemma"));
        }
        let label: Label = cols[2].parse().map_err(|e: Error| Error::parse(loc(), e.to_string()))?;
        let pos_tag = match cols.get(3) {
            Some(p) if !p.is_empty() => Some(p.parse::<PosTag>().map_err(|e| Error::parse(loc(), e.to_string()))?),
            _ => None,
        };
        tokens.push(Token {
            surface: cols[1].to_string(),
            lemma: cols[1].to_string(),
            label,
            position,
            pos_tag,
        });
    }
    Ok((header, tokens))
}
