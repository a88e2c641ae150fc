//! The cascade language: one heuristic per line, `name key=value ...`,
//! `#` starts a comment.
//!
//! ```text
//! # all-words system
//! monosemous
//! statistical cutoff=0.1
//! mixed_filter
//! enriched
//! first_sense
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeuristicKind {
    Monosemous,
    Statistical,
    RelevanceFilter,
    Enriched,
    MixedFilter,
    FirstSense,
}

impl HeuristicKind {
    pub const ALL: [HeuristicKind; 6] = [
        HeuristicKind::Monosemous,
        HeuristicKind::Statistical,
        HeuristicKind::RelevanceFilter,
        HeuristicKind::Enriched,
        HeuristicKind::MixedFilter,
        HeuristicKind::FirstSense,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HeuristicKind::Monosemous => "monosemous",
            HeuristicKind::Statistical => "statistical",
            HeuristicKind::RelevanceFilter => "relevance_filter",
            HeuristicKind::Enriched => "enriched",
            HeuristicKind::MixedFilter => "mixed_filter",
            HeuristicKind::FirstSense => "first_sense",
        }
    }

    pub fn params(self) -> &'static [(&'static str, ParamKind)] {
        use ParamKind::*;
        const RADII_AND_SENSES: [(&str, ParamKind); 8] = [
            ("cutoff", Fraction),
            ("expand_depth", Count),
            ("max_senses", PositiveCount),
            ("pos_compat", Switch),
            ("radius_adj", Count),
            ("radius_adv", Count),
            ("radius_noun", Count),
            ("radius_verb", Count),
        ];
        const RELEVANCE: [(&str, ParamKind); 9] = [
            ("cutoff", Fraction),
            ("expand_depth", Count),
            ("max_senses", PositiveCount),
            ("pos_compat", Switch),
            ("radius_adj", Count),
            ("radius_adv", Count),
            ("radius_noun", Count),
            ("radius_verb", Count),
            ("supervised", Switch),
        ];
        match self {
            HeuristicKind::Monosemous | HeuristicKind::FirstSense => &[],
            HeuristicKind::Statistical => &[("cutoff", Fraction)],
            HeuristicKind::RelevanceFilter => &RELEVANCE,
            HeuristicKind::Enriched | HeuristicKind::MixedFilter => &RADII_AND_SENSES,
        }
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeuristicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HeuristicKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown heuristic `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// Real in the open interval (0, 1).
    Fraction,
    /// Nonnegative integer.
    Count,
    /// Integer of at least 1.
    PositiveCount,
    /// `on`/`off` (also `true`/`false`).
    Switch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Int(u64),
    Float(f64),
    Bool(bool),
}

impl ParamValue {
    fn parse(kind: ParamKind, text: &str) -> std::result::Result<Self, String> {
        match kind {
            ParamKind::Fraction => {
                let x: f64 = text.parse().map_err(|_| format!("`{text}` is not a number"))?;
                if x > 0.0 && x < 1.0 {
                    Ok(ParamValue::Float(x))
                } else {
                    Err(format!("{x} is outside (0, 1)"))
                }
            }
            ParamKind::Count | ParamKind::PositiveCount => {
                let n: u64 = text
                    .parse()
                    .map_err(|_| format!("`{text}` is not a nonnegative integer"))?;
                if kind == ParamKind::PositiveCount && n == 0 {
                    return Err("must be at least 1".into());
                }
                Ok(ParamValue::Int(n))
            }
            ParamKind::Switch => match text {
                "on" | "true" => Ok(ParamValue::Bool(true)),
                "off" | "false" => Ok(ParamValue::Bool(false)),
                _ => Err(format!("`{text}` is not on/off")),
            },
        }
    }

    pub fn as_f64(self) -> Option<f64> {
        match self {
            ParamValue::Float(x) => Some(x),
            ParamValue::Int(n) => Some(n as f64),
            ParamValue::Bool(_) => None,
        }
    }

    pub fn as_usize(self) -> Option<usize> {
        match self {
            ParamValue::Int(n) => usize::try_from(n).ok(),
            _ => None,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            ParamValue::Bool(b) => Some(b),
            _ => None,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(n) => write!(f, "{n}"),
            ParamValue::Float(x) => write!(f, "{x}"),
            ParamValue::Bool(true) => f.write_str("on"),
            ParamValue::Bool(false) => f.write_str("off"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeStep {
    pub heuristic: HeuristicKind,
    /// Parameters given explicitly; anything absent takes its default.
    pub params: BTreeMap<String, ParamValue>,
}

impl CascadeStep {
    pub fn new(heuristic: HeuristicKind) -> Self {
        CascadeStep {
            heuristic,
            params: BTreeMap::new(),
        }
    }

    pub fn get(&self, key: &str) -> Option<ParamValue> {
        self.params.get(key).copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeSpec {
    pub steps: Vec<CascadeStep>,
}

impl CascadeSpec {
    pub fn new(steps: Vec<CascadeStep>) -> Self {
        CascadeSpec { steps }
    }

    pub fn of(kinds: &[HeuristicKind]) -> Self {
        Self::new(kinds.iter().copied().map(CascadeStep::new).collect())
    }
}

pub fn parse_cascade(text: &str) -> Result<CascadeSpec> {
    let mut steps = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let loc = format!("line {}", i + 1);
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let name = words.next().expect("nonempty line");
        let heuristic: HeuristicKind = name
            .parse()
            .map_err(|_| Error::parse(&loc, format!("unknown heuristic `{name}`")))?;
        let schema = heuristic.params();
        let mut params = BTreeMap::new();
        for word in words {
            let (key, value) = word
                .split_once('=')
                .ok_or_else(|| Error::parse(&loc, format!("expected key=value, found `{word}`")))?;
            let kind = schema
                .iter()
                .find(|(k, _)| *k == key)
                .map(|&(_, kind)| kind)
                .ok_or_else(|| Error::parse(&loc, format!("`{name}` has no parameter `{key}`")))?;
            let value = ParamValue::parse(kind, value).map_err(|m| Error::parse(&loc, format!("{key}: {m}")))?;
            if params.insert(key.to_string(), value).is_some() {
                return Err(Error::parse(&loc, format!("parameter `{key}` given twice")));
            }
        }
        steps.push(CascadeStep { heuristic, params });
    }
    if steps.is_empty() {
        return Err(Error::parse("line 1", "cascade has no steps"));
    }
    Ok(CascadeSpec { steps })
}

impl fmt::Display for CascadeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            f.write_str(step.heuristic.name())?;
            for (k, v) in &step.params {
                write!(f, " {k}={v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
