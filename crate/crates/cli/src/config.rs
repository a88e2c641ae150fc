//! TOML run configuration. Every key is optional; command-line flags take
//! precedence over the file.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub matrix: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub cascade: Option<PathBuf>,
    pub instances: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub answers: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,

    pub vocab_size: Option<usize>,
    pub radius: Option<usize>,
    pub threshold: Option<f64>,

    pub cutoff: Option<f64>,
    pub max_senses: Option<usize>,
    pub expand_depth: Option<usize>,
    pub radius_noun: Option<usize>,
    pub radius_verb: Option<usize>,
    pub radius_adj: Option<usize>,
    pub radius_adv: Option<usize>,
    pub pos_compat: Option<bool>,
    pub supervised: Option<bool>,

    pub word_a: Option<String>,
    pub word_b: Option<String>,
    pub holdout: Option<f64>,
    pub gloss_size: Option<usize>,

    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
