//! The six heuristics and the parameters they run with.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::dsl::{CascadeStep, HeuristicKind};
use super::scoring::{context_frequencies, document_frequencies, score_enriched, score_relevance, ContextFilter};
use super::{DisambiguationInstance, HeuristicVerdict, Outcome, SenseVector};
use crate::corpus::PosTag;
use crate::lexicon::{Lexicon, LexiconEntry, SenseEntry};
use crate::relmatrix::RelevanceModel;

pub const DEFAULT_CUTOFF: f64 = 0.10;
pub const DEFAULT_MAX_SENSES: usize = 6;

/// Context radius per target POS; `None` means the whole context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PosRadii {
    pub noun: Option<usize>,
    pub verb: Option<usize>,
    pub adj: Option<usize>,
    pub adv: Option<usize>,
}

impl PosRadii {
    pub fn for_pos(&self, pos: PosTag) -> Option<usize> {
        match pos {
            PosTag::Noun => self.noun,
            PosTag::Verb => self.verb,
            PosTag::Adj => self.adj,
            PosTag::Adv => self.adv,
            PosTag::Other => None,
        }
    }

    fn override_with(mut self, step: &CascadeStep) -> Self {
        let get = |key: &str| step.get(key).and_then(|v| v.as_usize());
        if let Some(r) = get("radius_noun") {
            self.noun = Some(r);
        }
        if let Some(r) = get("radius_verb") {
            self.verb = Some(r);
        }
        if let Some(r) = get("radius_adj") {
            self.adj = Some(r);
        }
        if let Some(r) = get("radius_adv") {
            self.adv = Some(r);
        }
        self
    }
}

/// Values used for parameters a cascade step leaves out. The relevance
/// filter takes all of them; `enriched` only takes the cutoff (in mixed
/// mode) and otherwise scores the whole context.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicDefaults {
    pub cutoff: f64,
    pub max_senses: usize,
    pub expand_depth: usize,
    pub radii: PosRadii,
    pub pos_compat: bool,
    pub supervised: bool,
}

impl Default for HeuristicDefaults {
    fn default() -> Self {
        HeuristicDefaults {
            cutoff: DEFAULT_CUTOFF,
            max_senses: DEFAULT_MAX_SENSES,
            expand_depth: crate::lexicon::DEFAULT_EXPAND_DEPTH,
            radii: PosRadii {
                noun: Some(25),
                verb: Some(25),
                adj: Some(5),
                adv: Some(25),
            },
            pos_compat: true,
            supervised: false,
        }
    }
}

/// Fully resolved parameters of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicParams {
    pub cutoff: Option<f64>,
    pub max_senses: Option<usize>,
    pub radii: PosRadii,
    pub pos_compat: bool,
    pub expand_depth: usize,
    pub supervised: bool,
}

impl HeuristicParams {
    pub fn resolve(step: &CascadeStep, defaults: &HeuristicDefaults) -> Self {
        let base = match step.heuristic {
            HeuristicKind::RelevanceFilter => HeuristicParams {
                cutoff: Some(defaults.cutoff),
                max_senses: Some(defaults.max_senses),
                radii: defaults.radii,
                pos_compat: defaults.pos_compat,
                expand_depth: defaults.expand_depth,
                supervised: defaults.supervised,
            },
            HeuristicKind::Statistical | HeuristicKind::MixedFilter => HeuristicParams {
                cutoff: Some(defaults.cutoff),
                ..HeuristicParams::plain()
            },
            _ => HeuristicParams::plain(),
        };
        HeuristicParams {
            cutoff: step.get("cutoff").and_then(|v| v.as_f64()).or(base.cutoff),
            max_senses: step.get("max_senses").and_then(|v| v.as_usize()).or(base.max_senses),
            radii: base.radii.override_with(step),
            pos_compat: step
                .get("pos_compat")
                .and_then(|v| v.as_bool())
                .unwrap_or(base.pos_compat),
            expand_depth: step
                .get("expand_depth")
                .and_then(|v| v.as_usize())
                .unwrap_or(base.expand_depth),
            supervised: step
                .get("supervised")
                .and_then(|v| v.as_bool())
                .unwrap_or(base.supervised),
        }
    }

    fn plain() -> Self {
        HeuristicParams {
            cutoff: None,
            max_senses: None,
            radii: PosRadii::default(),
            pos_compat: false,
            expand_depth: 0,
            supervised: false,
        }
    }

    fn context_filter(&self, pos: PosTag) -> ContextFilter {
        ContextFilter {
            radius: self.radii.for_pos(pos),
            pos_compat: self.pos_compat,
        }
    }
}

/// Everything a heuristic reads.
#[derive(Clone, Copy)]
pub struct Resources<'a> {
    pub lexicon: &'a Lexicon,
    pub model: &'a RelevanceModel,
    pub cache: &'a EnrichmentCache,
}

type CacheKey = (String, String, usize, bool);

/// Enriched sense vectors keyed by (sense key, matrix hash, expansion
/// depth, supervised). Concurrent inserts of the same key are harmless:
/// both writers computed the same vector.
#[derive(Debug, Default)]
pub struct EnrichmentCache {
    map: RwLock<HashMap<CacheKey, Arc<SenseVector>>>,
}

impl EnrichmentCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get_or_compute(&self, key: CacheKey, compute: impl FnOnce() -> SenseVector) -> Arc<SenseVector> {
        if let Some(v) = self.map.read().expect("cache lock").get(&key) {
            return Arc::clone(v);
        }
        let v = Arc::new(compute());
        Arc::clone(self.map.write().expect("cache lock").entry(key).or_insert(v))
    }
}

/// `tf(gloss) + (1/m) * sum of tf(example_i)`; just `tf(gloss)` without
/// examples.
pub fn build_supervised_vectors(entry: &SenseEntry) -> SenseVector {
    supervised_vector(&entry.gloss, entry)
}

fn supervised_vector(gloss: &[String], entry: &SenseEntry) -> SenseVector {
    let mut v = SenseVector::term_frequencies(gloss);
    if let Some(examples) = entry.examples.as_ref().filter(|e| !e.is_empty()) {
        let share = 1.0 / examples.len() as f64;
        for ex in examples {
            v.add_scaled(&SenseVector::term_frequencies(ex), share);
        }
    }
    v
}

/// The characteristic vector of a sense: its gloss expanded through
/// `depth` hyponym levels, plus the examples when `supervised`.
pub fn sense_vector(lexicon: &Lexicon, sense: &SenseEntry, depth: usize, supervised: bool) -> SenseVector {
    let gloss = lexicon.expand_gloss(sense, depth);
    if supervised {
        supervised_vector(&gloss, sense)
    } else {
        SenseVector::term_frequencies(&gloss)
    }
}

fn answer(kind: HeuristicKind, sense_key: &str, score: f64) -> HeuristicVerdict {
    HeuristicVerdict {
        heuristic: kind.name().to_string(),
        outcome: Outcome::Answer {
            sense_key: sense_key.to_string(),
            score,
        },
        note: None,
    }
}

fn abstain(kind: HeuristicKind, note: impl Into<String>) -> HeuristicVerdict {
    HeuristicVerdict {
        heuristic: kind.name().to_string(),
        outcome: Outcome::Abstain,
        note: Some(note.into()),
    }
}

const UNKNOWN_LEMMA: &str = "unknown lemma";

/// Senses considered by the scoring heuristics: the first `max_senses` by
/// rank, minus those under the cutoff. The cutoff is skipped when the
/// lexicon has no frequency information for the lemma.
fn candidates(entry: &LexiconEntry, max_senses: Option<usize>, cutoff: Option<f64>) -> Vec<&SenseEntry> {
    let cap = max_senses.unwrap_or(usize::MAX);
    let has_freq = entry.senses.iter().any(|s| s.rel_freq > 0.0);
    entry
        .senses
        .iter()
        .take(cap)
        .filter(|s| match cutoff {
            Some(c) if has_freq => s.rel_freq >= c,
            _ => true,
        })
        .collect()
}

/// Best candidate; ties go to the lower rank, a best score of 0 abstains.
fn argmax(kind: HeuristicKind, scored: Vec<(&SenseEntry, f64)>) -> HeuristicVerdict {
    let mut best: Option<(&SenseEntry, f64)> = None;
    for (s, score) in scored {
        if best.is_none_or(|(b, bs)| score > bs || (score == bs && s.rank < b.rank)) {
            best = Some((s, score));
        }
    }
    match best {
        Some((s, score)) if score > 0.0 => answer(kind, &s.sense_key, score),
        Some(_) => abstain(kind, "no overlap"),
        None => abstain(kind, "no candidate senses"),
    }
}

pub fn h_monosemous(inst: &DisambiguationInstance, lexicon: &Lexicon) -> HeuristicVerdict {
    let kind = HeuristicKind::Monosemous;
    if !lexicon.multiwords().is_empty() {
        let spans = lexicon.multiwords().detect(&inst.context);
        if let Some(m) = spans.iter().find(|m| m.covers(inst.target_index)) {
            if m.sense_keys.len() == 1 {
                let key = m.sense_keys.iter().next().expect("one key");
                return answer(kind, key, 1.0);
            }
        }
    }
    match lexicon.lookup(&inst.lemma, inst.pos) {
        None => abstain(kind, UNKNOWN_LEMMA),
        Some(e) if e.senses.len() == 1 => answer(kind, &e.senses[0].sense_key, 1.0),
        Some(e) => abstain(kind, format!("{} senses", e.senses.len())),
    }
}

pub fn h_statistical(inst: &DisambiguationInstance, lexicon: &Lexicon, cutoff: f64) -> HeuristicVerdict {
    let kind = HeuristicKind::Statistical;
    let Some(entry) = lexicon.lookup(&inst.lemma, inst.pos) else {
        return abstain(kind, UNKNOWN_LEMMA);
    };
    let survivors: Vec<&SenseEntry> = entry.senses.iter().filter(|s| s.rel_freq >= cutoff).collect();
    match survivors.as_slice() {
        [only] => answer(kind, &only.sense_key, only.rel_freq),
        _ => abstain(kind, format!("{} senses at or above cutoff", survivors.len())),
    }
}

pub fn h_relevance_filter(
    inst: &DisambiguationInstance,
    res: Resources<'_>,
    params: &HeuristicParams,
) -> HeuristicVerdict {
    let kind = HeuristicKind::RelevanceFilter;
    let Some(entry) = res.lexicon.lookup(&inst.lemma, inst.pos) else {
        return abstain(kind, UNKNOWN_LEMMA);
    };
    let context = context_frequencies(inst, params.context_filter(inst.pos));
    let vectors: Vec<SenseVector> = entry
        .senses
        .iter()
        .map(|s| sense_vector(res.lexicon, s, params.expand_depth, params.supervised))
        .collect();
    let df = document_frequencies(&vectors);
    let n = vectors.len();
    let scored = candidates(entry, params.max_senses, params.cutoff)
        .into_iter()
        .map(|s| {
            let v = &vectors[s.rank - 1];
            (s, score_relevance(&context, &inst.lemma, v, &df, n, res.model))
        })
        .collect();
    argmax(kind, scored)
}

/// Matrix-enriched overlap; `kind` is `Enriched` or `MixedFilter`, the
/// latter applying the frequency cutoff to the candidates.
pub fn h_enriched(
    inst: &DisambiguationInstance,
    res: Resources<'_>,
    params: &HeuristicParams,
    kind: HeuristicKind,
) -> HeuristicVerdict {
    let Some(entry) = res.lexicon.lookup(&inst.lemma, inst.pos) else {
        return abstain(kind, UNKNOWN_LEMMA);
    };
    let context = context_frequencies(inst, params.context_filter(inst.pos));
    let cutoff = if kind == HeuristicKind::MixedFilter {
        params.cutoff
    } else {
        None
    };
    let scored = candidates(entry, params.max_senses, cutoff)
        .into_iter()
        .map(|s| {
            let key = (
                s.sense_key.clone(),
                res.model.content_hash().to_string(),
                params.expand_depth,
                params.supervised,
            );
            let enriched = res.cache.get_or_compute(key, || {
                sense_vector(res.lexicon, s, params.expand_depth, params.supervised).enrich(res.model)
            });
            (s, score_enriched(&context, &enriched))
        })
        .collect();
    argmax(kind, scored)
}

pub fn h_first_sense(inst: &DisambiguationInstance, lexicon: &Lexicon) -> HeuristicVerdict {
    let kind = HeuristicKind::FirstSense;
    match lexicon.lookup(&inst.lemma, inst.pos) {
        Some(e) => answer(kind, &e.first_sense().sense_key, 1.0),
        None => abstain(kind, UNKNOWN_LEMMA),
    }
}

/// A cascade step with its parameters resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Heuristic {
    pub kind: HeuristicKind,
    pub params: HeuristicParams,
}

impl Heuristic {
    pub fn compile(step: &CascadeStep, defaults: &HeuristicDefaults) -> Self {
        Heuristic {
            kind: step.heuristic,
            params: HeuristicParams::resolve(step, defaults),
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn evaluate(&self, inst: &DisambiguationInstance, res: Resources<'_>) -> HeuristicVerdict {
        match self.kind {
            HeuristicKind::Monosemous => h_monosemous(inst, res.lexicon),
            HeuristicKind::Statistical => {
                h_statistical(inst, res.lexicon, self.params.cutoff.unwrap_or(DEFAULT_CUTOFF))
            }
            HeuristicKind::RelevanceFilter => h_relevance_filter(inst, res, &self.params),
            HeuristicKind::Enriched | HeuristicKind::MixedFilter => h_enriched(inst, res, &self.params, self.kind),
            HeuristicKind::FirstSense => h_first_sense(inst, res.lexicon),
        }
    }
}
