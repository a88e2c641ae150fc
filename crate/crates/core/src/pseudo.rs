//! Pseudoword benchmarks.
//!
//! Two real words are conflated into one artificial ambiguous token
//! `a_b`. The corpus is cut into fixed-size segments, a seeded share of
//! which is held out; every occurrence of either word in the held-out
//! segments becomes an instance whose gold answer is the word it
//! replaced. A two-sense lexicon entry is synthesized from the training
//! segments: each sense's gloss is the list of words most strongly
//! associated with its source word.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::cascade::DisambiguationInstance;
use crate::corpus::{Label, PosTag, Token};
use crate::eval::GoldStandard;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PseudowordConfig {
    pub word_a: String,
    pub word_b: String,
    /// Share of segments held out, in (0, 1).
    pub holdout: f64,
    pub seed: u64,
    /// Tokens per segment.
    pub segment_len: usize,
    /// Window radius used to find gloss words.
    pub window_radius: usize,
    /// Tokens kept on each side of a target in an instance.
    pub context_radius: usize,
    /// Gloss length per sense.
    pub gloss_size: usize,
    /// Least number of shared windows for a gloss word.
    pub min_pair: u64,
    /// Least raw relevance ratio for a gloss word.
    pub min_ratio: f64,
    /// Least number of training occurrences of each source word.
    pub min_occurrences: u64,
}

impl PseudowordConfig {
    pub fn new(word_a: impl Into<String>, word_b: impl Into<String>) -> Self {
        PseudowordConfig {
            word_a: word_a.into(),
            word_b: word_b.into(),
            holdout: 0.5,
            seed: 0,
            segment_len: 1000,
            window_radius: crate::relmatrix::DEFAULT_RADIUS,
            context_radius: crate::relmatrix::DEFAULT_RADIUS,
            gloss_size: 100,
            min_pair: 3,
            min_ratio: crate::relmatrix::DEFAULT_THRESHOLD,
            min_occurrences: 10,
        }
    }

    pub fn pseudoword(&self) -> String {
        format!("{}_{}", self.word_a, self.word_b)
    }
}

#[derive(Debug, Clone)]
pub struct PseudowordTask {
    pub pseudoword: String,
    /// Training segments with both words conflated; build the matrix here.
    pub training: Vec<Vec<Token>>,
    pub instances: Vec<DisambiguationInstance>,
    pub gold: GoldStandard,
    /// Lexicon JSON with the single synthesized entry.
    pub lexicon_json: String,
    /// Training occurrences of `word_a` and `word_b`.
    pub training_counts: [u64; 2],
    pub glosses: [Vec<String>; 2],
}

fn segments(streams: &[Vec<Token>], len: usize) -> Vec<Vec<Token>> {
    let mut out = Vec::new();
    for s in streams {
        for chunk in s.chunks(len) {
            out.push(
                chunk
                    .iter()
                    .enumerate()
                    .map(|(i, t)| Token {
                        position: i,
                        ..t.clone()
                    })
                    .collect(),
            );
        }
    }
    out
}

/// Window centers (per segment) whose window contains each word, as
/// sorted disjoint intervals `[start, end)`.
type Coverage<'a> = HashMap<&'a str, Vec<(usize, usize, usize)>>;

fn coverage(segments: &[Vec<Token>], radius: usize) -> (Coverage<'_>, u64) {
    let mut cov: Coverage<'_> = HashMap::new();
    let mut total = 0u64;
    for (si, seg) in segments.iter().enumerate() {
        let n = seg.len();
        total += n as u64;
        for (p, t) in seg.iter().enumerate() {
            let lo = p.saturating_sub(radius);
            let hi = (p + radius + 1).min(n);
            let spans = cov.entry(t.lemma.as_str()).or_default();
            match spans.last_mut() {
                Some((s, _, end)) if *s == si && *end >= lo => *end = hi,
                _ => spans.push((si, lo, hi)),
            }
        }
    }
    (cov, total)
}

fn covered(spans: &[(usize, usize, usize)]) -> u64 {
    spans.iter().map(|&(_, a, b)| (b - a) as u64).sum()
}

fn intersection(x: &[(usize, usize, usize)], y: &[(usize, usize, usize)]) -> u64 {
    let (mut i, mut j, mut n) = (0, 0, 0u64);
    while i < x.len() && j < y.len() {
        let (sa, a0, a1) = x[i];
        let (sb, b0, b1) = y[j];
        if sa != sb {
            if sa < sb {
                i += 1;
            } else {
                j += 1;
            }
            continue;
        }
        let lo = a0.max(b0);
        let hi = a1.min(b1);
        if hi > lo {
            n += (hi - lo) as u64;
        }
        if a1 < b1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    n
}

fn union(x: &[(usize, usize, usize)], y: &[(usize, usize, usize)]) -> Vec<(usize, usize, usize)> {
    let mut all: Vec<(usize, usize, usize)> = x.iter().chain(y).copied().collect();
    all.sort_unstable();
    let mut out: Vec<(usize, usize, usize)> = Vec::with_capacity(all.len());
    for (s, a, b) in all {
        match out.last_mut() {
            Some((ls, _, le)) if *ls == s && *le >= a => *le = (*le).max(b),
            _ => out.push((s, a, b)),
        }
    }
    out
}

/// Words most often seen near `source`, among those still relevant to the
/// conflated word: `pair(source, w) * T / (occ(pseudo) * occ(w))` must
/// reach `min_ratio`, where `occ(pseudo)` counts windows containing either
/// source word. Ties go by word.
fn gloss_words(
    cov: &Coverage<'_>,
    total: u64,
    source: &str,
    pseudo_spans: &[(usize, usize, usize)],
    exclude: &[&str],
    cfg: &PseudowordConfig,
) -> Vec<String> {
    let Some(src) = cov.get(source) else { return Vec::new() };
    let occ_p = covered(pseudo_spans) as f64;
    let mut scored: Vec<(u64, &str)> = cov
        .iter()
        .filter(|(w, _)| !exclude.contains(w))
        .filter_map(|(w, spans)| {
            let pair = intersection(src, spans);
            let ratio = pair as f64 * total as f64 / (occ_p * covered(spans) as f64);
            (pair >= cfg.min_pair && ratio >= cfg.min_ratio).then_some((pair, *w))
        })
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    scored
        .into_iter()
        .take(cfg.gloss_size)
        .map(|(_, w)| w.to_string())
        .collect()
}

/// Build the benchmark from normalized token streams.
pub fn generate(streams: &[Vec<Token>], cfg: &PseudowordConfig) -> Result<PseudowordTask> {
    if !(cfg.holdout > 0.0 && cfg.holdout < 1.0) {
        return Err(Error::Invalid(format!("holdout {} is outside (0, 1)", cfg.holdout)));
    }
    if cfg.word_a == cfg.word_b {
        return Err(Error::Invalid("the two words must differ".into()));
    }
    if cfg.segment_len == 0 {
        return Err(Error::Invalid("segment length must be positive".into()));
    }
    let pseudo = cfg.pseudoword();
    let words = [cfg.word_a.as_str(), cfg.word_b.as_str()];

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut train = Vec::new();
    let mut held = Vec::new();
    for seg in segments(streams, cfg.segment_len) {
        if rng.gen_bool(cfg.holdout) {
            held.push(seg);
        } else {
            train.push(seg);
        }
    }

    let count = |segs: &[Vec<Token>], w: &str| segs.iter().flatten().filter(|t| t.lemma == w).count() as u64;
    let training_counts = [count(&train, words[0]), count(&train, words[1])];
    for (w, &n) in words.iter().zip(&training_counts) {
        if n < cfg.min_occurrences {
            return Err(Error::Invalid(format!(
                "`{w}` occurs {n} times in the training slice; at least {} needed",
                cfg.min_occurrences
            )));
        }
    }

    let (cov, total) = coverage(&train, cfg.window_radius);
    let mut exclude: Vec<&str> = words.to_vec();
    exclude.extend([crate::corpus::NUMBER_LABEL, crate::corpus::PROPER_NOUN_LABEL]);
    let empty = Vec::new();
    let pseudo_spans = union(cov.get(words[0]).unwrap_or(&empty), cov.get(words[1]).unwrap_or(&empty));
    let glosses = [
        gloss_words(&cov, total, words[0], &pseudo_spans, &exclude, cfg),
        gloss_words(&cov, total, words[1], &pseudo_spans, &exclude, cfg),
    ];
    for (w, g) in words.iter().zip(&glosses) {
        if g.is_empty() {
            return Err(Error::Invalid(format!("no gloss words found for `{w}`")));
        }
    }
    drop(cov);

    let conflate = |seg: &mut Vec<Token>| {
        for t in seg.iter_mut() {
            if t.label == Label::Word && words.contains(&t.lemma.as_str()) {
                t.lemma = pseudo.clone();
                t.surface = pseudo.clone();
            }
        }
    };

    let mut instances = Vec::new();
    let mut gold = GoldStandard::new();
    for (si, seg) in held.iter().enumerate() {
        let mut conflated = seg.clone();
        conflate(&mut conflated);
        for (p, t) in seg.iter().enumerate() {
            let Some(source) = words.iter().find(|w| t.label == Label::Word && t.lemma == **w) else {
                continue;
            };
            let lo = p.saturating_sub(cfg.context_radius);
            let hi = (p + cfg.context_radius + 1).min(seg.len());
            let context: Vec<Token> = conflated[lo..hi]
                .iter()
                .enumerate()
                .map(|(i, t)| Token {
                    position: i,
                    ..t.clone()
                })
                .collect();
            let id = format!("{pseudo}.{si:04}.{p:04}");
            gold.insert(id.clone(), [source.to_string()])?;
            instances.push(DisambiguationInstance {
                instance_id: id,
                lemma: pseudo.clone(),
                pos: PosTag::Noun,
                context,
                target_index: p - lo,
            });
        }
    }
    for seg in &mut train {
        conflate(seg);
    }

    // The more frequent source word takes rank 1.
    let order: [usize; 2] = if training_counts[1] > training_counts[0] {
        [1, 0]
    } else {
        [0, 1]
    };
    let senses: Vec<_> = order
        .iter()
        .enumerate()
        .map(|(r, &i)| {
            json!({
                "sense_key": words[i],
                "rank": r + 1,
                "gloss": glosses[i].join(" "),
                "count": training_counts[i],
            })
        })
        .collect();
    let lexicon_json = serde_json::to_string_pretty(&json!({
        "provenance": format!("pseudoword {pseudo} seed={} holdout={}", cfg.seed, cfg.holdout),
        "entries": [{"lemma": pseudo, "pos": "noun", "senses": senses}],
    }))
    .expect("json serializes")
        + "\n";

    Ok(PseudowordTask {
        pseudoword: pseudo,
        training: train,
        instances,
        gold,
        lexicon_json,
        training_counts,
        glosses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(text: &str) -> Vec<Token> {
        text.split_whitespace()
            .enumerate()
            .map(|(i, w)| Token::word(w, i))
            .collect()
    }

    fn corpus() -> Vec<Vec<Token>> {
        let mut docs = Vec::new();
        for i in 0..40 {
            let mut text = String::new();
            for j in 0..10 {
                text.push_str(&format!("river water fish bank {} flow stone ", i * j % 7));
                text.push_str("money loan vault coin cash ");
                text.push_str("stone field grass horse ");
            }
            docs.push(stream(&text));
        }
        docs
    }

    fn config() -> PseudowordConfig {
        PseudowordConfig {
            segment_len: 50,
            window_radius: 2,
            context_radius: 5,
            gloss_size: 3,
            min_pair: 1,
            min_ratio: 0.0,
            ..PseudowordConfig::new("fish", "coin")
        }
    }

    #[test]
    fn coverage_counts_windows() {
        let segs = vec![stream("a b a c"), stream("a")];
        let (cov, total) = coverage(&segs, 1);
        assert_eq!(total, 5);
        // windows: [a b] [a b a] [b a c] [a c] | [a]
        assert_eq!(covered(&cov["a"]), 5);
        assert_eq!(covered(&cov["c"]), 2);
        assert_eq!(intersection(&cov["a"], &cov["c"]), 2);
        assert_eq!(intersection(&cov["b"], &cov["c"]), 1);
        assert_eq!(covered(&union(&cov["b"], &cov["c"])), 4);
        assert_eq!(covered(&union(&cov["a"], &cov["c"])), 5);
    }

    #[test]
    fn builds_a_two_sense_task() {
        let task = generate(&corpus(), &config()).unwrap();
        assert_eq!(task.pseudoword, "fish_coin");
        assert!(!task.instances.is_empty());
        assert_eq!(task.instances.len(), task.gold.len());
        for inst in &task.instances {
            assert_eq!(inst.target().lemma, "fish_coin");
            assert!(inst.context.iter().all(|t| t.lemma != "fish" && t.lemma != "coin"));
        }
        assert!(task
            .training
            .iter()
            .flatten()
            .all(|t| t.lemma != "fish" && t.lemma != "coin"));
        assert!(task.glosses[0]
            .iter()
            .any(|w| w == "water" || w == "river" || w == "bank"));
        assert!(task.glosses[1]
            .iter()
            .any(|w| w == "loan" || w == "vault" || w == "cash"));
        let lex = crate::lexicon::Lexicon::from_json(
            &task.lexicon_json,
            &crate::corpus::Normalizer::english(),
            &Default::default(),
        )
        .unwrap();
        let e = lex.lookup("fish_coin", PosTag::Noun).unwrap();
        assert_eq!(e.senses.len(), 2);
    }

    #[test]
    fn same_seed_same_task() {
        let a = generate(&corpus(), &config()).unwrap();
        let b = generate(&corpus(), &config()).unwrap();
        assert_eq!(a.instances, b.instances);
        assert_eq!(a.gold, b.gold);
        assert_eq!(a.lexicon_json, b.lexicon_json);
        let c = generate(&corpus(), &PseudowordConfig { seed: 99, ..config() }).unwrap();
        assert_ne!(a.gold, c.gold);
    }

    #[test]
    fn rare_words_are_rejected() {
        let cfg = PseudowordConfig {
            min_occurrences: 10_000,
            ..config()
        };
        assert!(generate(&corpus(), &cfg).is_err());
        assert!(generate(
            &corpus(),
            &PseudowordConfig {
                holdout: 1.0,
                ..config()
            }
        )
        .is_err());
        assert!(generate(&corpus(), &PseudowordConfig::new("fish", "fish")).is_err());
    }

    #[test]
    fn word_absent_from_holdout() {
        // `coin` only appears in the first document, which is one segment.
        let mut docs = vec![stream(&"coin cash loan ".repeat(20))];
        for _ in 0..30 {
            docs.push(stream(&"fish water river stone ".repeat(10)));
        }
        let cfg = PseudowordConfig {
            segment_len: 60,
            ..config()
        };
        let held_out_coin = (0..50u64).find_map(|seed| {
            let task = generate(&docs, &PseudowordConfig { seed, ..cfg.clone() }).ok()?;
            Some(task).filter(|t| !t.gold.is_empty())
        });
        let task = held_out_coin.unwrap();
        assert!(task.gold.iter().all(|(_, keys)| keys.contains("fish")));
    }
}
