//! Scoring against a gold standard, and the random and first-sense
//! baselines.
//!
//! Answer files hold `instance_id sense_key heuristic` per line; gold files
//! hold `instance_id sense_key [sense_key ...]`. Lines starting with `#`
//! are metadata and ignored by the readers.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cascade::DisambiguationInstance;
use crate::lexicon::Lexicon;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer {
    pub instance_id: String,
    pub sense_key: String,
    pub heuristic: String,
}

impl Answer {
    pub fn new(instance_id: impl Into<String>, sense_key: impl Into<String>, heuristic: impl Into<String>) -> Self {
        Answer {
            instance_id: instance_id.into(),
            sense_key: sense_key.into(),
            heuristic: heuristic.into(),
        }
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_answers(text: &str, source: &str) -> Result<Vec<Answer>> {
    let mut out = Vec::new();
    for (n, line) in data_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [id, key, heuristic] => out.push(Answer::new(*id, *key, *heuristic)),
            _ => {
                return Err(Error::parse(
                    format!("{source}:{n}"),
                    "expected `instance_id sense_key heuristic`",
                ))
            }
        }
    }
    Ok(out)
}

/// One answer per line; `header` entries become `# key=value` lines.
pub fn write_answers(header: &[(String, String)], answers: &[Answer]) -> String {
    let mut out = String::new();
    for (k, v) in header {
        let _ = writeln!(out, "# {k}={v}");
    }
    for a in answers {
        let _ = writeln!(out, "{} {} {}", a.instance_id, a.sense_key, a.heuristic);
    }
    out
}

/// Acceptable sense keys per instance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GoldStandard {
    keys: BTreeMap<String, BTreeSet<String>>,
}

impl GoldStandard {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, instance_id: impl Into<String>, keys: impl IntoIterator<Item = String>) -> Result<()> {
        let id = instance_id.into();
        let keys: BTreeSet<String> = keys.into_iter().collect();
        if keys.is_empty() {
            return Err(Error::Invalid(format!("gold entry `{id}` has no sense keys")));
        }
        if self.keys.contains_key(&id) {
            return Err(Error::Invalid(format!("duplicate gold entry `{id}`")));
        }
        self.keys.insert(id, keys);
        Ok(())
    }

    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut gold = GoldStandard::new();
        for (n, line) in data_lines(text) {
            let mut fields = line.split_whitespace();
            let id = fields.next().expect("nonempty line");
            gold.insert(id, fields.map(str::to_string))
                .map_err(|e| Error::parse(format!("{source}:{n}"), e.to_string()))?;
        }
        Ok(gold)
    }

    pub fn to_text(&self, header: &[(String, String)]) -> String {
        let mut out = String::new();
        for (k, v) in header {
            let _ = writeln!(out, "# {k}={v}");
        }
        for (id, keys) in &self.keys {
            let _ = write!(out, "{id}");
            for k in keys {
                let _ = write!(out, " {k}");
            }
            out.push('\n');
        }
        out
    }

    pub fn get(&self, instance_id: &str) -> Option<&BTreeSet<String>> {
        self.keys.get(instance_id)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.keys.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Attempted count, summed item scores (each in [0, 1]) and the derived
/// ratios. `precision` is `None` when nothing was attempted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRow {
    pub label: String,
    pub attempted: u64,
    pub score: f64,
    pub precision: Option<f64>,
    pub recall: f64,
}

impl EvalRow {
    pub fn from_tallies(label: impl Into<String>, attempted: u64, score: f64, total_instances: u64) -> Self {
        EvalRow {
            label: label.into(),
            attempted,
            score,
            precision: (attempted > 0).then(|| score / attempted as f64),
            recall: if total_instances > 0 {
                score / total_instances as f64
            } else {
                0.0
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub total_instances: u64,
    /// One row per heuristic, in order of first appearance.
    pub rows: Vec<EvalRow>,
    pub total: EvalRow,
}

/// Percentage with one decimal, or an em dash for undefined values.
pub fn percent(x: Option<f64>) -> String {
    match x {
        Some(x) => format!("{:.1}%", 100.0 * x),
        None => "\u{2014}".to_string(),
    }
}

/// Score column in the per-item 100 convention: `1406.0` prints `140600`.
fn display_score(score: f64) -> String {
    let s = format!("{:.1}", 100.0 * score);
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}

impl EvalReport {
    pub fn to_text(&self) -> String {
        let mut lines = vec![[
            "Heuristic".to_string(),
            "Att.".into(),
            "Score".into(),
            "Prec.".into(),
            "Rec.".into(),
        ]];
        for r in self.rows.iter().chain(std::iter::once(&self.total)) {
            lines.push([
                r.label.clone(),
                r.attempted.to_string(),
                display_score(r.score),
                percent(r.precision),
                percent(Some(r.recall)),
            ]);
        }
        let mut widths = [0usize; 5];
        for l in &lines {
            for (w, cell) in widths.iter_mut().zip(l) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for l in &lines {
            let mut row = format!("{:<w$}", l[0], w = widths[0]);
            for (cell, &w) in l.iter().zip(&widths).skip(1) {
                let pad = w - cell.chars().count();
                let _ = write!(row, "  {}{}", " ".repeat(pad), cell);
            }
            out.push_str(row.trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Exact-match scoring: an answer is worth 1 when its key is in the gold
/// set for its instance, else 0.
pub fn score_answers(answers: &[Answer], gold: &GoldStandard, total_instances: u64) -> Result<EvalReport> {
    let missing: Vec<String> = answers
        .iter()
        .filter(|a| gold.get(&a.instance_id).is_none())
        .map(|a| a.instance_id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingGold(missing));
    }
    let mut seen = HashSet::new();
    if let Some(dup) = answers.iter().find(|a| !seen.insert(a.instance_id.as_str())) {
        return Err(Error::Invalid(format!("instance `{}` answered twice", dup.instance_id)));
    }
    if (answers.len() as u64) > total_instances {
        return Err(Error::Invalid(format!(
            "{} answers for {total_instances} instances",
            answers.len()
        )));
    }

    let mut order: Vec<&str> = Vec::new();
    let mut tallies: BTreeMap<&str, (u64, f64)> = BTreeMap::new();
    for a in answers {
        let correct = gold.get(&a.instance_id).is_some_and(|keys| keys.contains(&a.sense_key));
        let t = tallies.entry(&a.heuristic).or_insert_with(|| {
            order.push(&a.heuristic);
            (0, 0.0)
        });
        t.0 += 1;
        if correct {
            t.1 += 1.0;
        }
    }
    let rows: Vec<EvalRow> = order
        .iter()
        .map(|h| {
            let (att, score) = tallies[h];
            EvalRow::from_tallies(*h, att, score, total_instances)
        })
        .collect();
    let attempted = rows.iter().map(|r| r.attempted).sum();
    let score = rows.iter().fold(0.0, |acc, r| acc + r.score);
    Ok(EvalReport {
        total_instances,
        rows,
        total: EvalRow::from_tallies("Total", attempted, score, total_instances),
    })
}

/// A uniformly random sense per instance. Instances whose lemma is not in
/// the lexicon are skipped.
pub fn baseline_random(instances: &[DisambiguationInstance], lexicon: &Lexicon, seed: u64) -> Vec<Answer> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    instances
        .iter()
        .filter_map(|inst| {
            let entry = lexicon.lookup(&inst.lemma, inst.pos)?;
            let pick = rng.gen_range(0..entry.senses.len());
            Some(Answer::new(&inst.instance_id, &entry.senses[pick].sense_key, "random"))
        })
        .collect()
}

/// The rank-1 sense for every instance with a known lemma.
pub fn baseline_first_sense(instances: &[DisambiguationInstance], lexicon: &Lexicon) -> Vec<Answer> {
    instances
        .iter()
        .filter_map(|inst| {
            let entry = lexicon.lookup(&inst.lemma, inst.pos)?;
            Some(Answer::new(
                &inst.instance_id,
                &entry.first_sense().sense_key,
                "first_sense",
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::cascade::{parse_cascade, run_cascade, EnrichmentCache, Resources};
    use crate::corpus::{IdentityLemmatizer, Normalizer, PosTag, StopwordList, Token};
    use crate::lexicon::LoadOptions;
    use crate::relmatrix::RelevanceModel;

    #[test]
    fn all_words_total_row() {
        let row = EvalRow::from_tallies("Total", 2446, 1406.00, 2471);
        assert_eq!(percent(row.precision), "57.5%");
        assert_eq!(percent(Some(row.recall)), "56.9%");
        assert_eq!(display_score(row.score), "140600");
    }

    #[test]
    fn full_coverage_gives_equal_columns() {
        let row = EvalRow::from_tallies("Total", 4324, 1736.17, 4324);
        assert_eq!(row.precision, Some(row.recall));
        assert_eq!(percent(row.precision), "40.2%");
    }

    fn gold_of(pairs: &[(&str, &str)]) -> GoldStandard {
        let mut g = GoldStandard::new();
        for (id, key) in pairs {
            g.insert(*id, [key.to_string()]).unwrap();
        }
        g
    }

    #[test]
    fn perfect_and_empty_runs() {
        let gold = gold_of(&[("a", "x%1"), ("b", "y%2")]);
        let answers = vec![
            Answer::new("a", "x%1", "first_sense"),
            Answer::new("b", "y%2", "monosemous"),
        ];
        let r = score_answers(&answers, &gold, 2).unwrap();
        assert_eq!(r.total.precision, Some(1.0));
        assert_eq!(r.total.recall, 1.0);
        assert_eq!(
            r.rows.iter().map(|r| r.label.as_str()).collect::<Vec<_>>(),
            ["first_sense", "monosemous"]
        );

        let r = score_answers(&[], &gold, 2).unwrap();
        assert_eq!(r.total.precision, None);
        assert_eq!(r.total.recall, 0.0);
        assert!(r.to_text().contains('\u{2014}'));
    }

    #[test]
    fn missing_gold_lists_ids() {
        let gold = gold_of(&[("a", "x%1")]);
        let answers = vec![Answer::new("q", "x%1", "h"), Answer::new("r", "x%1", "h")];
        match score_answers(&answers, &gold, 5) {
            Err(Error::MissingGold(ids)) => assert_eq!(ids, ["q", "r"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn multiple_acceptable_keys() {
        let gold = GoldStandard::parse("# k=v\na x%1 x%2\n", "gold").unwrap();
        let r = score_answers(&[Answer::new("a", "x%2", "h")], &gold, 1).unwrap();
        assert_eq!(r.total.score, 1.0);
        assert!(GoldStandard::parse("a\n", "gold").is_err());
        assert!(GoldStandard::parse("a x\na y\n", "gold").is_err());
    }

    #[test]
    fn file_round_trips() {
        let answers = vec![
            Answer::new("a", "x%1", "first_sense"),
            Answer::new("b", "y%2", "monosemous"),
        ];
        let text = write_answers(&[("tool".into(), "t".into())], &answers);
        assert_eq!(parse_answers(&text, "answers").unwrap(), answers);
        let gold = gold_of(&[("a", "x%1"), ("b", "y%2")]);
        assert_eq!(GoldStandard::parse(&gold.to_text(&[]), "gold").unwrap(), gold);
        assert!(parse_answers("a b\n", "answers").is_err());
    }

    #[test]
    fn text_table_layout() {
        let gold = gold_of(&[("a", "x%1"), ("b", "y%2"), ("c", "z%1")]);
        let answers = vec![
            Answer::new("a", "x%1", "monosemous"),
            Answer::new("b", "y%1", "first_sense"),
        ];
        let text = score_answers(&answers, &gold, 3).unwrap().to_text();
        let expected = "\
Heuristic    Att.  Score   Prec.   Rec.
monosemous      1    100  100.0%  33.3%
first_sense     1      0    0.0%   0.0%
Total           2    100   50.0%  33.3%
";
        assert_eq!(text, expected);
    }

    fn two_sense_fixture(n: usize) -> (Lexicon, Vec<DisambiguationInstance>) {
        let normalizer = Normalizer::new(StopwordList::empty(), Arc::new(IdentityLemmatizer));
        let entries: Vec<_> = (0..n)
            .map(|i| {
                serde_json::json!({"lemma": format!("l{i}"), "pos": "noun", "senses": [
                    {"sense_key": format!("l{i}%1"), "rank": 1, "gloss": "a", "count": 3},
                    {"sense_key": format!("l{i}%2"), "rank": 2, "gloss": "b", "count": 1}]})
            })
            .collect();
        let mut entries = entries;
        entries.push(serde_json::json!({"lemma": "solo", "pos": "noun", "senses": [
            {"sense_key": "solo%1", "rank": 1, "gloss": "c"}]}));
        let lex = Lexicon::from_json(
            &serde_json::json!({ "entries": entries }).to_string(),
            &normalizer,
            &LoadOptions::default(),
        )
        .unwrap();
        let instances = (0..n)
            .chain([usize::MAX, usize::MAX - 1])
            .map(|i| {
                let lemma = match i {
                    usize::MAX => "solo".to_string(),
                    x if x == usize::MAX - 1 => "unknown".to_string(),
                    _ => format!("l{i}"),
                };
                DisambiguationInstance {
                    instance_id: format!("id{i}"),
                    lemma: lemma.clone(),
                    pos: PosTag::Noun,
                    context: vec![Token::word(lemma, 0)],
                    target_index: 0,
                }
            })
            .collect();
        (lex, instances)
    }

    #[test]
    fn random_baseline_is_near_half_on_two_sense_lemmas() {
        let (lex, instances) = two_sense_fixture(4000);
        let a = baseline_random(&instances, &lex, 7);
        assert_eq!(a, baseline_random(&instances, &lex, 7));
        assert_eq!(a.len(), 4001);
        assert!(a.iter().any(|x| x.sense_key == "solo%1"));
        let first = a
            .iter()
            .filter(|x| x.sense_key.ends_with("%1") && x.sense_key != "solo%1")
            .count();
        // 3 standard deviations of Binomial(4000, 0.5) is about 95.
        assert!((first as i64 - 2000).abs() < 95, "{first}");
    }

    #[test]
    fn first_sense_baseline_matches_the_cascade() {
        let (lex, instances) = two_sense_fixture(20);
        let baseline = baseline_first_sense(&instances, &lex);
        assert!(baseline
            .iter()
            .all(|a| a.instance_id != format!("id{}", usize::MAX - 1)));
        let model = RelevanceModel::empty();
        let cache = EnrichmentCache::new();
        let res = Resources {
            lexicon: &lex,
            model: &model,
            cache: &cache,
        };
        let spec = parse_cascade("first_sense").unwrap();
        let from_cascade: Vec<Answer> = instances
            .iter()
            .filter_map(|i| {
                let r = run_cascade(&spec, i, res).unwrap();
                r.verdict
                    .sense_key()
                    .map(|k| Answer::new(&i.instance_id, k, &r.verdict.heuristic))
            })
            .collect();
        assert_eq!(baseline, from_cascade);
    }

    proptest! {
        #[test]
        fn report_arithmetic(
            outcomes in prop::collection::vec((0usize..4, any::<bool>()), 0..60),
            extra in 0u64..20,
        ) {
            let names = ["monosemous", "statistical", "mixed_filter", "first_sense"];
            let mut gold = GoldStandard::new();
            let mut answers = Vec::new();
            for (i, (h, ok)) in outcomes.iter().enumerate() {
                gold.insert(format!("i{i}"), ["k%1".to_string()]).unwrap();
                answers.push(Answer::new(format!("i{i}"), if *ok { "k%1" } else { "k%2" }, names[*h]));
            }
            let total = answers.len() as u64 + extra;
            let r = score_answers(&answers, &gold, total).unwrap();
            prop_assert_eq!(r.rows.iter().map(|x| x.attempted).sum::<u64>(), r.total.attempted);
            prop_assert_eq!(r.rows.iter().map(|x| x.score).sum::<f64>(), r.total.score);
            for row in r.rows.iter().chain([&r.total]) {
                prop_assert!((0.0..=1.0).contains(&row.recall));
                if let Some(p) = row.precision {
                    prop_assert!((0.0..=1.0).contains(&p));
                    prop_assert!(p >= row.recall);
                    prop_assert_eq!(p, row.score / row.attempted as f64);
                    prop_assert_eq!(p == row.recall, row.attempted == total || row.score == 0.0);
                }
                prop_assert_eq!(row.recall, if total > 0 { row.score / total as f64 } else { 0.0 });
            }
        }
    }
}
