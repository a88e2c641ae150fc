use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use super::*;
use crate::corpus::Token;

fn stream(words: &str) -> Vec<Token> {
    words
        .split_whitespace()
        .enumerate()
        .map(|(i, w)| Token::word(w, i))
        .collect()
}

/// Independent oracle: enumerate every window explicitly.
type WindowCounts = (u64, BTreeMap<u32, u64>, BTreeMap<(u32, u32), u64>);

fn brute_force(docs: &[Vec<Token>], vocab: &Vocabulary, radius: usize) -> WindowCounts {
    let mut total = 0;
    let mut occ = BTreeMap::new();
    let mut pairs = BTreeMap::new();
    for doc in docs {
        for p in 0..doc.len() {
            total += 1;
            let lo = p.saturating_sub(radius);
            let hi = (p + radius).min(doc.len() - 1);
            let present: BTreeSet<u32> = doc[lo..=hi].iter().filter_map(|t| vocab.id(&t.lemma)).collect();
            for &a in &present {
                *occ.entry(a).or_default() += 1;
                for &b in &present {
                    if a < b {
                        *pairs.entry((a, b)).or_default() += 1;
                    }
                }
            }
        }
    }
    (total, occ, pairs)
}

fn assert_matches_oracle(docs: &[Vec<Token>], vocab: &Vocabulary, radius: usize) {
    let counts = count_cooccurrences(docs, vocab, radius).unwrap();
    let (total, occ, pairs) = brute_force(docs, vocab, radius);
    assert_eq!(counts.total_positions(), total);
    for id in 0..vocab.len() as u32 {
        assert_eq!(counts.occ(id), occ.get(&id).copied().unwrap_or(0), "occ {id}");
    }
    let got: BTreeMap<(u32, u32), u64> = counts.pairs().map(|(a, b, c)| ((a, b), c)).collect();
    assert_eq!(got, pairs);
}

#[test]
fn two_token_document() {
    let docs = vec![stream("a b")];
    let vocab = Vocabulary::build(docs.iter().map(Vec::as_slice), 10);
    let c = count_cooccurrences(&docs, &vocab, 30).unwrap();
    let (a, b) = (vocab.id("a").unwrap(), vocab.id("b").unwrap());
    assert_eq!(c.total_positions(), 2);
    assert_eq!((c.occ(a), c.occ(b), c.pair(a, b)), (2, 2, 2));
    // raw = 2*2 / (2*2) = 1 < 2
    assert_eq!(c.raw_mi(a, b), 1.0);
    let m = build_relevance(&c, 2.0).unwrap();
    assert_eq!(m.relevance(a, b).unwrap(), 0.0);
    assert_eq!(m.nnz(), 0);
}

#[test]
fn single_token_and_document_boundaries() {
    let docs = vec![stream("a")];
    let vocab = Vocabulary::build(docs.iter().map(Vec::as_slice), 10);
    let c = count_cooccurrences(&docs, &vocab, 5).unwrap();
    assert_eq!(c.occ(0), 1);
    assert_eq!(c.pair_count(), 0);

    let docs = vec![stream("a"), stream("b")];
    let vocab = Vocabulary::build(docs.iter().map(Vec::as_slice), 10);
    let c = count_cooccurrences(&docs, &vocab, 30).unwrap();
    assert_eq!(c.pair(0, 1), 0);
    assert_eq!(c.total_positions(), 2);
}

#[test]
fn raw_ratio_four_is_stored() {
    // occ(a)=1, occ(b)=1, pair=1, T=4 -> raw = 1*4 / (1*1) = 4.
    let c = CoocCounts::from_parts(1, "v", 4, vec![1, 1, 0], [((0, 1), 1)].into_iter().collect()).unwrap();
    assert_eq!(c.raw_mi(0, 1), 4.0);
    let m = build_relevance(&c, 2.0).unwrap();
    assert_eq!(m.relevance(0, 1).unwrap(), 4.0);
    assert_eq!(m.relevance(1, 0).unwrap(), 4.0);
    assert_eq!(m.relevance(0, 0).unwrap(), 0.0);
    assert_eq!(m.relevance(0, 2).unwrap(), 0.0);
    assert!(m.relevance(0, 3).is_err());
    // zero numerator
    let c = CoocCounts::from_parts(1, "v", 4, vec![1, 1], Default::default()).unwrap();
    assert_eq!(c.raw_mi(0, 1), 0.0);
    assert_eq!(build_relevance(&c, 2.0).unwrap().nnz(), 0);
}

#[test]
fn from_parts_checks_invariants() {
    assert!(CoocCounts::from_parts(1, "v", 4, vec![5], Default::default()).is_err());
    assert!(CoocCounts::from_parts(1, "v", 4, vec![1, 1], [((0, 1), 2)].into_iter().collect()).is_err());
    assert!(CoocCounts::from_parts(1, "v", 4, vec![1, 1], [((1, 0), 1)].into_iter().collect()).is_err());
}

#[test]
fn clipped_windows_reach_the_threshold() {
    let docs = vec![stream("a b"), stream("x"), stream("y")];
    let vocab = Vocabulary::build(docs.iter().map(Vec::as_slice), 10);
    let (a, b) = (vocab.id("a").unwrap(), vocab.id("b").unwrap());
    let mut c = CoocCounts::empty(&vocab, 1);
    c.add_document(&[Some(a), None, None, Some(b)]);
    // windows {a} {a} {b} {b}
    assert_eq!((c.occ(a), c.occ(b), c.pair(a, b)), (2, 2, 0));

    let c = count_cooccurrences(&docs, &vocab, 1).unwrap();
    // windows {a,b} {a,b} {x} {y}: raw = 2*4 / (2*2) = 2, stored at threshold 2
    assert_eq!(c.raw_mi(a, b), 2.0);
    let m = build_relevance(&c, 2.0).unwrap();
    assert_eq!(m.relevance(a, b).unwrap(), 2.0);
    assert_eq!(build_relevance(&c, 2.5).unwrap().nnz(), 0);
}

#[test]
fn empty_corpus_is_an_error() {
    let vocab = Vocabulary::build(std::iter::empty::<&[Token]>(), 10);
    let c = CoocCounts::empty(&vocab, 3);
    assert!(matches!(build_relevance(&c, 2.0), Err(crate::Error::EmptyCorpus)));
}

#[test]
fn merge_rules() {
    let docs = vec![stream("a b c a"), stream("c d a"), stream("b b d e")];
    let vocab = Vocabulary::build(docs.iter().map(Vec::as_slice), 10);
    let whole = count_cooccurrences(&docs, &vocab, 2).unwrap();
    let x = count_cooccurrences(&docs[..1], &vocab, 2).unwrap();
    let y = count_cooccurrences(&docs[1..], &vocab, 2).unwrap();
    assert_eq!(merge_counts([x.clone()]).unwrap(), x);
    assert_eq!(merge_counts([x.clone(), y.clone()]).unwrap(), whole);
    assert_eq!(merge_counts([y.clone(), x.clone()]).unwrap(), whole);
    let y2 = count_cooccurrences(&docs[1..2], &vocab, 2).unwrap();
    let z2 = count_cooccurrences(&docs[2..], &vocab, 2).unwrap();
    assert_eq!(merge_counts([x.clone(), y2, z2]).unwrap(), whole);

    let other_radius = count_cooccurrences(&docs, &vocab, 3).unwrap();
    assert!(x.clone().merge(other_radius).is_err());
    let other_vocab = Vocabulary::build(docs[..1].iter().map(Vec::as_slice), 10);
    let ov = count_cooccurrences(&docs, &other_vocab, 2).unwrap();
    assert!(x.merge(ov).is_err());
}

#[test]
fn out_of_vocabulary_tokens_are_transparent() {
    let docs = vec![stream("a rare b rare2 a")];
    let full = Vocabulary::build(docs.iter().map(Vec::as_slice), 2);
    assert!(full.id("rare").is_none());
    assert_matches_oracle(&docs, &full, 1);
    let c = count_cooccurrences(&docs, &full, 1).unwrap();
    assert_eq!(c.total_positions(), 5);
}

#[test]
fn binary_and_tsv_round_trip() {
    let docs = vec![stream("a b c d e f a b c"), stream("f e d c")];
    let vocab = Vocabulary::build(docs.iter().map(Vec::as_slice), 10);
    let c = count_cooccurrences(&docs, &vocab, 1).unwrap();
    let m = build_relevance(&c, 1.5)
        .unwrap()
        .with_stopword_hash("sw")
        .with_config_hash("cfg");
    assert!(m.nnz() > 0);
    let bin = codec::encode_binary(&m);
    let back = codec::decode_binary(&bin).unwrap();
    assert_eq!(back, m);
    assert_eq!(codec::encode_binary(&back), bin);
    let tsv = codec::encode_tsv(&m, "t");
    let back = codec::decode_tsv(&tsv, "m.tsv").unwrap();
    assert_eq!(back, m);
    assert_eq!(codec::decode_any(&bin, "x").unwrap(), m);
    assert_eq!(codec::decode_any(tsv.as_bytes(), "x").unwrap(), m);
    assert!(codec::decode_binary(&bin[..bin.len() - 1]).is_err());
    assert!(codec::decode_binary(b"XXXX").is_err());
}

#[test]
fn from_cells_rejects_bad_cells() {
    let meta = MatrixMeta {
        vocab_hash: "v".into(),
        stopword_hash: String::new(),
        config_hash: String::new(),
        radius: 1,
        threshold: 2.0,
        total_positions: 4,
        vocab_size: 3,
    };
    assert!(RelevanceMatrix::from_cells(meta.clone(), vec![(1, 0, 3.0)]).is_err());
    assert!(RelevanceMatrix::from_cells(meta.clone(), vec![(0, 1, 1.0)]).is_err());
    assert!(RelevanceMatrix::from_cells(meta.clone(), vec![(0, 3, 3.0)]).is_err());
    assert!(RelevanceMatrix::from_cells(meta.clone(), vec![(0, 1, 3.0), (0, 1, 4.0)]).is_err());
    let m = RelevanceMatrix::from_cells(meta, vec![(1, 2, 3.0), (0, 2, 5.0), (0, 1, 4.0)]).unwrap();
    assert_eq!(m.row(2), (&[0u32, 1][..], &[5.0, 3.0][..]));
    assert_eq!(m.row(0), (&[1u32, 2][..], &[4.0, 5.0][..]));
}

fn corpus_strategy() -> impl Strategy<Value = Vec<Vec<Token>>> {
    prop::collection::vec(prop::collection::vec(0u8..12, 0..40), 1..5).prop_map(|docs| {
        docs.into_iter()
            .map(|d| {
                d.into_iter()
                    .enumerate()
                    .map(|(i, w)| Token::word(format!("w{w}"), i))
                    .collect()
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn counts_equal_brute_force(docs in corpus_strategy(), radius in 1usize..8, k in 1usize..14) {
        let vocab = Vocabulary::build(docs.iter().map(Vec::as_slice), k);
        assert_matches_oracle(&docs, &vocab, radius);
    }

    #[test]
    fn count_invariants(docs in corpus_strategy(), radius in 1usize..6) {
        let vocab = Vocabulary::build(docs.iter().map(Vec::as_slice), 20);
        let c = count_cooccurrences(&docs, &vocab, radius).unwrap();
        for (a, b, n) in c.pairs() {
            prop_assert!(n <= c.occ(a).min(c.occ(b)));
            prop_assert_eq!(c.pair(a, b), c.pair(b, a));
        }
        for id in 0..vocab.len() as u32 {
            prop_assert!(c.occ(id) <= c.total_positions());
        }
    }

    #[test]
    fn duplicating_the_corpus_keeps_raw_ratios(docs in corpus_strategy(), radius in 1usize..6) {
        let vocab = Vocabulary::build(docs.iter().map(Vec::as_slice), 20);
        let once = count_cooccurrences(&docs, &vocab, radius).unwrap();
        let mut doubled = docs.clone();
        doubled.extend(docs.iter().cloned());
        let twice = count_cooccurrences(&doubled, &vocab, radius).unwrap();
        for (a, b, _) in once.pairs() {
            prop_assert_eq!(once.raw_mi(a, b), twice.raw_mi(a, b));
        }
    }

    #[test]
    fn threshold_gap_and_symmetry(docs in corpus_strategy(), radius in 1usize..6, threshold in 0.5f64..4.0) {
        let vocab = Vocabulary::build(docs.iter().map(Vec::as_slice), 20);
        let c = count_cooccurrences(&docs, &vocab, radius).unwrap();
        prop_assume!(c.total_positions() > 0);
        let m = build_relevance(&c, threshold).unwrap();
        let n = vocab.len() as u32;
        for a in 0..n {
            for b in 0..n {
                let v = m.relevance(a, b).unwrap();
                prop_assert!(v == 0.0 || v >= threshold);
                prop_assert_eq!(v, m.relevance(b, a).unwrap());
            }
        }
    }
}
