//! Shared test support: random corpus generators and an independent recount
//! oracle for the scores. The oracle works on plain count maps with exact
//! rationals and never touches the library's scoring code.

#![allow(dead_code)]

pub mod checks;

use std::collections::{BTreeMap, BTreeSet};

use determinant::corpus::{build_pair, Corpus, CorpusLabel, CorpusPair, TokenizedDocument};
use num_rational::Ratio;
use proptest::prelude::*;

pub type RawDoc = BTreeMap<String, u64>;

#[derive(Debug, Clone)]
pub struct RawPair {
    pub pos: Vec<RawDoc>,
    pub neg: Vec<RawDoc>,
}

impl RawPair {
    pub fn to_pair(&self) -> CorpusPair {
        build_pair(
            to_corpus(CorpusLabel::Positive, "p", &self.pos),
            to_corpus(CorpusLabel::Negative, "n", &self.neg),
        )
        .expect("generated pair is valid")
    }
}

pub fn to_corpus(label: CorpusLabel, prefix: &str, docs: &[RawDoc]) -> Corpus {
    let docs = docs
        .iter()
        .enumerate()
        .map(|(i, d)| TokenizedDocument::from_counts(format!("{prefix}{i}"), d.clone()))
        .collect();
    Corpus::new(label, docs).expect("unique ids")
}

pub fn term_name(i: usize) -> String {
    format!("t{i:02}")
}

fn raw_doc(vocab: usize, max_count: u64) -> impl Strategy<Value = RawDoc> {
    prop::collection::btree_map(0..vocab, 1..=max_count, 0..=vocab.min(20))
        .prop_map(|m| m.into_iter().map(|(k, v)| (term_name(k), v)).collect())
}

/// Up to 10 documents per corpus, vocabulary up to 50, counts up to 20.
pub fn raw_pair_with(min_pos: usize, min_neg: usize) -> impl Strategy<Value = RawPair> {
    (1usize..=50).prop_flat_map(move |vocab| {
        (
            prop::collection::vec(raw_doc(vocab, 20), min_pos..=10),
            prop::collection::vec(raw_doc(vocab, 20), min_neg..=10),
        )
            .prop_map(|(mut pos, neg)| {
                // keep the term universe non-empty
                if pos.iter().all(|d| d.is_empty()) {
                    pos[0].insert(term_name(0), 1);
                }
                RawPair { pos, neg }
            })
    })
}

pub fn raw_pair() -> impl Strategy<Value = RawPair> {
    raw_pair_with(1, 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleStats {
    pub n_pos: u64,
    pub n_total: u64,
    pub doc_count_pos: u64,
    pub b: Ratio<u64>,
    pub dist: Ratio<u64>,
    pub a: Ratio<u64>,
}

/// Direct recount over raw documents: for every term of the positive side,
/// total occurrences in each corpus and the number of positive documents
/// containing it, then the three ratios as exact fractions.
pub fn oracle_scores(raw: &RawPair) -> BTreeMap<String, OracleStats> {
    let universe: BTreeSet<&String> = raw
        .pos
        .iter()
        .flat_map(|d| d.iter().filter(|(_, &c)| c > 0).map(|(t, _)| t))
        .collect();
    let dc_p = raw.pos.len() as u64;
    let mut out = BTreeMap::new();
    for term in universe {
        let mut n_pos = 0;
        let mut doc_count_pos = 0;
        for d in &raw.pos {
            let c = d.get(term).copied().unwrap_or(0);
            n_pos += c;
            if c >= 1 {
                doc_count_pos += 1;
            }
        }
        let mut n_neg = 0;
        for d in &raw.neg {
            n_neg += d.get(term).copied().unwrap_or(0);
        }
        let n_total = n_pos + n_neg;
        let b = Ratio::new(n_pos, n_total);
        let dist = Ratio::new(doc_count_pos, dc_p);
        let a = (b + dist) / Ratio::from_integer(2);
        out.insert(
            term.clone(),
            OracleStats {
                n_pos,
                n_total,
                doc_count_pos,
                b,
                dist,
                a,
            },
        );
    }
    out
}

pub fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Nearest-rank percentile, written out longhand for test comparisons.
pub fn oracle_nearest_rank(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    let mut k = 1;
    while (k as f64) < p / 100.0 * n as f64 - 1e-9 {
        k += 1;
    }
    v[k - 1]
}
