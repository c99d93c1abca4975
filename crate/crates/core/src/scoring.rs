//! Comparative determinant scoring over a corpus pair.
//!
//! For every term `t` occurring in the positive corpus:
//!
//! * `b(t)    = n_pos / n_total`: share of all occurrences that fall in the
//!   positive corpus;
//! * `dist(t) = doc_count_pos / dc_p`: fraction of positive documents that
//!   contain `t`;
//! * `a(t)    = (b + dist) / 2`: the final score, in `(0, 1]`.
//!
//! Counts are kept as exact integers. Each ratio is reduced to lowest terms
//! and divided once, so mathematically equal scores are bit-identical and
//! the strict threshold comparisons downstream see true ties as ties.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, CorpusPair};
use crate::error::{Error, Result};

/// Token-total imbalance above which scoring logs a warning.
pub const LENGTH_IMBALANCE_WARNING: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scores {
    pub b: f64,
    pub dist: f64,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermStats {
    pub term: String,
    pub n_pos: u64,
    pub n_total: u64,
    pub doc_count_pos: u64,
    pub b: f64,
    pub dist: f64,
    pub a: f64,
}

impl TermStats {
    pub fn new(
        term: impl Into<String>,
        n_pos: u64,
        n_total: u64,
        doc_count_pos: u64,
        dc_p: u64,
    ) -> Result<Self> {
        let Scores { b, dist, a } = score(n_pos, n_total, doc_count_pos, dc_p)?;
        Ok(TermStats {
            term: term.into(),
            n_pos,
            n_total,
            doc_count_pos,
            b,
            dist,
            a,
        })
    }
}

/// Scores for every term of the positive corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    dc_p: u64,
    stats: BTreeMap<String, TermStats>,
}

impl ScoreTable {
    pub fn dc_p(&self) -> u64 {
        self.dc_p
    }

    pub fn get(&self, term: &str) -> Option<&TermStats> {
        self.stats.get(term)
    }

    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }

    /// Iterates in ascending term order.
    pub fn iter(&self) -> impl Iterator<Item = &TermStats> {
        self.stats.values()
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.stats.keys().map(String::as_str)
    }

    pub fn a_scores(&self) -> Vec<f64> {
        self.stats.values().map(|s| s.a).collect()
    }
}

/// Union of term keys across the positive corpus.
pub fn term_universe(positive: &Corpus) -> Result<BTreeSet<String>> {
    if positive.is_empty() {
        return Err(Error::validation(
            "positive corpus empty: no term universe to score",
        ));
    }
    Ok(positive
        .documents()
        .iter()
        .flat_map(|d| d.term_counts().keys().cloned())
        .collect())
}

/// `(n_pos, n_total, doc_count_pos)` for one term, by direct recount.
pub fn count_stats(pair: &CorpusPair, term: &str) -> Result<(u64, u64, u64)> {
    let mut n_pos = 0;
    let mut doc_count_pos = 0;
    for doc in pair.positive().documents() {
        let c = doc.count(term);
        n_pos += c;
        if c > 0 {
            doc_count_pos += 1;
        }
    }
    if n_pos == 0 {
        return Err(Error::NotInUniverse(term.to_string()));
    }
    let n_neg: u64 = pair
        .negative()
        .documents()
        .iter()
        .map(|d| d.count(term))
        .sum();
    Ok((n_pos, n_pos + n_neg, doc_count_pos))
}

pub fn score(n_pos: u64, n_total: u64, doc_count_pos: u64, dc_p: u64) -> Result<Scores> {
    if dc_p == 0 {
        return Err(Error::validation(
            "positive document count must be at least 1",
        ));
    }
    if n_pos == 0 || doc_count_pos == 0 {
        return Err(Error::validation(format!(
            "term must occur in the positive corpus (n_pos = {n_pos}, doc_count_pos = {doc_count_pos})"
        )));
    }
    if n_pos > n_total || doc_count_pos > n_pos || doc_count_pos > dc_p {
        return Err(Error::validation(format!(
            "inconsistent counts: n_pos = {n_pos}, n_total = {n_total}, \
             doc_count_pos = {doc_count_pos}, dc_p = {dc_p}"
        )));
    }
    let (n_pos, n_total, doc_count_pos, dc_p) = (
        u128::from(n_pos),
        u128::from(n_total),
        u128::from(doc_count_pos),
        u128::from(dc_p),
    );
    Ok(Scores {
        b: exact_ratio(n_pos, n_total),
        dist: exact_ratio(doc_count_pos, dc_p),
        // (n_pos/n_total + doc_count_pos/dc_p) / 2
        a: exact_ratio(n_pos * dc_p + doc_count_pos * n_total, 2 * n_total * dc_p),
    })
}

fn exact_ratio(num: u128, den: u128) -> f64 {
    let g = num.gcd(&den);
    (num / g) as f64 / (den / g) as f64
}

type PosCounts<'a> = HashMap<&'a str, (u64, u64)>;

fn positive_counts(corpus: &Corpus) -> PosCounts<'_> {
    corpus
        .documents()
        .par_iter()
        .fold(PosCounts::new, |mut acc, doc| {
            for (term, &count) in doc.term_counts() {
                let entry = acc.entry(term.as_str()).or_insert((0, 0));
                entry.0 += count;
                entry.1 += 1;
            }
            acc
        })
        .reduce(PosCounts::new, |mut left, right| {
            for (term, (n, d)) in right {
                let entry = left.entry(term).or_insert((0, 0));
                entry.0 += n;
                entry.1 += d;
            }
            left
        })
}

fn negative_counts<'a>(corpus: &'a Corpus, universe: &PosCounts<'_>) -> HashMap<&'a str, u64> {
    corpus
        .documents()
        .par_iter()
        .fold(HashMap::new, |mut acc, doc| {
            for (term, &count) in doc.term_counts() {
                if universe.contains_key(term.as_str()) {
                    *acc.entry(term.as_str()).or_insert(0) += count;
                }
            }
            acc
        })
        .reduce(HashMap::new, |mut left, right| {
            for (term, n) in right {
                *left.entry(term).or_insert(0) += n;
            }
            left
        })
}

/// Scores every term of the positive corpus.
///
/// Counting runs on the current rayon pool; the result does not depend on
/// how many threads it has.
pub fn score_all(pair: &CorpusPair) -> Result<ScoreTable> {
    let positive = pair.positive();
    if positive.is_empty() {
        return Err(Error::validation(
            "positive corpus empty: no term universe to score",
        ));
    }
    let imbalance = pair.length_imbalance();
    if imbalance > LENGTH_IMBALANCE_WARNING {
        log::warn!(
            "corpus token totals differ by {:.1}% ({} positive vs {} negative); \
             proportional scores are not length-normalized",
            imbalance * 100.0,
            positive.total_tokens(),
            pair.negative().total_tokens()
        );
    }

    let dc_p = positive.len() as u64;
    let pos = positive_counts(positive);
    let neg = negative_counts(pair.negative(), &pos);

    let mut stats = BTreeMap::new();
    for (term, &(n_pos, doc_count_pos)) in &pos {
        let n_total = n_pos + neg.get(term).copied().unwrap_or(0);
        let ts = TermStats::new(*term, n_pos, n_total, doc_count_pos, dc_p)?;
        stats.insert(term.to_string(), ts);
    }
    Ok(ScoreTable { dc_p, stats })
}
