//! Classical TF-IDF, per-document prominence ranks and mean ranks.
//!
//! `score = f(t, d) * log(|D| / DF(t))`, with document frequency taken within
//! the corpus being ranked. Ranks are 1-based: the highest-scoring term of a
//! document has rank 1. Ties go to the lexicographically smaller term.
//!
//! Two scores that are mathematically equal can differ in the last bits once
//! the logarithm is evaluated (`2 * ln 2` vs `ln 4`). Near-equal scores are
//! therefore compared exactly, `(|D|/df1)^tf1` against `(|D|/df2)^tf2` in big
//! integers, so the ranking is the same for every logarithm base.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, CorpusLabel, TokenizedDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
    Ten,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
            LogBase::Ten => x.log10(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TfidfScore {
    pub term: String,
    pub document: String,
    pub tf: u64,
    pub df: u64,
    pub corpus_size: u64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedTerm {
    pub term: String,
    pub rank: usize,
    pub tf: u64,
    pub df: u64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanRank {
    pub term: String,
    pub label: CorpusLabel,
    pub per_doc_ranks: Vec<(String, usize)>,
    /// `None` when no document of the corpus contains the term.
    pub mean_rank: Option<f64>,
}

pub fn tf_idf_value(tf: u64, df: u64, corpus_size: u64, base: LogBase) -> f64 {
    if tf == 0 || df == 0 || df >= corpus_size {
        return 0.0;
    }
    tf as f64 * base.log(corpus_size as f64 / df as f64)
}

pub fn document_frequencies(corpus: &Corpus) -> HashMap<&str, u64> {
    let mut df = HashMap::new();
    for doc in corpus.documents() {
        for term in doc.term_counts().keys() {
            *df.entry(term.as_str()).or_insert(0) += 1;
        }
    }
    df
}

/// TF-IDF of `term` in `document`, natural log, DF taken over `corpus`.
pub fn tf_idf(term: &str, document: &TokenizedDocument, corpus: &Corpus) -> TfidfScore {
    let tf = document.count(term);
    let df = corpus
        .documents()
        .iter()
        .filter(|d| d.contains(term))
        .count() as u64;
    let corpus_size = corpus.len() as u64;
    TfidfScore {
        term: term.to_string(),
        document: document.id().to_string(),
        tf,
        df,
        corpus_size,
        score: tf_idf_value(tf, df, corpus_size, LogBase::Natural),
    }
}

/// Exact comparison of `tf1 * log(n/df1)` with `tf2 * log(n/df2)`.
fn exact_cmp(tf1: u64, df1: u64, tf2: u64, df2: u64, n: u64) -> Ordering {
    let zero1 = tf1 == 0 || df1 == 0 || df1 >= n;
    let zero2 = tf2 == 0 || df2 == 0 || df2 >= n;
    match (zero1, zero2) {
        (true, true) => return Ordering::Equal,
        (true, false) => return Ordering::Less,
        (false, true) => return Ordering::Greater,
        _ => {}
    }
    if (tf1, df1) == (tf2, df2) {
        return Ordering::Equal;
    }
    // (n/df1)^tf1 vs (n/df2)^tf2  <=>  n^tf1 * df2^tf2 vs n^tf2 * df1^tf1
    let (left_extra, right_extra) = if tf1 >= tf2 {
        (tf1 - tf2, 0)
    } else {
        (0, tf2 - tf1)
    };
    let n = BigUint::from(n);
    let left = n.pow(left_extra as u32) * BigUint::from(df2).pow(tf2 as u32);
    let right = n.pow(right_extra as u32) * BigUint::from(df1).pow(tf1 as u32);
    left.cmp(&right)
}

const NEAR_TIE: f64 = 1e-9;

fn cmp_scores(a: &RankedTerm, b: &RankedTerm, n: u64) -> Ordering {
    let scale = a.score.abs().max(b.score.abs());
    let by_score = if (a.score - b.score).abs() <= NEAR_TIE * scale {
        exact_cmp(a.tf, a.df, b.tf, b.df, n)
    } else {
        a.score.partial_cmp(&b.score).unwrap_or(Ordering::Equal)
    };
    by_score.reverse().then_with(|| a.term.cmp(&b.term))
}

/// Ranks a document's terms against precomputed document frequencies.
pub fn rank_with(
    document: &TokenizedDocument,
    df: &HashMap<&str, u64>,
    corpus_size: u64,
    base: LogBase,
) -> Vec<RankedTerm> {
    let mut ranked: Vec<RankedTerm> = document
        .term_counts()
        .iter()
        .map(|(term, &tf)| {
            let df = df.get(term.as_str()).copied().unwrap_or(0);
            RankedTerm {
                term: term.clone(),
                rank: 0,
                tf,
                df,
                score: tf_idf_value(tf, df, corpus_size, base),
            }
        })
        .collect();
    ranked.sort_by(|a, b| cmp_scores(a, b, corpus_size));
    for (i, r) in ranked.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    ranked
}

pub fn rank_terms(document: &TokenizedDocument, corpus: &Corpus) -> Vec<RankedTerm> {
    rank_terms_in_base(document, corpus, LogBase::Natural)
}

pub fn rank_terms_in_base(
    document: &TokenizedDocument,
    corpus: &Corpus,
    base: LogBase,
) -> Vec<RankedTerm> {
    let df = document_frequencies(corpus);
    rank_with(document, &df, corpus.len() as u64, base)
}

/// Per-document rank lookups for one corpus, built once and queried per term.
#[derive(Debug, Clone)]
pub struct TfidfIndex {
    label: CorpusLabel,
    ranks: Vec<(String, HashMap<String, usize>)>,
}

impl TfidfIndex {
    pub fn build(corpus: &Corpus) -> Self {
        Self::build_in_base(corpus, LogBase::Natural)
    }

    pub fn build_in_base(corpus: &Corpus, base: LogBase) -> Self {
        let df = document_frequencies(corpus);
        let n = corpus.len() as u64;
        let ranks = corpus
            .documents()
            .par_iter()
            .map(|doc| {
                let positions = rank_with(doc, &df, n, base)
                    .into_iter()
                    .map(|r| (r.term, r.rank))
                    .collect();
                (doc.id().to_string(), positions)
            })
            .collect();
        TfidfIndex {
            label: corpus.label(),
            ranks,
        }
    }

    pub fn mean_rank(&self, term: &str) -> MeanRank {
        let per_doc_ranks: Vec<(String, usize)> = self
            .ranks
            .iter()
            .filter_map(|(id, positions)| positions.get(term).map(|&r| (id.clone(), r)))
            .collect();
        let mean_rank = if per_doc_ranks.is_empty() {
            None
        } else {
            let sum: usize = per_doc_ranks.iter().map(|(_, r)| r).sum();
            Some(sum as f64 / per_doc_ranks.len() as f64)
        };
        MeanRank {
            term: term.to_string(),
            label: self.label,
            per_doc_ranks,
            mean_rank,
        }
    }
}

pub fn mean_rank(term: &str, corpus: &Corpus) -> MeanRank {
    TfidfIndex::build(corpus).mean_rank(term)
}

/// One row of the positive-vs-negative mean-rank comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankComparison {
    pub term: String,
    pub mean_rank_cp: Option<f64>,
    pub mean_rank_cn: Option<f64>,
}

pub fn compare_mean_ranks<'a, I>(
    terms: I,
    positive: &Corpus,
    negative: &Corpus,
) -> Vec<RankComparison>
where
    I: IntoIterator<Item = &'a str>,
{
    let pos = TfidfIndex::build(positive);
    let neg = TfidfIndex::build(negative);
    terms
        .into_iter()
        .map(|term| RankComparison {
            term: term.to_string(),
            mean_rank_cp: pos.mean_rank(term).mean_rank,
            mean_rank_cn: neg.mean_rank(term).mean_rank,
        })
        .collect()
}
