//! Property checks shared by the proptest suite and the acceptance runner.
//! Each takes a generated instance and fails with a message on violation.

use std::collections::BTreeSet;

use determinant::corpus::CorpusLabel;
use determinant::lexicon::Lexicon;
use determinant::report::{filter_candidates, percentile_threshold, FilterConfig};
use determinant::scoring::{count_stats, score_all};
use determinant::tfidf::{rank_terms_in_base, LogBase, TfidfIndex};
use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::TestCaseError;

use super::{oracle_nearest_rank, oracle_scores, ratio_f64, to_corpus, RawDoc, RawPair};

type Check = Result<(), TestCaseError>;

fn universe(raw: &RawPair) -> Vec<String> {
    raw.pos
        .iter()
        .flat_map(|d| d.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Library scores equal the exact-rational recount for every term of B.
pub fn oracle_agreement(raw: &RawPair) -> Check {
    let pair = raw.to_pair();
    let table = score_all(&pair).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let oracle = oracle_scores(raw);
    prop_assert_eq!(table.len(), oracle.len());
    for (term, o) in &oracle {
        let s = table
            .get(term)
            .ok_or_else(|| TestCaseError::fail(format!("{term} missing")))?;
        prop_assert_eq!(
            (s.n_pos, s.n_total, s.doc_count_pos),
            (o.n_pos, o.n_total, o.doc_count_pos)
        );
        prop_assert_eq!(
            count_stats(&pair, term).unwrap(),
            (o.n_pos, o.n_total, o.doc_count_pos)
        );
        for (got, want) in [(s.b, o.b), (s.dist, o.dist), (s.a, o.a)] {
            let want = ratio_f64(want);
            prop_assert!((got - want).abs() <= 1e-12, "{term}: {got} vs {want}");
        }
        prop_assert!(s.b > 0.0 && s.b <= 1.0);
        prop_assert!(s.dist > 0.0 && s.dist <= 1.0);
        prop_assert!(s.a > 0.0 && s.a <= 1.0);
        prop_assert_eq!(
            s.a == 1.0,
            s.n_pos == s.n_total && s.doc_count_pos == table.dc_p()
        );
    }
    Ok(())
}

/// One extra occurrence of a B term in the negative corpus lowers b and a
/// and leaves dist alone.
pub fn negative_evidence(raw: &RawPair, term: Index, doc: Index) -> Check {
    let terms = universe(raw);
    let t = term.get(&terms);
    let before = score_all(&raw.to_pair()).unwrap();
    let mut raw2 = raw.clone();
    let d = doc.index(raw2.neg.len());
    *raw2.neg[d].entry(t.clone()).or_insert(0) += 1;
    let after = score_all(&raw2.to_pair()).unwrap();
    let (x, y) = (before.get(t).unwrap(), after.get(t).unwrap());
    prop_assert!(y.b < x.b, "b: {} -> {}", x.b, y.b);
    prop_assert!(y.a < x.a, "a: {} -> {}", x.a, y.a);
    prop_assert_eq!(y.dist, x.dist);
    Ok(())
}

/// Moving one occurrence of a term into a positive document that lacked it
/// keeps b, raises dist and a.
pub fn spread_evidence(raw: &RawPair, term: Index, from: Index, to: Index) -> Check {
    let terms = universe(raw);
    let t = term.get(&terms).clone();
    let n = raw.pos.len();
    let from = from.index(n);
    let mut to = to.index(n);
    if to == from {
        to = (from + 1) % n;
    }
    let mut base = raw.clone();
    let c = base.pos[from].entry(t.clone()).or_insert(0);
    *c = (*c).max(2);
    base.pos[to].remove(&t);
    let mut moved = base.clone();
    *moved.pos[from].get_mut(&t).unwrap() -= 1;
    moved.pos[to].insert(t.clone(), 1);

    let before = score_all(&base.to_pair()).unwrap();
    let after = score_all(&moved.to_pair()).unwrap();
    let (x, y) = (before.get(&t).unwrap(), after.get(&t).unwrap());
    prop_assert_eq!(y.b, x.b);
    prop_assert!(y.dist > x.dist);
    prop_assert!(y.a > x.a);
    Ok(())
}

/// Scaling every count of both corpora by k leaves all scores unchanged.
pub fn duplication_invariance(raw: &RawPair, k: u64) -> Check {
    let scale = |docs: &[RawDoc]| -> Vec<RawDoc> {
        docs.iter()
            .map(|d| d.iter().map(|(t, c)| (t.clone(), c * k)).collect())
            .collect()
    };
    let scaled = RawPair {
        pos: scale(&raw.pos),
        neg: scale(&raw.neg),
    };
    let x = score_all(&raw.to_pair()).unwrap();
    let y = score_all(&scaled.to_pair()).unwrap();
    for (s, t) in x.iter().zip(y.iter()) {
        prop_assert_eq!(&s.term, &t.term);
        prop_assert_eq!((s.b, s.dist, s.a), (t.b, t.dist, t.a));
    }
    Ok(())
}

/// A term present in every document scores zero everywhere; ranks do not
/// depend on the logarithm base.
pub fn tfidf_laws(docs: &[RawDoc], doc: Index) -> Check {
    let corpus = to_corpus(CorpusLabel::Positive, "d", docs);
    let d = &corpus.documents()[doc.index(docs.len())];
    let natural = rank_terms_in_base(d, &corpus, LogBase::Natural);
    for other in [LogBase::Two, LogBase::Ten] {
        let ranked = rank_terms_in_base(d, &corpus, other);
        let a: Vec<_> = natural.iter().map(|r| (&r.term, r.rank)).collect();
        let b: Vec<_> = ranked.iter().map(|r| (&r.term, r.rank)).collect();
        prop_assert_eq!(a, b, "ranks differ for {:?}", other);
    }
    for (i, r) in natural.iter().enumerate() {
        prop_assert_eq!(r.rank, i + 1);
        if r.df == docs.len() as u64 {
            prop_assert_eq!(r.score, 0.0);
        }
        prop_assert!(r.score >= 0.0);
    }
    for w in natural.windows(2) {
        prop_assert!(w[0].score >= w[1].score - 1e-9);
    }
    Ok(())
}

/// Mean rank is NA exactly when no document holds the term, and otherwise
/// averages one rank per containing document.
pub fn mean_rank_semantics(docs: &[RawDoc], term: &str) -> Check {
    let corpus = to_corpus(CorpusLabel::Negative, "d", docs);
    let mr = TfidfIndex::build(&corpus).mean_rank(term);
    let holders = docs.iter().filter(|d| d.contains_key(term)).count();
    prop_assert_eq!(mr.per_doc_ranks.len(), holders);
    match mr.mean_rank {
        None => prop_assert_eq!(holders, 0),
        Some(m) => {
            prop_assert!(holders > 0);
            let sum: usize = mr.per_doc_ranks.iter().map(|(_, r)| r).sum();
            prop_assert!((m - sum as f64 / holders as f64).abs() < 1e-12);
            prop_assert!(m >= 1.0);
        }
    }
    Ok(())
}

/// The report holds exactly the lexicon terms of B whose a clears the
/// percentile threshold and whose b clears b_min, both strictly.
pub fn filter_exactness(
    raw: &RawPair,
    picks: &[bool],
    extra: &[String],
    percentile: f64,
    b_min: f64,
) -> Check {
    let terms = universe(raw);
    let mut lex: BTreeSet<String> = terms
        .iter()
        .zip(picks.iter().cycle())
        .filter(|(_, &p)| p)
        .map(|(t, _)| t.clone())
        .collect();
    lex.extend(extra.iter().cloned());
    if lex.is_empty() {
        lex.insert("zz-absent".to_string());
    }
    let lexicon = Lexicon::from_terms(lex.iter(), "generated");
    let table = score_all(&raw.to_pair()).unwrap();
    let cfg = FilterConfig { percentile, b_min };
    let report = filter_candidates(&table, &lexicon, &cfg).unwrap();

    let oracle = oracle_scores(raw);
    let a_values: Vec<f64> = oracle.values().map(|o| ratio_f64(o.a)).collect();
    let threshold = oracle_nearest_rank(&a_values, percentile);
    prop_assert_eq!(report.threshold_value, threshold);
    prop_assert_eq!(
        percentile_threshold(&a_values, percentile).unwrap(),
        threshold
    );

    let expected: BTreeSet<&String> = oracle
        .iter()
        .filter(|(t, o)| ratio_f64(o.a) > threshold && ratio_f64(o.b) > b_min && lex.contains(*t))
        .map(|(t, _)| t)
        .collect();
    let got: BTreeSet<&String> = report.rows.iter().map(|r| &r.term).collect();
    prop_assert_eq!(got, expected);
    for w in report.rows.windows(2) {
        prop_assert!(w[0].a > w[1].a || (w[0].a == w[1].a && w[0].term < w[1].term));
    }
    // nearest rank leaves at most (100 - p)% of B above the threshold
    let above = a_values.iter().filter(|&&a| a > threshold).count();
    let n = a_values.len() as f64;
    prop_assert!(above as f64 <= n * (100.0 - percentile) / 100.0 + 1.0);
    Ok(())
}
