//! Candidate filtering and score-distribution summaries.
//!
//! A term makes the final report when all three hold:
//!
//! 1. it is a lexicon member;
//! 2. `b > b_min` (strict);
//! 3. `a > threshold` (strict), where the threshold is the nearest-rank
//!    percentile of the a-scores of the *whole* term universe.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::scoring::{ScoreTable, TermStats};

pub const DEFAULT_PERCENTILE: f64 = 75.0;
pub const DEFAULT_B_MIN: f64 = 0.5;
pub const DEFAULT_BINS: usize = 20;
/// Percentiles always reported in the distribution summary.
pub const SUMMARY_PERCENTILES: [f64; 4] = [25.0, 50.0, 75.0, 90.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FilterConfig {
    pub percentile: f64,
    pub b_min: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            percentile: DEFAULT_PERCENTILE,
            b_min: DEFAULT_B_MIN,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        validate_percentile(self.percentile)?;
        if !self.b_min.is_finite() {
            return Err(Error::validation(format!(
                "b_min must be finite, got {}",
                self.b_min
            )));
        }
        Ok(())
    }
}

fn validate_percentile(p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 && p < 100.0 {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "percentile must be strictly between 0 and 100, got {p}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub term: String,
    pub a: f64,
    pub b: f64,
    pub dist: f64,
    pub n_pos: u64,
    pub n_total: u64,
    pub doc_count_pos: u64,
}

impl From<&TermStats> for ReportRow {
    fn from(s: &TermStats) -> Self {
        ReportRow {
            term: s.term.clone(),
            a: s.a,
            b: s.b,
            dist: s.dist,
            n_pos: s.n_pos,
            n_total: s.n_total,
            doc_count_pos: s.doc_count_pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterminantReport {
    pub threshold_value: f64,
    pub percentile: f64,
    pub b_min: f64,
    pub universe_size: usize,
    /// Descending `a`, then ascending term.
    pub rows: Vec<ReportRow>,
}

/// Nearest-rank percentile: the element at 1-based index `ceil(p/100 * n)` of
/// the ascending sort.
pub fn percentile_threshold(scores: &[f64], p: f64) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::validation(
            "cannot take a percentile of an empty score list",
        ));
    }
    validate_percentile(p)?;
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(nearest_rank(&sorted, p))
}

fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = (p * n as f64 / 100.0).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

pub fn filter_candidates(
    table: &ScoreTable,
    lexicon: &Lexicon,
    cfg: &FilterConfig,
) -> Result<DeterminantReport> {
    cfg.validate()?;
    if table.is_empty() {
        return Err(Error::validation(
            "score table is empty: the positive corpus has no terms",
        ));
    }
    let threshold_value = percentile_threshold(&table.a_scores(), cfg.percentile)?;
    let mut rows: Vec<ReportRow> = table
        .iter()
        .filter(|s| s.a > threshold_value && s.b > cfg.b_min && lexicon.contains(&s.term))
        .map(ReportRow::from)
        .collect();
    rows.sort_by(|x, y| y.a.total_cmp(&x.a).then_with(|| x.term.cmp(&y.term)));
    Ok(DeterminantReport {
        threshold_value,
        percentile: cfg.percentile,
        b_min: cfg.b_min,
        universe_size: table.len(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QqPoint {
    pub theoretical: f64,
    pub empirical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreDistribution {
    pub count: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub sd: f64,
    pub bin_width: f64,
    pub histogram: Vec<HistogramBin>,
    /// `(requested percentile, nearest-rank value)`, ascending.
    pub percentiles: Vec<(f64, f64)>,
    pub qq: Vec<QqPoint>,
}

pub fn distribution_summary(table: &ScoreTable, bins: usize) -> Result<ScoreDistribution> {
    summarize_scores(&table.a_scores(), bins, &SUMMARY_PERCENTILES)
}

/// Histogram over `[0, 1]` in `bins` equal-width bins (1.0 falls in the last
/// one), summary statistics, requested percentiles and normal Q-Q pairs.
pub fn summarize_scores(
    scores: &[f64],
    bins: usize,
    percentiles: &[f64],
) -> Result<ScoreDistribution> {
    if scores.is_empty() {
        return Err(Error::validation("cannot summarize an empty score list"));
    }
    if bins == 0 {
        return Err(Error::validation("histogram needs at least one bin"));
    }
    for &p in percentiles {
        validate_percentile(p)?;
    }

    let n = scores.len();
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mean = sorted.iter().sum::<f64>() / n as f64;
    let var = sorted.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    let sd = var.sqrt();

    let bin_width = 1.0 / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in &sorted {
        let idx = ((x * bins as f64).floor().max(0.0) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let histogram = counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            lower: i as f64 / bins as f64,
            count,
        })
        .collect();

    let mut requested: Vec<f64> = percentiles.to_vec();
    requested.sort_by(f64::total_cmp);
    requested.dedup();
    let percentiles = requested
        .into_iter()
        .map(|p| (p, nearest_rank(&sorted, p)))
        .collect();

    let normal = Normal::standard();
    let qq = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let q = (i as f64 + 0.5) / n as f64;
            QqPoint {
                theoretical: mean + sd * normal.inverse_cdf(q),
                empirical: x,
            }
        })
        .collect();

    Ok(ScoreDistribution {
        count: n,
        mean,
        sd,
        bin_width,
        histogram,
        percentiles,
        qq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_pair, Corpus, CorpusLabel, TokenizedDocument};
    use crate::scoring::score_all;

    #[test]
    fn nearest_rank_examples() {
        assert_eq!(
            percentile_threshold(&[0.1, 0.2, 0.3, 0.4], 75.0).unwrap(),
            0.3
        );
        assert_eq!(
            percentile_threshold(&[0.4, 0.1, 0.3, 0.2], 75.0).unwrap(),
            0.3
        );
        assert_eq!(percentile_threshold(&[0.42], 1.0).unwrap(), 0.42);
        assert_eq!(percentile_threshold(&[0.42], 99.0).unwrap(), 0.42);
        assert_eq!(percentile_threshold(&[0.7; 5], 75.0).unwrap(), 0.7);
        // 7 * 100 / 100 is exactly 7; the 7th of 100 values.
        let v: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(percentile_threshold(&v, 7.0).unwrap(), 7.0);
    }

    #[test]
    fn percentile_errors() {
        assert!(percentile_threshold(&[], 75.0).is_err());
        assert!(percentile_threshold(&[0.1], 0.0).is_err());
        assert!(percentile_threshold(&[0.1], 100.0).is_err());
        assert!(percentile_threshold(&[0.1], f64::NAN).is_err());
    }

    fn table(pos: Vec<TokenizedDocument>, neg: Vec<TokenizedDocument>) -> ScoreTable {
        let pair = build_pair(
            Corpus::new(CorpusLabel::Positive, pos).unwrap(),
            Corpus::new(CorpusLabel::Negative, neg).unwrap(),
        )
        .unwrap();
        score_all(&pair).unwrap()
    }

    fn doc(id: &str, counts: &[(&str, u64)]) -> TokenizedDocument {
        TokenizedDocument::from_counts(id, counts.iter().map(|&(t, c)| (t, c)))
    }

    #[test]
    fn all_equal_scores_yield_empty_report() {
        let t = table(vec![doc("p", &[("a", 1), ("b", 1), ("c", 1)])], vec![]);
        let lex = Lexicon::from_terms(["a", "b", "c"], "test");
        let r = filter_candidates(&t, &lex, &FilterConfig::default()).unwrap();
        assert_eq!(r.threshold_value, 1.0);
        assert!(r.rows.is_empty());
        assert_eq!(r.universe_size, 3);
    }

    #[test]
    fn b_exactly_half_is_excluded() {
        // "half": b = 2/4, dist = 1 -> a = 0.75. Eight fillers score 0.375.
        let fillers: Vec<String> = (0..8).map(|i| format!("g{i}")).collect();
        let mut p0: Vec<(&str, u64)> = fillers.iter().map(|f| (f.as_str(), 1)).collect();
        p0.push(("half", 1));
        let n2: Vec<(&str, u64)> = fillers.iter().map(|f| (f.as_str(), 3)).collect();
        let pos = vec![doc("p0", &p0), doc("p1", &[("half", 1)])];
        let neg = vec![
            doc("n0", &[("half", 1)]),
            doc("n1", &[("half", 1)]),
            doc("n2", &n2),
        ];
        let t = table(pos, neg);
        let half = t.get("half").unwrap();
        assert_eq!(half.b, 0.5);
        assert!(half.a > percentile_threshold(&t.a_scores(), 75.0).unwrap());
        let lex = Lexicon::from_terms(["half", "g0", "g1"], "test");
        let r = filter_candidates(&t, &lex, &FilterConfig::default()).unwrap();
        assert!(r.rows.is_empty());
    }

    #[test]
    fn rows_sorted_desc_a_then_term() {
        let t = table(
            vec![
                doc("p1", &[("x", 1), ("y", 1), ("z", 1), ("w", 1)]),
                doc("p2", &[("x", 1), ("y", 1), ("q", 1), ("r", 1), ("s", 1)]),
            ],
            vec![doc(
                "n1",
                &[("q", 5), ("r", 5), ("s", 5), ("z", 5), ("w", 5)],
            )],
        );
        let lex = Lexicon::from_terms(["x", "y", "z"], "test");
        let r = filter_candidates(
            &t,
            &lex,
            &FilterConfig {
                percentile: 50.0,
                b_min: 0.5,
            },
        )
        .unwrap();
        let terms: Vec<_> = r.rows.iter().map(|r| r.term.as_str()).collect();
        assert_eq!(terms, vec!["x", "y"]);
    }

    #[test]
    fn summary_two_point() {
        let d = summarize_scores(&[0.0, 1.0], 20, &SUMMARY_PERCENTILES).unwrap();
        assert_eq!(d.mean, 0.5);
        assert_eq!(d.sd, 0.5);
        assert_eq!(d.histogram.len(), 20);
        assert_eq!(d.histogram[0].count, 1);
        assert_eq!(d.histogram[19].count, 1);
        assert_eq!(d.histogram.iter().map(|b| b.count).sum::<usize>(), 2);
    }

    #[test]
    fn summary_single_score() {
        let d = summarize_scores(&[0.37], 10, &[50.0]).unwrap();
        assert_eq!(d.sd, 0.0);
        let nonempty: Vec<_> = d.histogram.iter().filter(|b| b.count > 0).collect();
        assert_eq!(nonempty.len(), 1);
        assert!((nonempty[0].lower - 0.3).abs() < 1e-12);
        assert_eq!(
            d.qq,
            vec![QqPoint {
                theoretical: 0.37,
                empirical: 0.37
            }]
        );
        assert_eq!(d.percentiles, vec![(50.0, 0.37)]);
    }

    #[test]
    fn qq_is_symmetric_for_symmetric_data() {
        let d = summarize_scores(&[0.2, 0.4, 0.6, 0.8], 4, &[50.0]).unwrap();
        assert!((d.qq[0].theoretical - 0.5 + (d.qq[3].theoretical - 0.5)).abs() < 1e-12);
        assert!(d.qq[0].theoretical < d.qq[1].theoretical);
    }

    #[test]
    fn summary_errors() {
        assert!(summarize_scores(&[], 10, &[]).is_err());
        assert!(summarize_scores(&[0.5], 0, &[]).is_err());
    }
}
