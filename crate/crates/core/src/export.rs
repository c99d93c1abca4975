//! CSV and JSON writers for reports, distributions and rank comparisons.
//!
//! Column orders are fixed. Reals are written with six decimal places in CSV
//! and rounded to six decimals in JSON. Output is byte-identical for
//! identical inputs.
//!
//! | file                   | columns                                                     |
//! |------------------------|-------------------------------------------------------------|
//! | `report.csv`           | `term,a_score,b_score,dist,n_pos,n_total,doc_count_pos`     |
//! | `distribution.csv`     | `bin_lower,count`                                           |
//! | `distribution.json`    | `{count, mean, sd, percentiles}`                            |
//! | `qq.csv`               | `theoretical,empirical`                                     |
//! | `tfidf_comparison.csv` | `term,mean_rank_cp,mean_rank_cn` (`NA` when absent)         |

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{DeterminantReport, ScoreDistribution};
use crate::tfidf::RankComparison;

pub const REPORT_CSV: &str = "report.csv";
pub const REPORT_JSON: &str = "report.json";
pub const DISTRIBUTION_CSV: &str = "distribution.csv";
pub const DISTRIBUTION_JSON: &str = "distribution.json";
pub const QQ_CSV: &str = "qq.csv";
pub const TFIDF_CSV: &str = "tfidf_comparison.csv";

pub const REPORT_HEADER: [&str; 7] = [
    "term",
    "a_score",
    "b_score",
    "dist",
    "n_pos",
    "n_total",
    "doc_count_pos",
];
pub const TFIDF_HEADER: [&str; 3] = ["term", "mean_rank_cp", "mean_rank_cn"];
pub const NA: &str = "NA";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

fn round6(x: f64) -> f64 {
    let r = (x * 1e6).round() / 1e6;
    // avoid "-0.0"
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn csv_bytes<I, R>(header: &[&str], records: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    // Writing to a Vec cannot fail.
    w.write_record(header).expect("in-memory write");
    for rec in records {
        let rec: Vec<String> = rec.into_iter().collect();
        w.write_record(&rec).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn report_csv(report: &DeterminantReport) -> Vec<u8> {
    csv_bytes(
        &REPORT_HEADER,
        report.rows.iter().map(|r| {
            vec![
                r.term.clone(),
                fixed(r.a),
                fixed(r.b),
                fixed(r.dist),
                r.n_pos.to_string(),
                r.n_total.to_string(),
                r.doc_count_pos.to_string(),
            ]
        }),
    )
}

#[derive(Serialize)]
struct JsonRow<'a> {
    term: &'a str,
    a_score: f64,
    b_score: f64,
    dist: f64,
    n_pos: u64,
    n_total: u64,
    doc_count_pos: u64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    threshold: f64,
    percentile: f64,
    b_min: f64,
    universe_size: usize,
    rows: Vec<JsonRow<'a>>,
}

pub fn report_json(report: &DeterminantReport) -> Vec<u8> {
    let doc = JsonReport {
        threshold: round6(report.threshold_value),
        percentile: report.percentile,
        b_min: report.b_min,
        universe_size: report.universe_size,
        rows: report
            .rows
            .iter()
            .map(|r| JsonRow {
                term: &r.term,
                a_score: round6(r.a),
                b_score: round6(r.b),
                dist: round6(r.dist),
                n_pos: r.n_pos,
                n_total: r.n_total,
                doc_count_pos: r.doc_count_pos,
            })
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("report serializes");
    out.push(b'\n');
    out
}

pub fn distribution_csv(dist: &ScoreDistribution) -> Vec<u8> {
    csv_bytes(
        &["bin_lower", "count"],
        dist.histogram
            .iter()
            .map(|b| vec![fixed(b.lower), b.count.to_string()]),
    )
}

#[derive(Serialize)]
struct JsonDistribution {
    count: usize,
    mean: f64,
    sd: f64,
    percentiles: BTreeMap<String, f64>,
}

pub fn distribution_json(dist: &ScoreDistribution) -> Vec<u8> {
    let doc = JsonDistribution {
        count: dist.count,
        mean: round6(dist.mean),
        sd: round6(dist.sd),
        percentiles: dist
            .percentiles
            .iter()
            .map(|&(p, v)| (format!("{p}"), round6(v)))
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("distribution serializes");
    out.push(b'\n');
    out
}

pub fn qq_csv(dist: &ScoreDistribution) -> Vec<u8> {
    csv_bytes(
        &["theoretical", "empirical"],
        dist.qq
            .iter()
            .map(|q| vec![fixed(q.theoretical), fixed(q.empirical)]),
    )
}

fn rank_cell(r: Option<f64>) -> String {
    r.map(fixed).unwrap_or_else(|| NA.to_string())
}

pub fn tfidf_csv(rows: &[RankComparison]) -> Vec<u8> {
    csv_bytes(
        &TFIDF_HEADER,
        rows.iter().map(|r| {
            vec![
                r.term.clone(),
                rank_cell(r.mean_rank_cp),
                rank_cell(r.mean_rank_cn),
            ]
        }),
    )
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Writes the report in the requested format(s), plus the distribution,
/// Q-Q and (when given) TF-IDF comparison files. Returns the paths written.
pub fn emit_report(
    report: &DeterminantReport,
    distribution: &ScoreDistribution,
    tfidf: Option<&[RankComparison]>,
    format: OutputFormat,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut files: Vec<(&str, Vec<u8>)> = Vec::new();
    if format.csv() {
        files.push((REPORT_CSV, report_csv(report)));
    }
    if format.json() {
        files.push((REPORT_JSON, report_json(report)));
    }
    files.push((DISTRIBUTION_CSV, distribution_csv(distribution)));
    files.push((DISTRIBUTION_JSON, distribution_json(distribution)));
    files.push((QQ_CSV, qq_csv(distribution)));
    if let Some(rows) = tfidf {
        files.push((TFIDF_CSV, tfidf_csv(rows)));
    }

    let mut written = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let path = out_dir.join(name);
        write_file(&path, &bytes)?;
        written.push(path);
    }
    Ok(written)
}
