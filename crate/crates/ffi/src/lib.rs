//! C ABI over the `determinant` library.
//!
//! Every object crosses the boundary as an opaque handle created by a
//! `dt_*_new`/`dt_*_load` call and released with the matching `dt_*_free`.
//! Functions return a [`DtStatus`]; on anything other than `DT_STATUS_OK`
//! the message is available from [`dt_last_error`] on the same thread.
//! Strings are NUL-terminated UTF-8. Panics never unwind into the caller.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use determinant::corpus::{build_pair, load_corpus, CorpusLabel, CorpusPair};
use determinant::error::Error;
use determinant::export;
use determinant::lexicon::{load_lexicon, Lexicon};
use determinant::normalize::{normalize_token, NormalizationConfig};
use determinant::report::{filter_candidates, DeterminantReport, FilterConfig};
use determinant::scoring::{score, score_all, ScoreTable};
use determinant::tfidf::TfidfIndex;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtStatus {
    Ok = 0,
    Validation = 1,
    Io = 2,
    Encoding = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    NotInUniverse = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtCorpus {
    Positive = 0,
    Negative = 1,
}

/// Scores of one term. `b`, `dist` and `a` lie in (0, 1].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DtTermStats {
    pub n_pos: u64,
    pub n_total: u64,
    pub doc_count_pos: u64,
    pub b: f64,
    pub dist: f64,
    pub a: f64,
}

/// One report row. `term` points into the report and lives until
/// `dt_report_free`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DtReportRow {
    pub term: *const c_char,
    pub stats: DtTermStats,
}

pub struct DtConfig(NormalizationConfig);

pub struct DtPair(CorpusPair);

pub struct DtScoreTable(ScoreTable);

pub struct DtLexicon(Lexicon);

pub struct DtReport {
    report: DeterminantReport,
    terms: Vec<CString>,
}

struct Failure {
    status: DtStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Io { .. } => DtStatus::Io,
            Error::Encoding { .. } => DtStatus::Encoding,
            Error::Validation(_) => DtStatus::Validation,
            Error::NotInUniverse(_) => DtStatus::NotInUniverse,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn fail(status: DtStatus, message: impl Into<String>) -> Failure {
    Failure {
        status,
        message: message.into(),
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let msg = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

/// Runs `f`, records any failure as the thread's last error and maps it to
/// a status. A panic inside `f` becomes `DT_STATUS_PANIC`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DtStatus {
    set_last_error("");
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let what = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".to_string());
        Err(fail(DtStatus::Panic, format!("internal panic: {what}")))
    });
    match outcome {
        Ok(()) => DtStatus::Ok,
        Err(f) => {
            set_last_error(&f.message);
            f.status
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(DtStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        fail(
            DtStatus::InvalidUtf8,
            format!("`{name}` is not valid UTF-8"),
        )
    })
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(DtStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| fail(DtStatus::NullPointer, format!("`{name}` is null")))
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

fn stats_of(s: &determinant::scoring::TermStats) -> DtTermStats {
    DtTermStats {
        n_pos: s.n_pos,
        n_total: s.n_total,
        doc_count_pos: s.doc_count_pos,
        b: s.b,
        dist: s.dist,
        a: s.a,
    }
}

/// Message for the most recent failure on this thread; empty after a success.
/// Valid until the next `dt_*` call on the same thread.
#[no_mangle]
pub extern "C" fn dt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn dt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Bundled English stopwords and lemma table.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn dt_config_new(out: *mut *mut DtConfig) -> DtStatus {
    guard(|| {
        *out_arg(out, "out")? = boxed(DtConfig(NormalizationConfig::english()));
        Ok(())
    })
}

/// Configuration from a stopword file and a lemma table; either may be null
/// to keep the bundled list.
///
/// # Safety
/// Paths must be null or NUL-terminated strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dt_config_from_files(
    stopwords: *const c_char,
    lemmas: *const c_char,
    out: *mut *mut DtConfig,
) -> DtStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let stopwords = if stopwords.is_null() {
            None
        } else {
            Some(str_arg(stopwords, "stopwords")?)
        };
        let lemmas = if lemmas.is_null() {
            None
        } else {
            Some(str_arg(lemmas, "lemmas")?)
        };
        let cfg = NormalizationConfig::from_files(stopwords.map(Path::new), lemmas.map(Path::new))?;
        *out = boxed(DtConfig(cfg));
        Ok(())
    })
}

/// # Safety
/// `config` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn dt_config_free(config: *mut DtConfig) {
    free(config)
}

/// Normalizes a single token. `*out` is set to null when the token is
/// dropped (stopword, too short, empty); otherwise to a string the caller
/// releases with `dt_string_free`.
///
/// # Safety
/// `config` must be a live handle, `raw` a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dt_normalize_token(
    config: *const DtConfig,
    raw: *const c_char,
    out: *mut *mut c_char,
) -> DtStatus {
    guard(|| {
        let cfg = ref_arg(config, "config")?;
        let raw = str_arg(raw, "raw")?;
        let out = out_arg(out, "out")?;
        *out = match normalize_token(raw, &cfg.0) {
            // normalized terms never contain NUL
            Some(term) => CString::new(term)
                .map(CString::into_raw)
                .unwrap_or(ptr::null_mut()),
            None => ptr::null_mut(),
        };
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn dt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads both corpora from their manifests.
///
/// # Safety
/// Paths must be NUL-terminated strings, `config` a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dt_pair_load(
    positive_manifest: *const c_char,
    negative_manifest: *const c_char,
    config: *const DtConfig,
    out: *mut *mut DtPair,
) -> DtStatus {
    guard(|| {
        let pos = str_arg(positive_manifest, "positive_manifest")?;
        let neg = str_arg(negative_manifest, "negative_manifest")?;
        let cfg = ref_arg(config, "config")?;
        let out = out_arg(out, "out")?;
        let pos = load_corpus(Path::new(pos), CorpusLabel::Positive, &cfg.0)?;
        let neg = load_corpus(Path::new(neg), CorpusLabel::Negative, &cfg.0)?;
        *out = boxed(DtPair(build_pair(pos, neg)?));
        Ok(())
    })
}

/// Number of documents on one side of the pair.
///
/// # Safety
/// `pair` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dt_pair_len(pair: *const DtPair, side: DtCorpus) -> usize {
    match pair.as_ref() {
        Some(p) => match side {
            DtCorpus::Positive => p.0.positive().len(),
            DtCorpus::Negative => p.0.negative().len(),
        },
        None => 0,
    }
}

/// # Safety
/// `pair` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn dt_pair_free(pair: *mut DtPair) {
    free(pair)
}

/// Scores from raw counts, without a corpus.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dt_score(
    n_pos: u64,
    n_total: u64,
    doc_count_pos: u64,
    dc_p: u64,
    out: *mut DtTermStats,
) -> DtStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let s = score(n_pos, n_total, doc_count_pos, dc_p)?;
        *out = DtTermStats {
            n_pos,
            n_total,
            doc_count_pos,
            b: s.b,
            dist: s.dist,
            a: s.a,
        };
        Ok(())
    })
}

/// Scores every term of the positive corpus.
///
/// # Safety
/// `pair` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dt_score_all(
    pair: *const DtPair,
    out: *mut *mut DtScoreTable,
) -> DtStatus {
    guard(|| {
        let pair = ref_arg(pair, "pair")?;
        let out = out_arg(out, "out")?;
        *out = boxed(DtScoreTable(score_all(&pair.0)?));
        Ok(())
    })
}

/// Number of scored terms.
///
/// # Safety
/// `table` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dt_score_table_len(table: *const DtScoreTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.len())
}

/// Looks up one term; `DT_STATUS_NOT_IN_UNIVERSE` when the positive corpus
/// never uses it.
///
/// # Safety
/// `table` must be a live handle, `term` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dt_score_table_get(
    table: *const DtScoreTable,
    term: *const c_char,
    out: *mut DtTermStats,
) -> DtStatus {
    guard(|| {
        let table = ref_arg(table, "table")?;
        let term = str_arg(term, "term")?;
        let out = out_arg(out, "out")?;
        let s = table
            .0
            .get(term)
            .ok_or_else(|| Error::NotInUniverse(term.to_string()))?;
        *out = stats_of(s);
        Ok(())
    })
}

/// # Safety
/// `table` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn dt_score_table_free(table: *mut DtScoreTable) {
    free(table)
}

/// Loads a lexicon, normalizing entries with `config`.
///
/// # Safety
/// `path` must be a NUL-terminated string, `config` a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dt_lexicon_load(
    path: *const c_char,
    config: *const DtConfig,
    out: *mut *mut DtLexicon,
) -> DtStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let cfg = ref_arg(config, "config")?;
        let out = out_arg(out, "out")?;
        *out = boxed(DtLexicon(load_lexicon(Path::new(path), &cfg.0)?));
        Ok(())
    })
}

/// # Safety
/// `lexicon` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn dt_lexicon_free(lexicon: *mut DtLexicon) {
    free(lexicon)
}

/// Applies the percentile, b_min and lexicon filters. Rows come out in
/// descending score order.
///
/// # Safety
/// `table` and `lexicon` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dt_report_new(
    table: *const DtScoreTable,
    lexicon: *const DtLexicon,
    percentile: f64,
    b_min: f64,
    out: *mut *mut DtReport,
) -> DtStatus {
    guard(|| {
        let table = ref_arg(table, "table")?;
        let lexicon = ref_arg(lexicon, "lexicon")?;
        let out = out_arg(out, "out")?;
        let report = filter_candidates(&table.0, &lexicon.0, &FilterConfig { percentile, b_min })?;
        let terms = report
            .rows
            .iter()
            .map(|r| CString::new(r.term.as_str()).unwrap_or_default())
            .collect();
        *out = boxed(DtReport { report, terms });
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dt_report_len(report: *const DtReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.rows.len())
}

/// Score value at the configured percentile, or NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dt_report_threshold(report: *const DtReport) -> f64 {
    report
        .as_ref()
        .map_or(f64::NAN, |r| r.report.threshold_value)
}

/// # Safety
/// `report` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dt_report_row(
    report: *const DtReport,
    index: usize,
    out: *mut DtReportRow,
) -> DtStatus {
    guard(|| {
        let report = ref_arg(report, "report")?;
        let out = out_arg(out, "out")?;
        let row = report.report.rows.get(index).ok_or_else(|| {
            fail(
                DtStatus::OutOfRange,
                format!(
                    "row {index} requested, report has {}",
                    report.report.rows.len()
                ),
            )
        })?;
        *out = DtReportRow {
            term: report.terms[index].as_ptr(),
            stats: DtTermStats {
                n_pos: row.n_pos,
                n_total: row.n_total,
                doc_count_pos: row.doc_count_pos,
                b: row.b,
                dist: row.dist,
                a: row.a,
            },
        };
        Ok(())
    })
}

/// Writes the report as CSV, the same bytes the CLI writes to report.csv.
///
/// # Safety
/// `report` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn dt_report_write_csv(
    report: *const DtReport,
    path: *const c_char,
) -> DtStatus {
    guard(|| {
        let report = ref_arg(report, "report")?;
        let path = str_arg(path, "path")?;
        export::write_file(Path::new(path), &export::report_csv(&report.report))?;
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn dt_report_free(report: *mut DtReport) {
    free(report)
}

/// Mean TF-IDF rank of `term` across the documents of one corpus that
/// contain it. `*present` is false (and `*mean_rank` NaN) when none does.
///
/// # Safety
/// `pair` must be a live handle, `term` a NUL-terminated string, outputs valid.
#[no_mangle]
pub unsafe extern "C" fn dt_mean_rank(
    pair: *const DtPair,
    side: DtCorpus,
    term: *const c_char,
    mean_rank: *mut f64,
    present: *mut bool,
) -> DtStatus {
    guard(|| {
        let pair = ref_arg(pair, "pair")?;
        let term = str_arg(term, "term")?;
        let mean_rank = out_arg(mean_rank, "mean_rank")?;
        let present = out_arg(present, "present")?;
        let corpus = match side {
            DtCorpus::Positive => pair.0.positive(),
            DtCorpus::Negative => pair.0.negative(),
        };
        let m = TfidfIndex::build(corpus).mean_rank(term).mean_rank;
        *present = m.is_some();
        *mean_rank = m.unwrap_or(f64::NAN);
        Ok(())
    })
}
