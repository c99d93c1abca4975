#ifndef DETERMINANT_H
#define DETERMINANT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum DtCorpus {
  DT_CORPUS_POSITIVE = 0,
  DT_CORPUS_NEGATIVE = 1,
} DtCorpus;

typedef enum DtStatus {
  DT_STATUS_OK = 0,
  DT_STATUS_VALIDATION = 1,
  DT_STATUS_IO = 2,
  DT_STATUS_ENCODING = 3,
  DT_STATUS_NULL_POINTER = 4,
  DT_STATUS_INVALID_UTF8 = 5,
  DT_STATUS_NOT_IN_UNIVERSE = 6,
  DT_STATUS_OUT_OF_RANGE = 7,
  DT_STATUS_PANIC = 8,
} DtStatus;

typedef struct DtConfig DtConfig;

typedef struct DtLexicon DtLexicon;

typedef struct DtPair DtPair;

typedef struct DtReport DtReport;

typedef struct DtScoreTable DtScoreTable;

/**
 * Scores of one term. `b`, `dist` and `a` lie in (0, 1].
 */
typedef struct DtTermStats {
  uint64_t n_pos;
  uint64_t n_total;
  uint64_t doc_count_pos;
  double b;
  double dist;
  double a;
} DtTermStats;

/**
 * One report row. `term` points into the report and lives until
 * `dt_report_free`.
 */
typedef struct DtReportRow {
  const char *term;
  struct DtTermStats stats;
} DtReportRow;

/**
 * Message for the most recent failure on this thread; empty after a success.
 * Valid until the next `dt_*` call on the same thread.
 */
const char *dt_last_error(void);

/**
 * Library version as a static string.
 */
const char *dt_version(void);

/**
 * Bundled English stopwords and lemma table.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
enum DtStatus dt_config_new(struct DtConfig **out);

/**
 * Configuration from a stopword file and a lemma table; either may be null
 * to keep the bundled list.
 *
 * # Safety
 * Paths must be null or NUL-terminated strings; `out` must be valid.
 */
enum DtStatus dt_config_from_files(const char *stopwords,
                                   const char *lemmas,
                                   struct DtConfig **out);

/**
 * # Safety
 * `config` must be null or a handle from this library, freed at most once.
 */
void dt_config_free(struct DtConfig *config);

/**
 * Normalizes a single token. `*out` is set to null when the token is
 * dropped (stopword, too short, empty); otherwise to a string the caller
 * releases with `dt_string_free`.
 *
 * # Safety
 * `config` must be a live handle, `raw` a NUL-terminated string and `out` valid.
 */
enum DtStatus dt_normalize_token(const struct DtConfig *config, const char *raw, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed at most once.
 */
void dt_string_free(char *s);

/**
 * Loads both corpora from their manifests.
 *
 * # Safety
 * Paths must be NUL-terminated strings, `config` a live handle, `out` valid.
 */
enum DtStatus dt_pair_load(const char *positive_manifest,
                           const char *negative_manifest,
                           const struct DtConfig *config,
                           struct DtPair **out);

/**
 * Number of documents on one side of the pair.
 *
 * # Safety
 * `pair` must be null or a live handle.
 */
size_t dt_pair_len(const struct DtPair *pair, enum DtCorpus side);

/**
 * # Safety
 * `pair` must be null or a handle from this library, freed at most once.
 */
void dt_pair_free(struct DtPair *pair);

/**
 * Scores from raw counts, without a corpus.
 *
 * # Safety
 * `out` must be valid.
 */
enum DtStatus dt_score(uint64_t n_pos,
                       uint64_t n_total,
                       uint64_t doc_count_pos,
                       uint64_t dc_p,
                       struct DtTermStats *out);

/**
 * Scores every term of the positive corpus.
 *
 * # Safety
 * `pair` must be a live handle and `out` valid.
 */
enum DtStatus dt_score_all(const struct DtPair *pair, struct DtScoreTable **out);

/**
 * Number of scored terms.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t dt_score_table_len(const struct DtScoreTable *table);

/**
 * Looks up one term; `DT_STATUS_NOT_IN_UNIVERSE` when the positive corpus
 * never uses it.
 *
 * # Safety
 * `table` must be a live handle, `term` a NUL-terminated string, `out` valid.
 */
enum DtStatus dt_score_table_get(const struct DtScoreTable *table,
                                 const char *term,
                                 struct DtTermStats *out);

/**
 * # Safety
 * `table` must be null or a handle from this library, freed at most once.
 */
void dt_score_table_free(struct DtScoreTable *table);

/**
 * Loads a lexicon, normalizing entries with `config`.
 *
 * # Safety
 * `path` must be a NUL-terminated string, `config` a live handle, `out` valid.
 */
enum DtStatus dt_lexicon_load(const char *path,
                              const struct DtConfig *config,
                              struct DtLexicon **out);

/**
 * # Safety
 * `lexicon` must be null or a handle from this library, freed at most once.
 */
void dt_lexicon_free(struct DtLexicon *lexicon);

/**
 * Applies the percentile, b_min and lexicon filters. Rows come out in
 * descending score order.
 *
 * # Safety
 * `table` and `lexicon` must be live handles and `out` valid.
 */
enum DtStatus dt_report_new(const struct DtScoreTable *table,
                            const struct DtLexicon *lexicon,
                            double percentile,
                            double b_min,
                            struct DtReport **out);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
size_t dt_report_len(const struct DtReport *report);

/**
 * Score value at the configured percentile, or NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double dt_report_threshold(const struct DtReport *report);

/**
 * # Safety
 * `report` must be a live handle and `out` valid.
 */
enum DtStatus dt_report_row(const struct DtReport *report, size_t index, struct DtReportRow *out);

/**
 * Writes the report as CSV, the same bytes the CLI writes to report.csv.
 *
 * # Safety
 * `report` must be a live handle and `path` a NUL-terminated string.
 */
enum DtStatus dt_report_write_csv(const struct DtReport *report, const char *path);

/**
 * # Safety
 * `report` must be null or a handle from this library, freed at most once.
 */
void dt_report_free(struct DtReport *report);

/**
 * Mean TF-IDF rank of `term` across the documents of one corpus that
 * contain it. `*present` is false (and `*mean_rank` NaN) when none does.
 *
 * # Safety
 * `pair` must be a live handle, `term` a NUL-terminated string, outputs valid.
 */
enum DtStatus dt_mean_rank(const struct DtPair *pair,
                           enum DtCorpus side,
                           const char *term,
                           double *mean_rank,
                           bool *present);

#endif  /* DETERMINANT_H */
