#include <math.h>
#include <stdio.h>
#include <string.h>

#include "determinant.h"

#define CHECK(expr)                                                         \
    do {                                                                    \
        DtStatus s_ = (expr);                                               \
        if (s_ != DT_STATUS_OK) {                                           \
            fprintf(stderr, "%s failed (%d): %s\n", #expr, s_, dt_last_error()); \
            return 1;                                                       \
        }                                                                   \
    } while (0)

int main(int argc, char **argv) {
    if (argc != 5) {
        fprintf(stderr, "usage: smoke POSITIVE NEGATIVE LEXICON OUT_CSV\n");
        return 2;
    }
    DtConfig *config = NULL;
    DtPair *pair = NULL;
    DtScoreTable *table = NULL;
    DtLexicon *lexicon = NULL;
    DtReport *report = NULL;

    CHECK(dt_config_new(&config));
    CHECK(dt_pair_load(argv[1], argv[2], config, &pair));
    CHECK(dt_score_all(pair, &table));
    CHECK(dt_lexicon_load(argv[3], config, &lexicon));
    CHECK(dt_report_new(table, lexicon, 75.0, 0.5, &report));

    DtReportRow row;
    CHECK(dt_report_row(report, 0, &row));
    printf("rows=%zu first=%s a=%.6f\n", dt_report_len(report), row.term, row.stats.a);

    DtTermStats stats;
    if (dt_score_table_get(table, "no-such-term", &stats) != DT_STATUS_NOT_IN_UNIVERSE) {
        return 1;
    }
    if (strlen(dt_last_error()) == 0) {
        return 1;
    }

    double mean;
    bool present;
    CHECK(dt_mean_rank(pair, DT_CORPUS_NEGATIVE, row.term, &mean, &present));
    printf("negative mean rank: %s\n", present ? "present" : "NA");

    CHECK(dt_report_write_csv(report, argv[4]));

    dt_report_free(report);
    dt_lexicon_free(lexicon);
    dt_score_table_free(table);
    dt_pair_free(pair);
    dt_config_free(config);
    return 0;
}
