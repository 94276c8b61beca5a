/* graphcf shared-library C API.
 *
 * Every function returns GCF_OK on success or a gcf_status error code;
 * gcf_last_error() describes the most recent failure on the calling thread.
 * Objects returned through out-parameters are owned by the caller and must
 * be released with the matching *_free function. Strings returned through
 * char** out-parameters are released with gcf_string_free().
 */
#ifndef GRAPHCF_GRAPHCF_H
#define GRAPHCF_GRAPHCF_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gcf_status {
    GCF_OK = 0,
    GCF_ERR_INVALID_ARG = 1,
    GCF_ERR_IO = 2,
    GCF_ERR_PARSE = 3,
    GCF_ERR_VALIDATION = 4,
    GCF_ERR_STATE = 5,
    GCF_ERR_NUMERIC = 6,
    GCF_ERR_INTERNAL = 7
} gcf_status;

typedef struct gcf_dataset gcf_dataset;
typedef struct gcf_explainer gcf_explainer;

const char* gcf_version(void);
/* message for the last failing call on this thread; never NULL */
const char* gcf_last_error(void);
void gcf_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

gcf_status gcf_dataset_load(const char* path, gcf_dataset** out);
gcf_status gcf_dataset_save(const gcf_dataset* ds, const char* path);
/* config_json: {"family": "tree_cycles"|"coauthor", ...generator fields} */
gcf_status gcf_dataset_generate(const char* config_json, gcf_dataset** out);
/* loads a dataset file and recomputes labels by the percentile rule */
gcf_status gcf_dataset_load_coauthor(const char* path, double percentile,
                                     gcf_dataset** out);
int gcf_dataset_num_snapshots(const gcf_dataset* ds);
/* number of graphs at snapshot t, or -1 if t is out of range */
int gcf_dataset_num_graphs(const gcf_dataset* ds, int t);
void gcf_dataset_free(gcf_dataset* ds);

/* ---- explainer --------------------------------------------------------- */

/* Supervised fit on snapshot 0 using every graph as the train split.
 * config_json uses the run-configuration schema (model/explainer sections). */
gcf_status gcf_explainer_fit(const gcf_dataset* ds, const char* config_json,
                             gcf_explainer** out);
/* one online adaptation step onto snapshot current_t + 1 of ds */
gcf_status gcf_explainer_adapt(gcf_explainer* ex, const gcf_dataset* ds);
/* explanation for query_id at the state's current snapshot; k <= 0 keeps the
 * state's configured k; *json_out receives one JSON record */
gcf_status gcf_explainer_explain(const gcf_explainer* ex, const gcf_dataset* ds,
                                 const char* query_id, int k, char** json_out);
gcf_status gcf_explainer_current_t(const gcf_explainer* ex, int* t_out);
gcf_status gcf_explainer_save(const gcf_explainer* ex, const char* path);
gcf_status gcf_explainer_load(const char* path, gcf_explainer** out);
void gcf_explainer_free(gcf_explainer* ex);

/* ---- evaluation -------------------------------------------------------- */

/* Full cross-validation run; writes folds.csv, aggregate.csv, drift.csv,
 * explanations.jsonl, checkpoints/ and summary.json under out_dir.
 * *summary_json_out (optional) receives the summary document. */
gcf_status gcf_run_cv(const char* config_json, const char* out_dir,
                      char** summary_json_out);
/* recompute the aggregate table from a folds.csv; out_csv_path and table_out
 * are each optional */
gcf_status gcf_report(const char* records_csv_path, const char* out_csv_path,
                      char** table_out);
/* two-sample Kolmogorov-Smirnov drift check over reconstruction errors */
gcf_status gcf_drift_detect(const double* prev, int n_prev, const double* curr,
                            int n_curr, double significance, double* statistic,
                            double* p_value, int* drifted);

#ifdef __cplusplus
}
#endif

#endif /* GRAPHCF_GRAPHCF_H */
