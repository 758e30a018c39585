#ifndef LIOKAM_LIOKAM_H
#define LIOKAM_LIOKAM_H

#include <stddef.h>

#if defined(LIOKAM_BUILDING)
#define LK_API __attribute__((visibility("default")))
#else
#define LK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returning int returns one of these. On failure the message
   is available from lk_last_error() on the same thread until the next call. */
enum {
  LK_OK = 0,
  LK_ERR_CONFIG = 1,
  LK_ERR_DOMAIN = 2,
  LK_ERR_PRECISION = 3,
  LK_ERR_CONDITIONING = 4,
  LK_ERR_PRECONDITION = 5,
  LK_ERR_DEPTH = 6,
  LK_ERR_EXHAUSTED = 7,
  LK_ERR_TYPE = 8,
  LK_ERR_INTERNAL = 9
};

typedef struct lk_config lk_config;
typedef struct lk_run lk_run;
typedef struct lk_string lk_string;

LK_API const char* lk_version(void);
LK_API const char* lk_last_error(void);
LK_API const char* lk_status_name(int status);

/* Worker count for the parallel loops; results do not depend on it. */
LK_API int lk_set_jobs(int jobs);

/* ---- strings returned by the library ---- */
LK_API const char* lk_string_data(const lk_string* s);
LK_API size_t lk_string_size(const lk_string* s);
LK_API void lk_string_free(lk_string* s);

/* ---- configuration (key = value schema) ---- */
LK_API int lk_config_new(lk_config** out);
LK_API void lk_config_free(lk_config* cfg);
/* Applies a file on top of the current values. */
LK_API int lk_config_load(lk_config* cfg, const char* path);
LK_API int lk_config_set(lk_config* cfg, const char* key, const char* value);
/* Canonical text form, one key per line. */
LK_API int lk_config_text(const lk_config* cfg, lk_string** out);

/* ---- KAM run ---- */
typedef struct {
  int level;
  double r;
  double eps_target;
  double U_norm;
  double W_norm;
  double residual;
  double excluded_measure;
  double wall_ms;
  int substeps;
} lk_level_row;

/* Runs levels 0..N_max. Certification failures are recorded in the run; only
   hard errors (parameter set exhausted, solver failure, bad config) fail. */
LK_API int lk_run_new(const lk_config* cfg, lk_run** out);
LK_API void lk_run_free(lk_run* run);
LK_API int lk_run_certified(const lk_run* run, int* certified);
LK_API int lk_run_level_count(const lk_run* run, size_t* count);
LK_API int lk_run_level(const lk_run* run, size_t index, lk_level_row* row);
LK_API int lk_run_measure(const lk_run* run, double* total, double* bound);
/* summary.csv, exclusions.csv, substeps.csv, checks.csv, dumps, torus export. */
LK_API int lk_run_write(const lk_run* run, const char* dir);
LK_API int lk_run_summary_csv(const lk_run* run, lk_string** out);
/* Per-level zone measure: level, zone_measure, cumulative, bound. */
LK_API int lk_run_measure_csv(const lk_run* run, lk_string** out);
/* One line per failed binding check: level, sub, check, bound, actual. */
LK_API int lk_run_failures(const lk_run* run, lk_string** out);

/* ---- one-shot tools; all_pass (may be NULL) receives 1 if every binding
   row passed ---- */

/* CSV k, a_k, q_k, selected_flag, Qbar_flag. bridges_A <= 0 leaves both
   flags 0. */
LK_API int lk_cfrac_csv(const char* alpha, int depth, double bridges_A, lk_string** out);

/* Norm table of a coefficient dump (or, with input == NULL, of the configured
   model's initial data) at widths r, r/2, r/4. */
LK_API int lk_norms_csv(const lk_config* cfg, const char* input, lk_string** out);

typedef struct {
  int l;
  long K;
  double gamma;
  double tau;
  long Qbar;         /* <= 0: K */
  double Q_next;     /* bridge denominator in the hypotheses; <= 0: 2 */
  double r_tilde;    /* <= 0: 0.8 r */
  double sigma;      /* <= 0: r_tilde / 4 */
} lk_solve_params;

/* Solves the homological equation with right-hand side u read from `input`
   (B = b = 0 unless B_input / b_input are given). Writes delta.dump and
   error_term.dump to out_dir (may be NULL) and returns the report CSV. */
LK_API int lk_solve_homological(const lk_config* cfg, const char* input, const char* B_input, const char* b_input,
                                const lk_solve_params* params, const char* out_dir, lk_string** report,
                                int* all_pass);

/* Suite name or "all"; CSV suite, check, bound, actual, pass, binding, note. */
LK_API int lk_verify_csv(const lk_config* cfg, const char* suite, lk_string** out, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif
