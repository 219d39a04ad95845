/*
 * mmcmc: multistage MCMC detection of differentially methylated regions.
 *
 * C interface to the shared library. Objects are opaque handles created by
 * the library and released with the matching *_free function. Every fallible
 * call returns an mmcmc_status; on failure mmcmc_last_error() describes the
 * problem for the calling thread until its next failing call.
 *
 * Strings returned through `const char **` are owned by the handle they were
 * read from. Strings returned through `char **` are owned by the caller and
 * must be released with mmcmc_string_free().
 */
#ifndef MMCMC_MMCMC_H
#define MMCMC_MMCMC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MMCMC_BUILDING_LIBRARY)
#    define MMCMC_API __declspec(dllexport)
#  else
#    define MMCMC_API __declspec(dllimport)
#  endif
#else
#  define MMCMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mmcmc_status {
  MMCMC_OK = 0,
  MMCMC_ERR_INVALID_ARGUMENT = 1, /* bad configuration or null pointer */
  MMCMC_ERR_DOMAIN = 2,
  MMCMC_ERR_TOO_FEW_OBSERVATIONS = 3,
  MMCMC_ERR_PARSE = 4,
  MMCMC_ERR_DUPLICATE_CPG = 5,
  MMCMC_ERR_VALIDATION = 6, /* e.g. cancer/normal CpG mismatch */
  MMCMC_ERR_UNKNOWN_CPG = 7,
  MMCMC_ERR_OUT_OF_RANGE = 8,
  MMCMC_ERR_DEGENERATE = 9,
  MMCMC_ERR_INFEASIBLE = 10,
  MMCMC_ERR_IO = 11,
  MMCMC_ERR_INTERNAL = 12
} mmcmc_status;

MMCMC_API const char *mmcmc_version(void);
MMCMC_API const char *mmcmc_status_string(mmcmc_status status);
MMCMC_API const char *mmcmc_last_error(void);
MMCMC_API void mmcmc_string_free(char *s);

/* ---- ASGN model ------------------------------------------------------- */

typedef struct mmcmc_asgn_params {
  double alpha;  /* skewness */
  double nu;     /* location */
  double delta2; /* scale, > 0 */
} mmcmc_asgn_params;

typedef struct mmcmc_asgn_priors {
  double mu_a, sigma2_a; /* alpha ~ N(mu_a, sigma2_a) */
  double mu_n, sigma2_n; /* nu ~ N(mu_n, sigma2_n) */
  double a_d, b_d;       /* delta2 ~ IG(a_d, b_d), shape-rate */
} mmcmc_asgn_priors;

typedef struct mmcmc_mcmc_config {
  int64_t nburn;
  int64_t niter;
  int64_t thin;
  uint64_t seed;
} mmcmc_mcmc_config;

typedef struct mmcmc_posterior {
  mmcmc_asgn_params mean;
  mmcmc_asgn_params ci_lower; /* 2.5% */
  mmcmc_asgn_params ci_upper; /* 97.5% */
  double acceptance_rates[3]; /* alpha, nu, log(delta2) */
  int64_t n_retained;
} mmcmc_posterior;

/* nburn 5000, niter 10000, thin 1, seed 0. */
MMCMC_API void mmcmc_mcmc_config_init(mmcmc_mcmc_config *config);

MMCMC_API mmcmc_status mmcmc_asgn_log_density(double y,
                                              const mmcmc_asgn_params *params,
                                              double *out);
MMCMC_API mmcmc_status mmcmc_asgn_density(double y,
                                          const mmcmc_asgn_params *params,
                                          double *out);
MMCMC_API mmcmc_status mmcmc_log_prior(const mmcmc_asgn_params *params,
                                       const mmcmc_asgn_priors *priors,
                                       double *out);
MMCMC_API mmcmc_status mmcmc_default_priors(const double *data, size_t n,
                                            mmcmc_asgn_priors *out);
MMCMC_API void mmcmc_child_priors(const mmcmc_posterior *parent,
                                  mmcmc_asgn_priors *out);
/* Short-form prior (alpha, mu, sigma2) as accepted by the CLI. */
MMCMC_API void mmcmc_user_priors(double alpha, double mu, double sigma2,
                                 mmcmc_asgn_priors *out);
/* Non-finite entries of data are ignored. */
MMCMC_API mmcmc_status mmcmc_asgn_fit(const double *data, size_t n,
                                      const mmcmc_asgn_priors *priors,
                                      const mmcmc_mcmc_config *mcmc,
                                      mmcmc_posterior *out);

/* ---- Methylation matrices ---------------------------------------------- */

typedef struct mmcmc_matrix mmcmc_matrix;

/* beta_values != 0 converts every cell with the M-value transform. */
MMCMC_API mmcmc_status mmcmc_matrix_load_csv(const char *path,
                                             int beta_values,
                                             mmcmc_matrix **out);
/* values is n_rows x n_samples, row-major; NaN marks a missing cell. */
MMCMC_API mmcmc_status mmcmc_matrix_create(const char *const *cpg_ids,
                                           const char *const *chromosomes,
                                           size_t n_rows,
                                           const char *const *sample_names,
                                           size_t n_samples,
                                           const double *values,
                                           mmcmc_matrix **out);
MMCMC_API mmcmc_status mmcmc_matrix_write_csv(const mmcmc_matrix *m,
                                              const char *path);
MMCMC_API void mmcmc_matrix_free(mmcmc_matrix *m);
MMCMC_API size_t mmcmc_matrix_n_rows(const mmcmc_matrix *m);
MMCMC_API size_t mmcmc_matrix_n_samples(const mmcmc_matrix *m);
MMCMC_API const char *mmcmc_matrix_cpg_id(const mmcmc_matrix *m, size_t row);
MMCMC_API const char *mmcmc_matrix_chromosome(const mmcmc_matrix *m,
                                              size_t row);
MMCMC_API const char *mmcmc_matrix_sample_name(const mmcmc_matrix *m,
                                               size_t sample);
/* NaN for missing cells and out-of-range indices. */
MMCMC_API double mmcmc_matrix_value(const mmcmc_matrix *m, size_t row,
                                    size_t sample);

/* On MMCMC_ERR_VALIDATION, *mismatch_row (if non-null) receives the 1-based
 * row of the first disagreement. */
MMCMC_API mmcmc_status mmcmc_validate_pair(const mmcmc_matrix *cancer,
                                          const mmcmc_matrix *normal,
                                          size_t *mismatch_row);

MMCMC_API mmcmc_status mmcmc_beta_to_m(double beta, double c, double *out);

/* out receives n_samples values; NaN for samples with no data in range. */
MMCMC_API mmcmc_status mmcmc_region_means(const mmcmc_matrix *m,
                                          size_t start_row, size_t end_row,
                                          double *out);

/* One-column CSV of reals with an optional header; missing values are NaN.
 * Release *values with mmcmc_doubles_free. */
MMCMC_API mmcmc_status mmcmc_read_value_column(const char *path,
                                               double **values, size_t *n);
MMCMC_API void mmcmc_doubles_free(double *values);

/* ---- DMR tables -------------------------------------------------------- */

typedef struct mmcmc_dmr_table mmcmc_dmr_table;

typedef struct mmcmc_dmr_record {
  const char *chromosome;
  const char *start_cpg;
  const char *end_cpg;
  size_t cpg_count;
  double decision_value;
  int stage;
} mmcmc_dmr_record;

MMCMC_API mmcmc_status mmcmc_dmr_table_create(mmcmc_dmr_table **out);
MMCMC_API mmcmc_status mmcmc_dmr_table_append(mmcmc_dmr_table *t,
                                              const mmcmc_dmr_record *r);
MMCMC_API mmcmc_status mmcmc_dmr_table_load_csv(const char *path,
                                                mmcmc_dmr_table **out);
MMCMC_API mmcmc_status mmcmc_dmr_table_write_csv(const mmcmc_dmr_table *t,
                                                 const char *path);
MMCMC_API void mmcmc_dmr_table_free(mmcmc_dmr_table *t);
MMCMC_API size_t mmcmc_dmr_table_size(const mmcmc_dmr_table *t);
MMCMC_API mmcmc_status mmcmc_dmr_table_get(const mmcmc_dmr_table *t,
                                           size_t index,
                                           mmcmc_dmr_record *out);

/* ---- Detection --------------------------------------------------------- */

typedef struct mmcmc_user_prior {
  double alpha;  /* -> mu_a */
  double mu;     /* -> mu_n */
  double sigma2; /* -> a_d */
} mmcmc_user_prior;

typedef void (*mmcmc_progress_fn)(int stage, size_t n_segments,
                                  size_t n_split, size_t n_emitted,
                                  void *user_data);

typedef struct mmcmc_detect_config {
  int stage;
  int max_stages;
  size_t num_splits;
  const double *bf_thresholds; /* one per stage, read during the call */
  size_t n_bf_thresholds;
  mmcmc_mcmc_config mcmc; /* seed is ignored; fits derive theirs */
  int has_prior_cancer;
  mmcmc_user_prior prior_cancer;
  int has_prior_normal;
  mmcmc_user_prior prior_normal;
  uint64_t master_seed;
  unsigned threads;
  int shared_group_seed; /* same chain seed for both groups of a segment */
  mmcmc_progress_fn progress;
  void *progress_user_data;
} mmcmc_detect_config;

/* Defaults: stage 1, max_stages 3, num_splits 50, thresholds
 * (0.5, 0.8, 1.05), MCMC 5000/10000/1, one thread, no user priors. */
MMCMC_API void mmcmc_detect_config_init(mmcmc_detect_config *config);

typedef enum mmcmc_segment_decision {
  MMCMC_SEGMENT_SPLIT = 0,
  MMCMC_SEGMENT_EMITTED = 1,
  MMCMC_SEGMENT_RETAINED = 2,
  MMCMC_SEGMENT_SKIPPED = 3
} mmcmc_segment_decision;

typedef struct mmcmc_segment_trace {
  const char *chromosome;
  size_t start_row;
  size_t end_row; /* inclusive */
  int stage;
  int has_bayes_factor;
  double bayes_factor;
  mmcmc_segment_decision decision;
} mmcmc_segment_trace;

typedef struct mmcmc_detect_result mmcmc_detect_result;

MMCMC_API mmcmc_status mmcmc_detect(const mmcmc_matrix *cancer,
                                    const mmcmc_matrix *normal,
                                    const mmcmc_detect_config *config,
                                    mmcmc_detect_result **out);
MMCMC_API void mmcmc_detect_result_free(mmcmc_detect_result *r);
/* Borrowed; valid while the result lives. */
MMCMC_API const mmcmc_dmr_table *
mmcmc_detect_result_table(const mmcmc_detect_result *r);
MMCMC_API size_t mmcmc_detect_result_n_segments(const mmcmc_detect_result *r);
MMCMC_API mmcmc_status
mmcmc_detect_result_segment(const mmcmc_detect_result *r, size_t index,
                            mmcmc_segment_trace *out);

/* Bayes factor at the given parameters; non-finite entries are skipped. */
MMCMC_API mmcmc_status mmcmc_bayes_factor(const double *cancer_means,
                                          size_t n_cancer,
                                          const double *normal_means,
                                          size_t n_normal,
                                          const mmcmc_asgn_params *cancer,
                                          const mmcmc_asgn_params *normal,
                                          double *out);

/* Writes at most `capacity` (start,end) pairs; *n_out gets the full count. */
MMCMC_API mmcmc_status mmcmc_split_segment(size_t start_row, size_t end_row,
                                           size_t num_splits,
                                           size_t *starts, size_t *ends,
                                           size_t capacity, size_t *n_out);

/* ---- Analysis ---------------------------------------------------------- */

typedef struct mmcmc_six_number {
  double min, q1, median, mean, q3, max;
} mmcmc_six_number;

typedef struct mmcmc_summary mmcmc_summary;

MMCMC_API mmcmc_status mmcmc_summarize(const mmcmc_dmr_table *t,
                                       mmcmc_summary **out);
MMCMC_API void mmcmc_summary_free(mmcmc_summary *s);
MMCMC_API size_t mmcmc_summary_n_dmrs(const mmcmc_summary *s);
MMCMC_API void mmcmc_summary_size_stats(const mmcmc_summary *s,
                                        mmcmc_six_number *out);
MMCMC_API void mmcmc_summary_decision_stats(const mmcmc_summary *s,
                                            mmcmc_six_number *out);
MMCMC_API size_t mmcmc_summary_n_chromosomes(const mmcmc_summary *s);
MMCMC_API mmcmc_status mmcmc_summary_chromosome(const mmcmc_summary *s,
                                                size_t index,
                                                const char **chromosome,
                                                size_t *count);
MMCMC_API size_t mmcmc_summary_n_stages(const mmcmc_summary *s);
MMCMC_API mmcmc_status mmcmc_summary_stage(const mmcmc_summary *s,
                                           size_t index, int *stage,
                                           size_t *count);
MMCMC_API mmcmc_status mmcmc_summary_render(const mmcmc_summary *s,
                                            char **text);

typedef struct mmcmc_overlap {
  size_t index_a; /* 0-based */
  size_t index_b;
  size_t shared_cpgs;
  double percent;
} mmcmc_overlap;

typedef struct mmcmc_overlap_report mmcmc_overlap_report;

MMCMC_API mmcmc_status mmcmc_compare_dmrs(const mmcmc_dmr_table *a,
                                          const mmcmc_dmr_table *b,
                                          const mmcmc_matrix *index,
                                          mmcmc_overlap_report **out);
MMCMC_API void mmcmc_overlap_report_free(mmcmc_overlap_report *r);
MMCMC_API size_t mmcmc_overlap_report_size(const mmcmc_overlap_report *r);
MMCMC_API mmcmc_status mmcmc_overlap_report_get(const mmcmc_overlap_report *r,
                                                size_t index,
                                                mmcmc_overlap *out);

/* index is 1-based. */
MMCMC_API mmcmc_status mmcmc_plot_region_svg(const mmcmc_dmr_table *t,
                                             const mmcmc_matrix *cancer,
                                             const mmcmc_matrix *normal,
                                             size_t index, char **svg);

/* ---- Simulation -------------------------------------------------------- */

typedef struct mmcmc_sim_config {
  double noise_sd;
  size_t n_dmrs;
  const double *shifts;
  size_t n_shifts;
  const size_t *lengths;
  size_t n_lengths;
  uint64_t seed;
} mmcmc_sim_config;

/* noise 0.5, 10 DMRs, shifts {1, 2}, lengths {10, 20, 50}, seed 0. */
MMCMC_API void mmcmc_sim_config_init(mmcmc_sim_config *config);

typedef struct mmcmc_truth mmcmc_truth;

typedef struct mmcmc_truth_interval {
  size_t start_row;
  size_t end_row; /* inclusive */
  double shift;
} mmcmc_truth_interval;

MMCMC_API mmcmc_status mmcmc_simulate(const mmcmc_matrix *baseline,
                                      const mmcmc_sim_config *config,
                                      mmcmc_matrix **cancer,
                                      mmcmc_matrix **normal,
                                      mmcmc_truth **truth);
/* Chromosomes are named by `chromosomes`, each with sizes[i] CpGs. */
MMCMC_API mmcmc_status mmcmc_synthetic_baseline(const char *const *chromosomes,
                                                const size_t *sizes,
                                                size_t n_chromosomes,
                                                size_t n_samples,
                                                uint64_t seed,
                                                mmcmc_matrix **out);

MMCMC_API mmcmc_status mmcmc_truth_create(const mmcmc_truth_interval *items,
                                          size_t n, mmcmc_truth **out);
MMCMC_API mmcmc_status mmcmc_truth_load_csv(const char *path,
                                            mmcmc_truth **out);
MMCMC_API mmcmc_status mmcmc_truth_write_csv(const mmcmc_truth *truth,
                                             const mmcmc_matrix *index,
                                             const char *path);
MMCMC_API void mmcmc_truth_free(mmcmc_truth *truth);
MMCMC_API size_t mmcmc_truth_size(const mmcmc_truth *truth);
MMCMC_API mmcmc_status mmcmc_truth_get(const mmcmc_truth *truth, size_t index,
                                       mmcmc_truth_interval *out);

typedef struct mmcmc_metrics {
  size_t n_truth;
  size_t n_detected;
  size_t n_truth_found;
  size_t n_false_discoveries;
  double sensitivity;
  double fdr;
  double cpg_precision;
  double cpg_recall;
} mmcmc_metrics;

MMCMC_API mmcmc_status mmcmc_evaluate(const mmcmc_dmr_table *detected,
                                      const mmcmc_truth *truth,
                                      const mmcmc_matrix *index,
                                      mmcmc_metrics *out);

#ifdef __cplusplus
}
#endif

#endif /* MMCMC_MMCMC_H */
