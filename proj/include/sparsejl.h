#ifndef SPARSEJL_H
#define SPARSEJL_H

/* C interface of the sparse Johnson-Lindenstrauss library.
 *
 * All functions return sjl_status_t; out-parameters are written only on
 * SJL_OK. sjl_last_error() describes the most recent failure on the calling
 * thread. Objects behind opaque handles are immutable once created and must
 * be released with their matching _free function.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sjl_status {
  SJL_OK = 0,
  SJL_ERR_INVALID_ARGUMENT = 1,
  SJL_ERR_DIMENSION_MISMATCH = 2,
  SJL_ERR_RANK_DEFICIENT = 3,
  SJL_ERR_GUARD_EXCEEDED = 4,
  SJL_ERR_IO = 5,
  SJL_ERR_NO_RESULT = 6,
  SJL_ERR_INTERNAL = 7
} sjl_status_t;

/* Message for the last failure on this thread; empty string if none. */
const char* sjl_last_error(void);

/* Matrix file format version understood by this build. */
int sjl_format_version(void);

/* Worker threads for internal parallelism; 0 = hardware default. Outputs do
 * not depend on this. */
void sjl_set_threads(unsigned n);

/* Per-trial seed derivation used by every Monte Carlo loop. */
uint64_t sjl_derive_seed(uint64_t seed, uint64_t stream);

/* ------------------------------------------------------------------ plans */

typedef struct sjl_plan {
  uint64_t n, d;
  double eps, c_m, c_s;
  uint64_t m, s, ell, block_size;
  int clamped;
} sjl_plan_t;

typedef struct sjl_subspace_plan {
  uint64_t k;
  double eps, c_m, c_s;
  uint64_t m, s, ell, block_size;
  int clamped;
} sjl_subspace_plan_t;

sjl_status_t sjl_plan_jl(uint64_t n, uint64_t d, double eps, double c_m, double c_s,
                         sjl_plan_t* out);
sjl_status_t sjl_plan_subspace(uint64_t k, double eps, double c_m, double c_s,
                               sjl_subspace_plan_t* out);

sjl_status_t sjl_calibrate(double target_success, uint64_t trial_budget, uint64_t scenario_n,
                           uint64_t scenario_d, double scenario_eps, uint64_t rng_seed,
                           double* c_m_out, double* c_s_out);

sjl_status_t sjl_solve_ell(uint64_t n, uint64_t d, uint64_t* ell_out);

/* --------------------------------------------------------------- matrices */

typedef struct sjl_matrix sjl_matrix_t;

sjl_status_t sjl_matrix_sample(uint64_t m, uint64_t d, uint64_t s, uint64_t seed,
                               sjl_matrix_t** out);
void sjl_matrix_free(sjl_matrix_t* A);
uint64_t sjl_matrix_m(const sjl_matrix_t* A);
uint64_t sjl_matrix_d(const sjl_matrix_t* A);
uint64_t sjl_matrix_s(const sjl_matrix_t* A);
uint64_t sjl_matrix_seed(const sjl_matrix_t* A);

/* Canonical header-only form; explicit_dump appends per-column entries. */
sjl_status_t sjl_matrix_save(const sjl_matrix_t* A, const char* path, int explicit_dump);
sjl_status_t sjl_matrix_load(const char* path, sjl_matrix_t** out);

/* --------------------------------------------------------------- datasets */

typedef struct sjl_dataset sjl_dataset_t;

typedef enum sjl_data_format {
  SJL_FORMAT_AUTO = 0,
  SJL_FORMAT_SPARSE_TEXT = 1,
  SJL_FORMAT_DENSE_CSV = 2
} sjl_data_format_t;

/* dim_hint = 0 infers the ambient dimension from the data. */
sjl_status_t sjl_dataset_load(const char* path, sjl_data_format_t format, int one_based,
                              uint32_t dim_hint, sjl_dataset_t** out);
sjl_status_t sjl_dataset_save(const sjl_dataset_t* X, const char* path);
void sjl_dataset_free(sjl_dataset_t* X);
uint64_t sjl_dataset_size(const sjl_dataset_t* X);
uint32_t sjl_dataset_dim(const sjl_dataset_t* X);

/* Random sparse unit vectors; the standard Monte Carlo input. */
sjl_status_t sjl_dataset_random(uint64_t n, uint32_t d, uint32_t nnz, uint64_t seed,
                                sjl_dataset_t** out);

/* Embeds every point and writes one dense CSV row per point. */
sjl_status_t sjl_embed_to_csv(const sjl_matrix_t* A, const sjl_dataset_t* X, const char* path);

/* ------------------------------------------------------------ diagnostics */

typedef struct sjl_distortion_report {
  uint64_t pair_count;
  double max_rel_distortion;
  double mean_rel_distortion;
  uint64_t violations_at_eps;
  double eps;
  int sampled;          /* 0 = all pairs, 1 = sampled */
  uint64_t pair_budget; /* sampled mode */
  uint64_t pair_seed;   /* sampled mode */
  int forced_sampled;   /* all-pairs request exceeded the cap */
} sjl_distortion_report_t;

/* pairs = 0 requests all pairs (may be forced to sampling beyond the cap);
 * pairs > 0 samples that many seeded pairs. dump_csv_path may be NULL. */
sjl_status_t sjl_distortion(const sjl_matrix_t* A, const sjl_dataset_t* X, double eps,
                            uint64_t pairs, uint64_t seed, const char* dump_csv_path,
                            sjl_distortion_report_t* out);

sjl_status_t sjl_monte_carlo_success(const sjl_plan_t* plan, const sjl_dataset_t* X,
                                     uint64_t trials, uint64_t seed, double* frequency_out);

typedef struct sjl_battery_report {
  uint64_t trials, points, evaluations;
  double e1_frequency, e2_frequency, e3_frequency;
  int wb_applicable;
  double wb_frequency;
  uint64_t head_checked, head_violations;
  double identity_max_residual;
  int e1_pass, e2_pass, e3_pass, wb_pass, head_pass, identity_pass, pass;
} sjl_battery_report_t;

/* Full event battery (head/tail norms, cross terms, well-behavedness, head
 * image profile, decomposition identity) at the plan's parameters. */
sjl_status_t sjl_diagnose(const sjl_plan_t* plan, const sjl_dataset_t* X, uint64_t trials,
                          uint64_t seed, sjl_battery_report_t* out);

/* ---------------------------------------------------------------- subspace */

typedef struct sjl_basis sjl_basis_t;

sjl_status_t sjl_basis_random(uint64_t k, uint64_t d, uint64_t seed, sjl_basis_t** out);
/* Rows of the CSV span the subspace; they are orthonormalized on load. */
sjl_status_t sjl_basis_load_csv(const char* path, sjl_basis_t** out);
void sjl_basis_free(sjl_basis_t* B);
uint64_t sjl_basis_k(const sjl_basis_t* B);
uint64_t sjl_basis_d(const sjl_basis_t* B);

/* max |lambda - 1| over the sketched Gram spectrum: the exact worst-case
 * squared-norm distortion over the subspace. */
sjl_status_t sjl_subspace_distortion(const sjl_matrix_t* A, const sjl_basis_t* B, double* out);

typedef struct sjl_dense sjl_dense_t;

sjl_status_t sjl_dense_load_csv(const char* path, sjl_dense_t** out);
void sjl_dense_free(sjl_dense_t* M);
uint64_t sjl_dense_rows(const sjl_dense_t* M);
uint64_t sjl_dense_cols(const sjl_dense_t* M);

/* Sketched least squares for the design X (n x p) against the first column
 * of y (n x 1). beta_out must hold p doubles. ridge <= 0 disables the
 * explicit ridge term; rank deficiency is then an error. */
sjl_status_t sjl_sketch_solve(const sjl_dense_t* X, const sjl_dense_t* y, double eps,
                              uint64_t seed, double c_m, double c_s, double ridge,
                              double* beta_out, sjl_subspace_plan_t* plan_out,
                              uint64_t* rank_out);

/* Exact least squares on the original system; the comparison oracle. */
sjl_status_t sjl_exact_solve(const sjl_dense_t* X, const sjl_dense_t* y, double* beta_out,
                             uint64_t* rank_out);

sjl_status_t sjl_residual_norm2(const sjl_dense_t* X, const sjl_dense_t* y, const double* beta,
                                size_t beta_len, double* out);

/* ---------------------------------------------------------------- hardness */

/* Hard instance: all (or cap - d - 1 sampled) ell-subset vectors plus the
 * standard basis and the origin, as a dataset handle. */
sjl_status_t sjl_hard_instance(uint64_t n_target, uint64_t d, uint64_t cap, uint64_t seed,
                               sjl_dataset_t** out, uint64_t* ell_out, uint64_t* subsets_out);

/* Per-trial exhaustive heavy-subset counts against the lemma bound.
 * counts_out/bounds_out must hold `trials` entries. */
sjl_status_t sjl_verify_lemma7(uint64_t m, uint64_t s, uint64_t t, uint64_t trials, uint64_t seed,
                               uint64_t* counts_out, int64_t* bounds_out, int* hypothesis_ok_out);

/* Success frequency per sparsity on the hard instance; freq_out and m_out
 * must hold `s_count` entries. */
sjl_status_t sjl_lb_sweep(uint64_t d, uint64_t n_target, double eps, const uint64_t* s_values,
                          size_t s_count, uint64_t trials, uint64_t seed, uint64_t cap,
                          double* freq_out, uint64_t* m_out);

sjl_status_t sjl_suggested_t(uint64_t d, double eps, uint64_t ell, uint64_t m, uint64_t s,
                             double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPARSEJL_H */
