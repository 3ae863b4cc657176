#include "sparsejl.h"

#include <cstring>
#include <fstream>
#include <new>

#include "sparsejl/diagnostics.hpp"
#include "sparsejl/hardness.hpp"
#include "sparsejl/io.hpp"
#include "sparsejl/parallel.hpp"
#include "sparsejl/params.hpp"
#include "sparsejl/prng.hpp"
#include "sparsejl/sketch.hpp"
#include "sparsejl/subspace.hpp"
#include "sparsejl/types.hpp"
#include "sparsejl/vectors.hpp"

using namespace sparsejl;

struct sjl_matrix {
  sketch::SparseJLMatrix impl;
};
struct sjl_dataset {
  Dataset impl;
};
struct sjl_basis {
  subspace::SubspaceBasis impl;
};
struct sjl_dense {
  DenseMatrix impl;
};

namespace {

thread_local std::string g_last_error;

sjl_status_t map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return SJL_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch:
      return SJL_ERR_DIMENSION_MISMATCH;
    case ErrorCode::RankDeficient:
      return SJL_ERR_RANK_DEFICIENT;
    case ErrorCode::GuardExceeded:
      return SJL_ERR_GUARD_EXCEEDED;
    case ErrorCode::Io:
      return SJL_ERR_IO;
    case ErrorCode::NoResult:
      return SJL_ERR_NO_RESULT;
  }
  return SJL_ERR_INTERNAL;
}

sjl_status_t set_error(sjl_status_t code, const char* msg) {
  g_last_error = msg;
  return code;
}

sjl_status_t handle_exception() {
  try {
    throw;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SJL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SJL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SJL_ERR_INTERNAL;
  }
}

sjl_status_t ok() {
  g_last_error.clear();
  return SJL_OK;
}

params::EmbeddingPlan from_c(const sjl_plan_t& p) {
  params::EmbeddingPlan plan;
  plan.n = p.n;
  plan.d = p.d;
  plan.eps = p.eps;
  plan.c_m = p.c_m;
  plan.c_s = p.c_s;
  plan.m = p.m;
  plan.s = p.s;
  plan.ell = p.ell;
  plan.block_size = p.block_size;
  plan.clamped = p.clamped != 0;
  return plan;
}

std::vector<double> first_column(const DenseMatrix& y) {
  std::vector<double> out(y.rows);
  for (size_t r = 0; r < y.rows; ++r) out[r] = y.at(r, 0);
  return out;
}

}  // namespace

extern "C" {

const char* sjl_last_error(void) { return g_last_error.c_str(); }

int sjl_format_version(void) { return sketch::kFormatVersion; }

void sjl_set_threads(unsigned n) { par::set_threads(n); }

uint64_t sjl_derive_seed(uint64_t seed, uint64_t stream) { return rng::derive_seed(seed, stream); }

sjl_status_t sjl_plan_jl(uint64_t n, uint64_t d, double eps, double c_m, double c_s,
                         sjl_plan_t* out) {
  if (!out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null output pointer");
  try {
    const params::EmbeddingPlan p = params::plan_jl(n, d, eps, c_m, c_s);
    *out = {p.n, p.d, p.eps, p.c_m, p.c_s, p.m, p.s, p.ell, p.block_size, p.clamped ? 1 : 0};
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_plan_subspace(uint64_t k, double eps, double c_m, double c_s,
                               sjl_subspace_plan_t* out) {
  if (!out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null output pointer");
  try {
    const params::SubspacePlan p = params::plan_subspace(k, eps, c_m, c_s);
    *out = {p.k, p.eps, p.c_m, p.c_s, p.m, p.s, p.ell, p.block_size, p.clamped ? 1 : 0};
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_calibrate(double target_success, uint64_t trial_budget, uint64_t scenario_n,
                           uint64_t scenario_d, double scenario_eps, uint64_t rng_seed,
                           double* c_m_out, double* c_s_out) {
  if (!c_m_out || !c_s_out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null output pointer");
  try {
    const params::Constants c = params::calibrate_constants(target_success, trial_budget,
                                                            scenario_n, scenario_d, scenario_eps,
                                                            rng_seed);
    *c_m_out = c.c_m;
    *c_s_out = c.c_s;
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_solve_ell(uint64_t n, uint64_t d, uint64_t* ell_out) {
  if (!ell_out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null output pointer");
  try {
    *ell_out = hardness::solve_ell(n, d);
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_matrix_sample(uint64_t m, uint64_t d, uint64_t s, uint64_t seed,
                               sjl_matrix_t** out) {
  if (!out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null output pointer");
  try {
    *out = new sjl_matrix{sketch::sample(m, d, s, seed)};
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

void sjl_matrix_free(sjl_matrix_t* A) { delete A; }
uint64_t sjl_matrix_m(const sjl_matrix_t* A) { return A ? A->impl.rows_count() : 0; }
uint64_t sjl_matrix_d(const sjl_matrix_t* A) { return A ? A->impl.cols_count() : 0; }
uint64_t sjl_matrix_s(const sjl_matrix_t* A) { return A ? A->impl.sparsity() : 0; }
uint64_t sjl_matrix_seed(const sjl_matrix_t* A) { return A ? A->impl.seed() : 0; }

sjl_status_t sjl_matrix_save(const sjl_matrix_t* A, const char* path, int explicit_dump) {
  if (!A || !path) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    sketch::save_matrix(A->impl, path, explicit_dump != 0);
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_matrix_load(const char* path, sjl_matrix_t** out) {
  if (!path || !out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    *out = new sjl_matrix{sketch::load_matrix(path)};
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_dataset_load(const char* path, sjl_data_format_t format, int one_based,
                              uint32_t dim_hint, sjl_dataset_t** out) {
  if (!path || !out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    io::DataFormat fmt = io::DataFormat::Auto;
    if (format == SJL_FORMAT_SPARSE_TEXT) fmt = io::DataFormat::SparseText;
    if (format == SJL_FORMAT_DENSE_CSV) fmt = io::DataFormat::DenseCsv;
    *out = new sjl_dataset{io::load_dataset(path, fmt, one_based != 0, dim_hint)};
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_dataset_save(const sjl_dataset_t* X, const char* path) {
  if (!X || !path) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    io::save_dataset(X->impl, path);
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

void sjl_dataset_free(sjl_dataset_t* X) { delete X; }
uint64_t sjl_dataset_size(const sjl_dataset_t* X) { return X ? X->impl.size() : 0; }
uint32_t sjl_dataset_dim(const sjl_dataset_t* X) { return X ? X->impl.dim : 0; }

sjl_status_t sjl_dataset_random(uint64_t n, uint32_t d, uint32_t nnz, uint64_t seed,
                                sjl_dataset_t** out) {
  if (!out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null output pointer");
  try {
    *out = new sjl_dataset{vectors::random_sparse_dataset(n, d, nnz, seed)};
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_embed_to_csv(const sjl_matrix_t* A, const sjl_dataset_t* X, const char* path) {
  if (!A || !X || !path) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    const std::vector<std::vector<double>> Y = sketch::apply_dataset(A->impl, X->impl);
    DenseMatrix M(Y.size(), A->impl.rows_count());
    for (size_t r = 0; r < Y.size(); ++r) std::copy(Y[r].begin(), Y[r].end(), M.row(r));
    io::save_dense_csv(M, path);
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_distortion(const sjl_matrix_t* A, const sjl_dataset_t* X, double eps,
                            uint64_t pairs, uint64_t seed, const char* dump_csv_path,
                            sjl_distortion_report_t* out) {
  if (!A || !X || !out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    diagnostics::DistortionMode mode;
    if (pairs > 0) {
      mode.kind = diagnostics::PairMode::Sampled;
      mode.pair_budget = pairs;
      mode.seed = seed;
    } else {
      mode.seed = seed;
    }
    diagnostics::DistortionReport rep;
    if (dump_csv_path) {
      std::ofstream dump(dump_csv_path, std::ios::binary);
      if (!dump) return set_error(SJL_ERR_IO, "cannot open dump file");
      rep = diagnostics::distortion(A->impl, X->impl, eps, mode, &dump);
    } else {
      rep = diagnostics::distortion(A->impl, X->impl, eps, mode, nullptr);
    }
    out->pair_count = rep.pair_count;
    out->max_rel_distortion = rep.max_rel_distortion;
    out->mean_rel_distortion = rep.mean_rel_distortion;
    out->violations_at_eps = rep.violations_at_eps;
    out->eps = rep.eps;
    out->sampled = rep.mode.kind == diagnostics::PairMode::Sampled ? 1 : 0;
    out->pair_budget = rep.mode.pair_budget;
    out->pair_seed = rep.mode.seed;
    out->forced_sampled = rep.forced_sampled ? 1 : 0;
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_monte_carlo_success(const sjl_plan_t* plan, const sjl_dataset_t* X,
                                     uint64_t trials, uint64_t seed, double* frequency_out) {
  if (!plan || !X || !frequency_out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    *frequency_out = diagnostics::monte_carlo_success(from_c(*plan), X->impl, trials, seed);
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_diagnose(const sjl_plan_t* plan, const sjl_dataset_t* X, uint64_t trials,
                          uint64_t seed, sjl_battery_report_t* out) {
  if (!plan || !X || !out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    const diagnostics::BatteryReport r =
        diagnostics::run_battery(from_c(*plan), X->impl, trials, seed);
    out->trials = r.trials;
    out->points = r.points;
    out->evaluations = r.evaluations;
    out->e1_frequency = r.e1_frequency;
    out->e2_frequency = r.e2_frequency;
    out->e3_frequency = r.e3_frequency;
    out->wb_applicable = r.wb_applicable ? 1 : 0;
    out->wb_frequency = r.wb_frequency;
    out->head_checked = r.head_checked;
    out->head_violations = r.head_violations;
    out->identity_max_residual = r.identity_max_residual;
    out->e1_pass = r.e1_pass ? 1 : 0;
    out->e2_pass = r.e2_pass ? 1 : 0;
    out->e3_pass = r.e3_pass ? 1 : 0;
    out->wb_pass = r.wb_pass ? 1 : 0;
    out->head_pass = r.head_pass ? 1 : 0;
    out->identity_pass = r.identity_pass ? 1 : 0;
    out->pass = r.pass ? 1 : 0;
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_basis_random(uint64_t k, uint64_t d, uint64_t seed, sjl_basis_t** out) {
  if (!out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null output pointer");
  try {
    *out = new sjl_basis{subspace::random_basis(k, d, seed)};
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_basis_load_csv(const char* path, sjl_basis_t** out) {
  if (!path || !out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    *out = new sjl_basis{subspace::orthonormalize(io::load_dense_csv(path))};
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

void sjl_basis_free(sjl_basis_t* B) { delete B; }
uint64_t sjl_basis_k(const sjl_basis_t* B) { return B ? B->impl.k : 0; }
uint64_t sjl_basis_d(const sjl_basis_t* B) { return B ? B->impl.d : 0; }

sjl_status_t sjl_subspace_distortion(const sjl_matrix_t* A, const sjl_basis_t* B, double* out) {
  if (!A || !B || !out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    *out = subspace::subspace_distortion(A->impl, B->impl);
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_dense_load_csv(const char* path, sjl_dense_t** out) {
  if (!path || !out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    *out = new sjl_dense{io::load_dense_csv(path)};
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

void sjl_dense_free(sjl_dense_t* M) { delete M; }
uint64_t sjl_dense_rows(const sjl_dense_t* M) { return M ? M->impl.rows : 0; }
uint64_t sjl_dense_cols(const sjl_dense_t* M) { return M ? M->impl.cols : 0; }

sjl_status_t sjl_sketch_solve(const sjl_dense_t* X, const sjl_dense_t* y, double eps,
                              uint64_t seed, double c_m, double c_s, double ridge,
                              double* beta_out, sjl_subspace_plan_t* plan_out,
                              uint64_t* rank_out) {
  if (!X || !y || !beta_out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    if (y->impl.rows != X->impl.rows)
      return set_error(SJL_ERR_DIMENSION_MISMATCH, "target row count does not match design");
    const subspace::SketchSolveResult r =
        subspace::sketch_solve(X->impl, first_column(y->impl), eps, seed, c_m, c_s,
                               ridge > 0.0 ? ridge : 0.0);
    std::copy(r.beta.begin(), r.beta.end(), beta_out);
    if (plan_out)
      *plan_out = {r.plan.k,   r.plan.eps, r.plan.c_m,        r.plan.c_s,
                   r.plan.m,   r.plan.s,   r.plan.ell,        r.plan.block_size,
                   r.plan.clamped ? 1 : 0};
    if (rank_out) *rank_out = r.effective_rank;
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_exact_solve(const sjl_dense_t* X, const sjl_dense_t* y, double* beta_out,
                             uint64_t* rank_out) {
  if (!X || !y || !beta_out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    if (y->impl.rows != X->impl.rows)
      return set_error(SJL_ERR_DIMENSION_MISMATCH, "target row count does not match design");
    const linalg::LstsqResult r = subspace::exact_lstsq(X->impl, first_column(y->impl));
    std::copy(r.beta.begin(), r.beta.end(), beta_out);
    if (rank_out) *rank_out = r.rank;
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_residual_norm2(const sjl_dense_t* X, const sjl_dense_t* y, const double* beta,
                                size_t beta_len, double* out) {
  if (!X || !y || !beta || !out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    const std::vector<double> b(beta, beta + beta_len);
    *out = subspace::residual_norm2(X->impl, first_column(y->impl), b);
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_hard_instance(uint64_t n_target, uint64_t d, uint64_t cap, uint64_t seed,
                               sjl_dataset_t** out, uint64_t* ell_out, uint64_t* subsets_out) {
  if (!out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null output pointer");
  try {
    const hardness::HardInstance inst = hardness::generate(n_target, d, cap, seed);
    Dataset X = inst.to_dataset();
    // Labels make the origin representable in the sparse text format.
    X.labels.reserve(X.size());
    for (size_t i = 0; i < inst.subsets.size(); ++i) X.labels.push_back("xS" + std::to_string(i));
    for (uint64_t i = 0; i < d; ++i) X.labels.push_back("e" + std::to_string(i));
    X.labels.push_back("zero");
    *out = new sjl_dataset{std::move(X)};
    if (ell_out) *ell_out = inst.ell;
    if (subsets_out) *subsets_out = inst.subsets.size();
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_verify_lemma7(uint64_t m, uint64_t s, uint64_t t, uint64_t trials, uint64_t seed,
                               uint64_t* counts_out, int64_t* bounds_out,
                               int* hypothesis_ok_out) {
  if (!counts_out || !bounds_out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null argument");
  try {
    const std::vector<hardness::HeavySubsetCount> rows =
        hardness::verify_lemma7(m, s, t, trials, seed);
    for (size_t i = 0; i < rows.size(); ++i) {
      counts_out[i] = rows[i].count;
      bounds_out[i] = rows[i].bound;
    }
    if (hypothesis_ok_out) *hypothesis_ok_out = rows.empty() || rows[0].hypothesis_ok ? 1 : 0;
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_lb_sweep(uint64_t d, uint64_t n_target, double eps, const uint64_t* s_values,
                          size_t s_count, uint64_t trials, uint64_t seed, uint64_t cap,
                          double* freq_out, uint64_t* m_out) {
  if (!s_values || !freq_out || s_count == 0)
    return set_error(SJL_ERR_INVALID_ARGUMENT, "null or empty sparsity list");
  try {
    const std::vector<uint64_t> svals(s_values, s_values + s_count);
    const std::vector<hardness::SweepRow> table =
        hardness::empirical_lower_bound(d, n_target, eps, svals, trials, seed, cap);
    for (size_t i = 0; i < table.size(); ++i) {
      freq_out[i] = table[i].success_frequency;
      if (m_out) m_out[i] = table[i].m;
    }
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

sjl_status_t sjl_suggested_t(uint64_t d, double eps, uint64_t ell, uint64_t m, uint64_t s,
                             double* out) {
  if (!out) return set_error(SJL_ERR_INVALID_ARGUMENT, "null output pointer");
  try {
    *out = hardness::suggested_t(d, eps, ell, m, s);
    return ok();
  } catch (...) {
    return handle_exception();
  }
}

}  // extern "C"
