#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "sparsejl.h"

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE_BEGIN("capi");

TEST_CASE("plans cross the boundary intact") {
  sjl_plan_t p;
  REQUIRE(sjl_plan_jl(uint64_t{1} << 20, uint64_t{1} << 10, 0.1, 1.0, 1.0, &p) == SJL_OK);
  CHECK(p.m == 1539);
  CHECK(p.s == 171);
  CHECK(p.ell == 2);
  CHECK(p.clamped == 0);

  sjl_subspace_plan_t sp;
  REQUIRE(sjl_plan_subspace(8, 0.5, 1.0, 1.0, &sp) == SJL_OK);
  CHECK(sp.m == 32);
  CHECK(sp.clamped == 1);
}

TEST_CASE("errors carry codes and messages") {
  sjl_plan_t p;
  CHECK(sjl_plan_jl(4, 4, 1.5, 1.0, 1.0, &p) == SJL_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(sjl_last_error()) > 0);
  CHECK(sjl_plan_jl(4, 4, 0.5, 1.0, 1.0, nullptr) == SJL_ERR_INVALID_ARGUMENT);

  sjl_matrix_t* A = nullptr;
  CHECK(sjl_matrix_sample(8, 4, 3, 0, &A) == SJL_ERR_INVALID_ARGUMENT);  // s does not divide m
  CHECK(sjl_matrix_load(temp_path("sjl_capi_missing.jl").c_str(), &A) == SJL_ERR_IO);

  double cm = 0, cs = 0;
  CHECK(sjl_calibrate(0.9, 10, 64, 32, 0.5, 0, &cm, &cs) == SJL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("matrix lifecycle and distortion round-trip") {
  sjl_matrix_t* A = nullptr;
  REQUIRE(sjl_matrix_sample(16, 32, 4, 11, &A) == SJL_OK);
  CHECK(sjl_matrix_m(A) == 16);
  CHECK(sjl_matrix_d(A) == 32);
  CHECK(sjl_matrix_s(A) == 4);
  CHECK(sjl_matrix_seed(A) == 11);

  const std::string mpath = temp_path("sjl_capi_matrix.jl");
  REQUIRE(sjl_matrix_save(A, mpath.c_str(), 0) == SJL_OK);
  sjl_matrix_t* B = nullptr;
  REQUIRE(sjl_matrix_load(mpath.c_str(), &B) == SJL_OK);
  CHECK(sjl_matrix_seed(B) == 11);

  sjl_dataset_t* X = nullptr;
  REQUIRE(sjl_dataset_random(20, 32, 8, 3, &X) == SJL_OK);
  CHECK(sjl_dataset_size(X) == 20);
  CHECK(sjl_dataset_dim(X) == 32);

  sjl_distortion_report_t rep_a, rep_b;
  REQUIRE(sjl_distortion(A, X, 0.5, 0, 0, nullptr, &rep_a) == SJL_OK);
  REQUIRE(sjl_distortion(B, X, 0.5, 0, 0, nullptr, &rep_b) == SJL_OK);
  CHECK(rep_a.pair_count == 190);
  CHECK(rep_a.max_rel_distortion == rep_b.max_rel_distortion);
  CHECK(rep_a.sampled == 0);

  const std::string epath = temp_path("sjl_capi_embed.csv");
  REQUIRE(sjl_embed_to_csv(A, X, epath.c_str()) == SJL_OK);
  std::remove(epath.c_str());
  std::remove(mpath.c_str());
  sjl_matrix_free(A);
  sjl_matrix_free(B);
  sjl_dataset_free(X);
}

TEST_CASE("dataset save and reload through the C surface") {
  sjl_dataset_t* X = nullptr;
  uint64_t ell = 0, subsets = 0;
  REQUIRE(sjl_hard_instance(500, 16, 200, 0, &X, &ell, &subsets) == SJL_OK);
  CHECK(ell == 2);
  CHECK(subsets == 120);
  CHECK(sjl_dataset_size(X) == 137);

  const std::string path = temp_path("sjl_capi_hard.sv");
  REQUIRE(sjl_dataset_save(X, path.c_str()) == SJL_OK);
  sjl_dataset_t* Y = nullptr;
  REQUIRE(sjl_dataset_load(path.c_str(), SJL_FORMAT_AUTO, 0, 16, &Y) == SJL_OK);
  CHECK(sjl_dataset_size(Y) == 137);
  std::remove(path.c_str());
  sjl_dataset_free(X);
  sjl_dataset_free(Y);
}

TEST_CASE("monte carlo and diagnose run through the plan struct") {
  sjl_plan_t plan;
  REQUIRE(sjl_plan_jl(32, 64, 0.5, 2.0, 1.0, &plan) == SJL_OK);
  sjl_dataset_t* X = nullptr;
  REQUIRE(sjl_dataset_random(16, 64, 8, 9, &X) == SJL_OK);

  double freq = -1.0;
  REQUIRE(sjl_monte_carlo_success(&plan, X, 20, 7, &freq) == SJL_OK);
  CHECK(freq >= 0.0);
  CHECK(freq <= 1.0);

  sjl_battery_report_t rep;
  REQUIRE(sjl_diagnose(&plan, X, 20, 7, &rep) == SJL_OK);
  CHECK(rep.evaluations == 20 * 16);
  CHECK(rep.identity_pass == 1);
  sjl_dataset_free(X);
}

TEST_CASE("subspace evaluation and regression") {
  sjl_basis_t* B = nullptr;
  REQUIRE(sjl_basis_random(4, 64, 5, &B) == SJL_OK);
  CHECK(sjl_basis_k(B) == 4);
  CHECK(sjl_basis_d(B) == 64);

  sjl_matrix_t* A = nullptr;
  REQUIRE(sjl_matrix_sample(64, 64, 8, 6, &A) == SJL_OK);
  double dev = -1.0;
  REQUIRE(sjl_subspace_distortion(A, B, &dev) == SJL_OK);
  CHECK(dev >= 0.0);
  sjl_matrix_free(A);
  sjl_basis_free(B);

  // Small regression through CSV handles.
  const std::string xpath = temp_path("sjl_capi_design.csv");
  const std::string ypath = temp_path("sjl_capi_target.csv");
  {
    FILE* f = std::fopen(xpath.c_str(), "wb");
    FILE* g = std::fopen(ypath.c_str(), "wb");
    for (int i = 0; i < 32; ++i) {
      const double a = 0.1 * i, b = 1.0 - 0.05 * i;
      std::fprintf(f, "%.17g,%.17g\n", a, b);
      std::fprintf(g, "%.17g\n", 2.0 * a - b);
    }
    std::fclose(f);
    std::fclose(g);
  }
  sjl_dense_t* X = nullptr;
  sjl_dense_t* y = nullptr;
  REQUIRE(sjl_dense_load_csv(xpath.c_str(), &X) == SJL_OK);
  REQUIRE(sjl_dense_load_csv(ypath.c_str(), &y) == SJL_OK);
  CHECK(sjl_dense_rows(X) == 32);
  CHECK(sjl_dense_cols(X) == 2);

  double beta[2] = {0, 0};
  sjl_subspace_plan_t plan;
  uint64_t rank = 0;
  REQUIRE(sjl_sketch_solve(X, y, 0.5, 3, 1.0, 1.0, 0.0, beta, &plan, &rank) == SJL_OK);
  CHECK(rank == 2);
  CHECK(plan.k == 3);
  double r2 = -1.0;
  REQUIRE(sjl_residual_norm2(X, y, beta, 2, &r2) == SJL_OK);
  CHECK(r2 <= 1e-8);  // the target is exactly representable

  double exact[2] = {0, 0};
  uint64_t exact_rank = 0;
  REQUIRE(sjl_exact_solve(X, y, exact, &exact_rank) == SJL_OK);
  CHECK(exact[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(exact[1] == doctest::Approx(-1.0).epsilon(1e-8));

  sjl_dense_free(X);
  sjl_dense_free(y);
  std::remove(xpath.c_str());
  std::remove(ypath.c_str());
}

TEST_CASE("lemma 7 and the sweep cross the boundary") {
  std::vector<uint64_t> counts(50);
  std::vector<int64_t> bounds(50);
  int hyp = 0;
  REQUIRE(sjl_verify_lemma7(16, 8, 1, 50, 0, counts.data(), bounds.data(), &hyp) == SJL_OK);
  CHECK(hyp == 1);
  for (int i = 0; i < 50; ++i) CHECK(static_cast<int64_t>(counts[i]) >= bounds[i]);

  const uint64_t svals[2] = {1, 16};
  double freq[2] = {-1, -1};
  uint64_t ms[2] = {0, 0};
  REQUIRE(sjl_lb_sweep(16, 65536, 0.25, svals, 2, 10, 0, 60, freq, ms) == SJL_OK);
  CHECK(ms[0] >= 178);
  CHECK(freq[0] >= 0.0);
  CHECK(freq[1] <= 1.0);

  uint64_t ell = 0;
  REQUIRE(sjl_solve_ell(uint64_t{1} << 20, uint64_t{1} << 10, &ell) == SJL_OK);
  CHECK(ell == 2);
}

TEST_SUITE_END();
