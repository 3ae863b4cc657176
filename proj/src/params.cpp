#include "sparsejl/params.hpp"

#include <cmath>

namespace sparsejl::params {

namespace {

uint64_t ceil_u64(double x) {
  if (x < 1.0) return 1;
  return static_cast<uint64_t>(std::ceil(x));
}

uint64_t round_up_multiple(uint64_t m, uint64_t s) { return ((m + s - 1) / s) * s; }

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::InvalidArgument, "eps must lie in (0,1)");
}

void check_constants(double c_m, double c_s) {
  if (!(c_m > 0.0)) fail(ErrorCode::InvalidArgument, "c_m must be positive");
  if (!(c_s > 0.0)) fail(ErrorCode::InvalidArgument, "c_s must be positive");
}

}  // namespace

EmbeddingPlan plan_jl(uint64_t n, uint64_t d, double eps, double c_m, double c_s) {
  check_eps(eps);
  check_constants(c_m, c_s);
  if (n < 2) fail(ErrorCode::InvalidArgument, "n must be at least 2 (ln n degenerates)");
  if (d < 2) fail(ErrorCode::InvalidArgument, "d must be at least 2 (ln d degenerates)");

  const double ln_n = std::log(static_cast<double>(n));
  const double ln_d = std::log(static_cast<double>(d));
  const double ln_inv_eps = std::log(1.0 / eps);

  EmbeddingPlan p;
  p.n = n;
  p.d = d;
  p.eps = eps;
  p.c_m = c_m;
  p.c_s = c_s;

  uint64_t m = ceil_u64(c_m * ln_n / (eps * eps));
  uint64_t s =
      ceil_u64(c_s / eps * (ln_n / ln_inv_eps + std::cbrt(ln_n * ln_n * ln_d)));
  if (s > m) {
    s = m;
    p.clamped = true;
  }
  m = round_up_multiple(m, s);

  p.m = m;
  p.s = s;
  p.block_size = m / s;
  p.ell = ceil_u64(std::min(1.0 / std::sqrt(eps), std::pow(ln_n / ln_d, 2.0 / 3.0)));
  return p;
}

SubspacePlan plan_subspace(uint64_t k, double eps, double c_m, double c_s) {
  check_eps(eps);
  check_constants(c_m, c_s);
  if (k < 2) fail(ErrorCode::InvalidArgument, "k must be at least 2");

  const double kd = static_cast<double>(k);
  const double ln_k = std::log(kd);
  const double ln_inv_eps = std::log(1.0 / eps);

  SubspacePlan p;
  p.k = k;
  p.eps = eps;
  p.c_m = c_m;
  p.c_s = c_s;

  uint64_t m = ceil_u64(c_m * kd / (eps * eps));
  uint64_t s = ceil_u64(c_s / eps * (kd / ln_inv_eps + std::cbrt(kd * kd * ln_k)));
  if (s > m) {
    s = m;
    p.clamped = true;
  }
  m = round_up_multiple(m, s);

  p.m = m;
  p.s = s;
  p.block_size = m / s;
  // ln|N+| <= k ln 8 stands in for ln n of the point-set formula.
  const double ln_net = kd * std::log(8.0);
  p.ell = ceil_u64(std::min(1.0 / std::sqrt(eps), std::pow(ln_net / ln_k, 2.0 / 3.0)));
  return p;
}

}  // namespace sparsejl::params
