#include "sparsejl/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "sparsejl/diagnostics.hpp"
#include "sparsejl/prng.hpp"

namespace sparsejl::hardness {

namespace {

// Binomial coefficient as a double; saturates gracefully for guard checks.
double comb_d(uint64_t n, uint64_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double acc = 1.0;
  for (uint64_t i = 1; i <= k; ++i) {
    acc *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (acc > 1e18) return 1e18;
  }
  return acc;
}

constexpr uint64_t kInstanceStream = uint64_t{1} << 62;

}  // namespace

double solve_ell_real(uint64_t n, uint64_t d) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "solve_ell: n must be at least 2");
  if (d < 3) fail(ErrorCode::InvalidArgument, "solve_ell: d must be at least 3");
  const double ln_n = std::log(static_cast<double>(n));
  const double e = std::exp(1.0);
  double ell = 1.0;
  for (int it = 0; it < 50; ++it) {
    const double ratio = e * static_cast<double>(d) / ell;
    if (ratio <= 1.0 || ell >= static_cast<double>(d))
      fail(ErrorCode::NoResult, "solve_ell: iteration diverged (ell reached d)");
    const double next = ln_n / std::log(ratio);
    if (std::fabs(next - ell) < 1e-9) return next;
    ell = next;
  }
  return ell;
}

uint64_t solve_ell(uint64_t n, uint64_t d) {
  const double ell = solve_ell_real(n, d);
  const double rounded = std::floor(ell + 0.5);
  return rounded < 1.0 ? 1 : static_cast<uint64_t>(rounded);
}

Dataset HardInstance::to_dataset() const {
  Dataset X;
  X.dim = static_cast<uint32_t>(d);
  const double value = 1.0 / std::sqrt(static_cast<double>(ell));
  for (const std::vector<uint32_t>& S : subsets) {
    SparseVector v;
    v.dim = X.dim;
    for (uint32_t i : S) v.push(i, value);
    X.add(std::move(v));
  }
  if (includes_basis) {
    for (uint64_t i = 0; i < d; ++i) {
      SparseVector v;
      v.dim = X.dim;
      v.push(static_cast<uint32_t>(i), 1.0);
      X.add(std::move(v));
    }
  }
  if (includes_origin) {
    SparseVector zero;
    zero.dim = X.dim;
    X.add(std::move(zero));
  }
  return X;
}

HardInstance generate(uint64_t n_target, uint64_t d, uint64_t cap, uint64_t seed) {
  if (cap < d + 1) fail(ErrorCode::InvalidArgument, "generate: cap must be at least d + 1");
  HardInstance inst;
  inst.d = d;
  inst.ell = solve_ell(n_target, d);

  const uint64_t budget = cap - d - 1;
  const double total = comb_d(d, inst.ell);

  if (inst.ell == 1) {
    // Singleton subset vectors duplicate the basis vectors; drop them all.
    inst.dedup_dropped = std::min<uint64_t>(static_cast<uint64_t>(total), budget);
    return inst;
  }

  if (total <= static_cast<double>(budget)) {
    // Lexicographic enumeration of all ell-subsets.
    std::vector<uint32_t> S(inst.ell);
    for (uint64_t i = 0; i < inst.ell; ++i) S[i] = static_cast<uint32_t>(i);
    for (;;) {
      inst.subsets.push_back(S);
      // Advance to the next combination.
      int64_t pos = static_cast<int64_t>(inst.ell) - 1;
      while (pos >= 0 && S[pos] == d - inst.ell + pos) --pos;
      if (pos < 0) break;
      ++S[pos];
      for (uint64_t q = pos + 1; q < inst.ell; ++q) S[q] = S[q - 1] + 1;
    }
  } else {
    rng::Stream rs(rng::derive_seed(seed, kInstanceStream), 0);
    std::set<std::vector<uint32_t>> seen;
    while (seen.size() < budget) {
      // Floyd's sampling of an ell-subset of [d].
      std::vector<uint32_t> S;
      for (uint64_t t = d - inst.ell; t < d; ++t) {
        const uint32_t r = static_cast<uint32_t>(rs.below(t + 1));
        if (std::find(S.begin(), S.end(), r) == S.end())
          S.push_back(r);
        else
          S.push_back(static_cast<uint32_t>(t));
      }
      std::sort(S.begin(), S.end());
      seen.insert(std::move(S));
    }
    inst.subsets.assign(seen.begin(), seen.end());
  }
  return inst;
}

HeavySubsetCount count_heavy_subsets(const std::vector<double>& v, uint64_t s, uint64_t t) {
  const uint64_t m = v.size();
  if (t < 1) fail(ErrorCode::InvalidArgument, "count_heavy_subsets: t must be >= 1");
  if (s < 1 || s > m / 2)
    fail(ErrorCode::InvalidArgument, "count_heavy_subsets: need 1 <= s <= m/2");
  uint64_t nnz = 0;
  double norm2 = 0.0;
  for (double x : v) {
    if (x != 0.0) ++nnz;
    norm2 += x * x;
  }
  if (nnz > s) fail(ErrorCode::InvalidArgument, "count_heavy_subsets: vector has more than s nonzeros");
  if (comb_d(m, t) > 1e7) fail(ErrorCode::GuardExceeded, "count_heavy_subsets: C(m,t) exceeds 1e7");

  HeavySubsetCount out;
  out.hypothesis_ok = 8 * t <= s;  // lemma hypothesis; bound is vacuous otherwise

  const double lower = comb_d(m - 1, t - 1);
  const double power = std::pow(static_cast<double>(s) / (8.0 * static_cast<double>(t)),
                                static_cast<double>(t));
  out.bound = static_cast<int64_t>(std::floor(std::min(lower, power)));

  const double threshold = static_cast<double>(t) * norm2 / (2.0 * static_cast<double>(s));
  std::vector<double> sq(m);
  for (uint64_t i = 0; i < m; ++i) sq[i] = v[i] * v[i];

  std::vector<uint32_t> T(t);
  for (uint64_t i = 0; i < t; ++i) T[i] = static_cast<uint32_t>(i);
  for (;;) {
    double mass = 0.0;
    for (uint32_t i : T) mass += sq[i];
    if (mass >= threshold) ++out.count;
    int64_t pos = static_cast<int64_t>(t) - 1;
    while (pos >= 0 && T[pos] == m - t + pos) --pos;
    if (pos < 0) break;
    ++T[pos];
    for (uint64_t q = pos + 1; q < t; ++q) T[q] = T[q - 1] + 1;
  }
  return out;
}

std::vector<SignatureGroup> signature_groups(const sketch::SparseJLMatrix& A, uint64_t t) {
  const uint64_t s = A.sparsity();
  const uint64_t d = A.cols_count();
  if (t < 1 || t > s) fail(ErrorCode::InvalidArgument, "signature_groups: need 1 <= t <= s");
  if (static_cast<double>(d) * comb_d(s, t) > 1e7)
    fail(ErrorCode::GuardExceeded, "signature_groups: d * C(s,t) exceeds 1e7");

  using Key = std::pair<std::vector<uint32_t>, std::vector<int8_t>>;
  std::map<Key, std::vector<uint32_t>> groups;

  std::vector<uint32_t> pick(t);
  for (uint64_t j = 0; j < d; ++j) {
    // Entries of a column are block-ordered, hence already row-ascending.
    for (uint64_t i = 0; i < t; ++i) pick[i] = static_cast<uint32_t>(i);
    for (;;) {
      Key key;
      key.first.reserve(t);
      key.second.reserve(t);
      for (uint32_t b : pick) {
        key.first.push_back(A.row(j, b));
        key.second.push_back(A.sign(j, b));
      }
      groups[key].push_back(static_cast<uint32_t>(j));
      int64_t pos = static_cast<int64_t>(t) - 1;
      while (pos >= 0 && pick[pos] == s - t + pos) --pos;
      if (pos < 0) break;
      ++pick[pos];
      for (uint64_t q = pos + 1; q < t; ++q) pick[q] = pick[q - 1] + 1;
    }
  }

  std::vector<SignatureGroup> out;
  out.reserve(groups.size());
  for (auto& [key, cols] : groups) {
    SignatureGroup g;
    g.rows = key.first;
    g.signs = key.second;
    g.columns = std::move(cols);
    out.push_back(std::move(g));
  }
  std::stable_sort(out.begin(), out.end(), [](const SignatureGroup& a, const SignatureGroup& b) {
    return a.columns.size() > b.columns.size();
  });
  return out;
}

std::vector<SweepRow> empirical_lower_bound(uint64_t d, uint64_t n_target, double eps,
                                            const std::vector<uint64_t>& s_values,
                                            uint64_t trials, uint64_t seed, uint64_t cap) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "empirical_lower_bound: trials >= 1");
  if (!(eps > 0.0 && eps < 1.0))
    fail(ErrorCode::InvalidArgument, "empirical_lower_bound: eps in (0,1)");

  const HardInstance inst = generate(n_target, d, cap, seed);
  const Dataset X = inst.to_dataset();
  const uint64_t m0 = static_cast<uint64_t>(
      std::ceil(std::log(static_cast<double>(n_target)) / (eps * eps)));

  std::vector<SweepRow> table;
  table.reserve(s_values.size());
  for (uint64_t s : s_values) {
    if (s < 1) fail(ErrorCode::InvalidArgument, "empirical_lower_bound: s values must be >= 1");
    SweepRow row;
    row.s = s;
    row.m = std::max(s, ((m0 + s - 1) / s) * s);
    params::EmbeddingPlan plan;
    plan.n = n_target;
    plan.d = d;
    plan.eps = eps;
    plan.m = row.m;
    plan.s = s;
    plan.block_size = row.m / s;
    row.success_frequency = diagnostics::monte_carlo_success(plan, X, trials, seed);
    table.push_back(row);
  }
  return table;
}

std::vector<HeavySubsetCount> verify_lemma7(uint64_t m, uint64_t s, uint64_t t, uint64_t trials,
                                            uint64_t seed) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "verify_lemma7: trials >= 1");
  std::vector<HeavySubsetCount> out(trials);
  for (uint64_t trial = 0; trial < trials; ++trial) {
    rng::Stream rs(rng::derive_seed(seed, trial), 0);
    std::vector<double> v(m, 0.0);
    // Exactly s nonzeros on a uniform support.
    std::vector<uint32_t> support;
    for (uint64_t q = m - s; q < m; ++q) {
      const uint32_t r = static_cast<uint32_t>(rs.below(q + 1));
      if (std::find(support.begin(), support.end(), r) == support.end())
        support.push_back(r);
      else
        support.push_back(static_cast<uint32_t>(q));
    }
    for (uint32_t i : support) {
      double x = rs.normal();
      if (x == 0.0) x = 1.0;
      v[i] = x;
    }
    out[trial] = count_heavy_subsets(v, s, t);
  }
  return out;
}

double suggested_t(uint64_t d, double eps, uint64_t ell, uint64_t m, uint64_t s) {
  if (m <= s || ell == 0) return 0.0;
  const double num = std::log(eps * static_cast<double>(d) / static_cast<double>(ell));
  const double den = std::log(static_cast<double>(m) / static_cast<double>(s));
  if (den <= 0.0 || num <= 0.0) return 0.0;
  return num / den;
}

}  // namespace sparsejl::hardness
