// Command-line front end. Everything here goes through the C API in
// sparsejl.h; diagnostics go to stderr, data to stdout or files, and every
// run with identical flags produces byte-identical primary outputs.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparsejl.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::string fmt(double v) {
  // Shortest decimal form that parses back to the same bits.
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

int exit_code(sjl_status_t st) { return st == SJL_ERR_IO ? kExitIo : kExitValidation; }

// Prints the library error and returns the mapped exit code.
int bail(const char* what, sjl_status_t st) {
  std::fprintf(stderr, "error: %s: %s\n", what, sjl_last_error());
  return exit_code(st);
}

struct MatrixHandle {
  sjl_matrix_t* p = nullptr;
  ~MatrixHandle() { sjl_matrix_free(p); }
};
struct DatasetHandle {
  sjl_dataset_t* p = nullptr;
  ~DatasetHandle() { sjl_dataset_free(p); }
};
struct BasisHandle {
  sjl_basis_t* p = nullptr;
  ~BasisHandle() { sjl_basis_free(p); }
};
struct DenseHandle {
  sjl_dense_t* p = nullptr;
  ~DenseHandle() { sjl_dense_free(p); }
};

sjl_data_format_t parse_format(const std::string& name) {
  if (name == "sparse") return SJL_FORMAT_SPARSE_TEXT;
  if (name == "csv") return SJL_FORMAT_DENSE_CSV;
  return SJL_FORMAT_AUTO;
}

void print_plan(const sjl_plan_t& p, bool pretty) {
  if (pretty) {
    std::printf("embedding plan for n=%" PRIu64 " points in dimension d=%" PRIu64 "\n", p.n, p.d);
    std::printf("  eps          %s\n", fmt(p.eps).c_str());
    std::printf("  constants    c_m=%s c_s=%s\n", fmt(p.c_m).c_str(), fmt(p.c_s).c_str());
    std::printf("  target dim   m=%" PRIu64 " (%" PRIu64 " blocks of %" PRIu64 ")\n", p.m, p.s,
                p.block_size);
    std::printf("  sparsity     s=%" PRIu64 "%s\n", p.s, p.clamped ? " (clamped to m)" : "");
    std::printf("  head size    ell=%" PRIu64 "\n", p.ell);
    return;
  }
  std::printf("kind=jl n=%" PRIu64 " d=%" PRIu64 " eps=%s c_m=%s c_s=%s m=%" PRIu64 " s=%" PRIu64
              " ell=%" PRIu64 " block_size=%" PRIu64 " clamped=%d\n",
              p.n, p.d, fmt(p.eps).c_str(), fmt(p.c_m).c_str(), fmt(p.c_s).c_str(), p.m, p.s,
              p.ell, p.block_size, p.clamped);
}

void print_subspace_plan(const sjl_subspace_plan_t& p, bool pretty) {
  if (pretty) {
    std::printf("subspace embedding plan for k=%" PRIu64 "\n", p.k);
    std::printf("  eps          %s\n", fmt(p.eps).c_str());
    std::printf("  constants    c_m=%s c_s=%s\n", fmt(p.c_m).c_str(), fmt(p.c_s).c_str());
    std::printf("  target dim   m=%" PRIu64 " (%" PRIu64 " blocks of %" PRIu64 ")\n", p.m, p.s,
                p.block_size);
    std::printf("  sparsity     s=%" PRIu64 "%s\n", p.s, p.clamped ? " (clamped to m)" : "");
    std::printf("  head size    ell=%" PRIu64 "\n", p.ell);
    return;
  }
  std::printf("kind=subspace k=%" PRIu64 " eps=%s c_m=%s c_s=%s m=%" PRIu64 " s=%" PRIu64
              " ell=%" PRIu64 " block_size=%" PRIu64 " clamped=%d\n",
              p.k, fmt(p.eps).c_str(), fmt(p.c_m).c_str(), fmt(p.c_s).c_str(), p.m, p.s, p.ell,
              p.block_size, p.clamped);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse Johnson-Lindenstrauss embeddings, subspace sketching and "
               "lower-bound experiments"};
  app.require_subcommand(0, 1);

  unsigned threads = 0;
  bool threads_given = false;
  app.add_option("--threads", threads, "worker threads (default: SPARSEJL_THREADS or hardware)")
      ->each([&](const std::string&) { threads_given = true; });
  bool show_version = false;
  app.add_flag("--version", show_version, "print the matrix file format version");

  // ---- plan
  auto* plan_cmd = app.add_subcommand("plan", "resolve embedding parameters");
  uint64_t plan_n = 0, plan_d = 0, plan_k = 0;
  double plan_eps = 0.0, plan_cm = 1.0, plan_cs = 1.0;
  bool plan_pretty = false;
  plan_cmd->add_option("--n", plan_n, "point-set size (JL plan)");
  plan_cmd->add_option("--d", plan_d, "ambient dimension (JL plan)");
  plan_cmd->add_option("--k", plan_k, "subspace dimension (subspace plan)");
  plan_cmd->add_option("--eps", plan_eps, "distortion parameter in (0,1)")->required();
  plan_cmd->add_option("--cm", plan_cm, "constant for m");
  plan_cmd->add_option("--cs", plan_cs, "constant for s");
  plan_cmd->add_flag("--pretty", plan_pretty, "human-readable output");

  // ---- sample
  auto* sample_cmd = app.add_subcommand("sample", "sample a matrix and write it");
  uint64_t sm = 0, sd = 0, ss = 0, sseed = 0;
  std::string sample_out;
  bool sample_explicit = false;
  sample_cmd->add_option("--m", sm, "rows")->required();
  sample_cmd->add_option("--d", sd, "columns")->required();
  sample_cmd->add_option("--s", ss, "nonzeros per column")->required();
  sample_cmd->add_option("--seed", sseed, "sampling seed");
  sample_cmd->add_option("--out", sample_out, "output path")->required();
  sample_cmd->add_flag("--explicit", sample_explicit, "append per-column (row,sign) dump");

  // ---- embed
  auto* embed_cmd = app.add_subcommand("embed", "embed a dataset");
  std::string embed_matrix, embed_data, embed_out, embed_format = "auto";
  bool embed_one_based = false;
  embed_cmd->add_option("--matrix", embed_matrix, "matrix file")->required();
  embed_cmd->add_option("--data", embed_data, "dataset file")->required();
  embed_cmd->add_option("--out", embed_out, "output CSV")->required();
  embed_cmd->add_option("--format", embed_format, "sparse|csv (default: by extension)");
  embed_cmd->add_flag("--one-based", embed_one_based, "indices in the data are 1-based");

  // ---- distortion
  auto* dist_cmd = app.add_subcommand("distortion", "pairwise distortion report");
  std::string dist_matrix, dist_data, dist_pairs = "all", dist_dump, dist_format = "auto";
  double dist_eps = 0.0;
  uint64_t dist_seed = 0;
  bool dist_one_based = false;
  dist_cmd->add_option("--matrix", dist_matrix, "matrix file")->required();
  dist_cmd->add_option("--data", dist_data, "dataset file")->required();
  dist_cmd->add_option("--eps", dist_eps, "violation threshold")->required();
  dist_cmd->add_option("--pairs", dist_pairs, "all or a sampled pair budget");
  dist_cmd->add_option("--seed", dist_seed, "pair sampling seed");
  dist_cmd->add_option("--dump-pairs", dist_dump, "write per-pair distortions to this CSV");
  dist_cmd->add_option("--format", dist_format, "sparse|csv");
  dist_cmd->add_flag("--one-based", dist_one_based, "indices in the data are 1-based");

  // ---- calibrate
  auto* cal_cmd = app.add_subcommand("calibrate", "search constants on the grid");
  double cal_target = 0.0, cal_eps = 0.0;
  uint64_t cal_budget = 0, cal_n = 0, cal_d = 0, cal_seed = 0;
  cal_cmd->add_option("--target", cal_target, "required success frequency")->required();
  cal_cmd->add_option("--budget", cal_budget, "Monte Carlo trials per grid point")->required();
  cal_cmd->add_option("--n", cal_n, "scenario point count")->required();
  cal_cmd->add_option("--d", cal_d, "scenario dimension")->required();
  cal_cmd->add_option("--eps", cal_eps, "scenario eps")->required();
  cal_cmd->add_option("--seed", cal_seed, "rng seed");

  // ---- subspace-eval
  auto* sub_cmd = app.add_subcommand("subspace-eval", "subspace distortion of sampled matrices");
  std::string sub_basis;
  uint64_t sub_k = 0, sub_d = 0, sub_basis_seed = 0, sub_seed = 0, sub_trials = 0;
  double sub_eps = 0.0, sub_cm = 1.0, sub_cs = 1.0;
  sub_cmd->add_option("--basis", sub_basis, "CSV whose rows span the subspace");
  sub_cmd->add_option("--random-k", sub_k, "random subspace dimension");
  sub_cmd->add_option("--d", sub_d, "ambient dimension for --random-k");
  sub_cmd->add_option("--basis-seed", sub_basis_seed, "seed for --random-k");
  sub_cmd->add_option("--eps", sub_eps, "distortion parameter")->required();
  sub_cmd->add_option("--cm", sub_cm, "constant for m");
  sub_cmd->add_option("--cs", sub_cs, "constant for s");
  sub_cmd->add_option("--seed", sub_seed, "matrix seed");
  sub_cmd->add_option("--trials", sub_trials, "Monte Carlo trials (default: one matrix)");

  // ---- regress
  auto* reg_cmd = app.add_subcommand("regress", "sketch-and-solve least squares");
  std::string reg_design, reg_target, reg_out;
  double reg_eps = 0.0, reg_cm = 1.0, reg_cs = 1.0, reg_ridge = 0.0;
  uint64_t reg_seed = 0;
  bool reg_exact = false;
  reg_cmd->add_option("--design", reg_design, "design matrix CSV (n x p)")->required();
  reg_cmd->add_option("--target", reg_target, "target CSV (first column used)")->required();
  reg_cmd->add_option("--eps", reg_eps, "distortion parameter")->required();
  reg_cmd->add_option("--cm", reg_cm, "constant for m");
  reg_cmd->add_option("--cs", reg_cs, "constant for s");
  reg_cmd->add_option("--seed", reg_seed, "matrix seed");
  reg_cmd->add_option("--ridge", reg_ridge, "explicit ridge term lambda");
  reg_cmd->add_flag("--exact-compare", reg_exact, "also solve exactly and report the ratio");
  reg_cmd->add_option("--out", reg_out, "write beta as one value per line");

  // ---- hard-instance
  auto* hard_cmd = app.add_subcommand("hard-instance", "write the lower-bound instance");
  uint64_t hard_d = 0, hard_n = 0, hard_cap = 0, hard_seed = 0;
  std::string hard_out;
  hard_cmd->add_option("--d", hard_d, "ambient dimension")->required();
  hard_cmd->add_option("--n", hard_n, "target cardinality driving ell")->required();
  hard_cmd->add_option("--cap", hard_cap, "instance size cap (>= d+1)")->required();
  hard_cmd->add_option("--seed", hard_seed, "subset sampling seed");
  hard_cmd->add_option("--out", hard_out, "output dataset path")->required();

  // ---- verify-lemma7
  auto* lem_cmd = app.add_subcommand("verify-lemma7", "brute-force heavy-subset counts");
  uint64_t lem_m = 0, lem_s = 0, lem_t = 0, lem_trials = 0, lem_seed = 0;
  lem_cmd->add_option("--m", lem_m, "vector length")->required();
  lem_cmd->add_option("--s", lem_s, "nonzero budget")->required();
  lem_cmd->add_option("--t", lem_t, "subset size")->required();
  lem_cmd->add_option("--trials", lem_trials, "random vectors")->required();
  lem_cmd->add_option("--seed", lem_seed, "rng seed");

  // ---- lb-sweep
  auto* lb_cmd = app.add_subcommand("lb-sweep", "sparsity sweep on the hard instance");
  uint64_t lb_d = 0, lb_n = 0, lb_trials = 0, lb_seed = 0, lb_cap = 0;
  double lb_eps = 0.0;
  std::string lb_s, lb_out;
  lb_cmd->add_option("--d", lb_d, "ambient dimension")->required();
  lb_cmd->add_option("--n", lb_n, "target cardinality")->required();
  lb_cmd->add_option("--eps", lb_eps, "distortion parameter")->required();
  lb_cmd->add_option("--s", lb_s, "comma-separated sparsities")->required();
  lb_cmd->add_option("--trials", lb_trials, "trials per sparsity")->required();
  lb_cmd->add_option("--seed", lb_seed, "rng seed");
  lb_cmd->add_option("--cap", lb_cap, "instance size cap")->required();
  lb_cmd->add_option("--out", lb_out, "CSV output path (default: stdout)");

  // ---- diagnose
  auto* diag_cmd = app.add_subcommand("diagnose", "event battery over a dataset");
  std::string diag_data, diag_format = "auto";
  double diag_eps = 0.0, diag_cm = 1.0, diag_cs = 1.0;
  uint64_t diag_trials = 100, diag_seed = 0, diag_n = 0;
  bool diag_one_based = false;
  diag_cmd->add_option("--data", diag_data, "dataset file")->required();
  diag_cmd->add_option("--eps", diag_eps, "distortion parameter")->required();
  diag_cmd->add_option("--cm", diag_cm, "constant for m");
  diag_cmd->add_option("--cs", diag_cs, "constant for s");
  diag_cmd->add_option("--n", diag_n, "plan cardinality (default: dataset size)");
  diag_cmd->add_option("--trials", diag_trials, "sampled matrices");
  diag_cmd->add_option("--seed", diag_seed, "rng seed");
  diag_cmd->add_option("--format", diag_format, "sparse|csv");
  diag_cmd->add_flag("--one-based", diag_one_based, "indices in the data are 1-based");

  CLI11_PARSE(app, argc, argv);

  if (!threads_given) {
    if (const char* env = std::getenv("SPARSEJL_THREADS")) threads = std::strtoul(env, nullptr, 10);
  }
  sjl_set_threads(threads);

  if (show_version) {
    std::printf("format_version=%d\n", sjl_format_version());
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::fprintf(stderr, "%s\n", app.help().c_str());
    return kExitValidation;
  }

  if (plan_cmd->parsed()) {
    if (plan_k > 0) {
      sjl_subspace_plan_t p;
      const sjl_status_t st = sjl_plan_subspace(plan_k, plan_eps, plan_cm, plan_cs, &p);
      if (st != SJL_OK) return bail("plan", st);
      print_subspace_plan(p, plan_pretty);
      return 0;
    }
    if (plan_n == 0 || plan_d == 0) {
      std::fprintf(stderr, "error: plan: provide --n and --d, or --k\n");
      return kExitValidation;
    }
    sjl_plan_t p;
    const sjl_status_t st = sjl_plan_jl(plan_n, plan_d, plan_eps, plan_cm, plan_cs, &p);
    if (st != SJL_OK) return bail("plan", st);
    print_plan(p, plan_pretty);
    return 0;
  }

  if (sample_cmd->parsed()) {
    MatrixHandle A;
    sjl_status_t st = sjl_matrix_sample(sm, sd, ss, sseed, &A.p);
    if (st != SJL_OK) return bail("sample", st);
    st = sjl_matrix_save(A.p, sample_out.c_str(), sample_explicit ? 1 : 0);
    if (st != SJL_OK) return bail("sample", st);
    std::printf("m=%" PRIu64 " d=%" PRIu64 " s=%" PRIu64 " seed=%" PRIu64 " out=%s explicit=%d\n",
                sm, sd, ss, sseed, sample_out.c_str(), sample_explicit ? 1 : 0);
    return 0;
  }

  if (embed_cmd->parsed()) {
    MatrixHandle A;
    sjl_status_t st = sjl_matrix_load(embed_matrix.c_str(), &A.p);
    if (st != SJL_OK) return bail("embed", st);
    DatasetHandle X;
    st = sjl_dataset_load(embed_data.c_str(), parse_format(embed_format), embed_one_based ? 1 : 0,
                          static_cast<uint32_t>(sjl_matrix_d(A.p)), &X.p);
    if (st != SJL_OK) return bail("embed", st);
    st = sjl_embed_to_csv(A.p, X.p, embed_out.c_str());
    if (st != SJL_OK) return bail("embed", st);
    std::printf("points=%" PRIu64 " m=%" PRIu64 " out=%s\n", sjl_dataset_size(X.p),
                sjl_matrix_m(A.p), embed_out.c_str());
    return 0;
  }

  if (dist_cmd->parsed()) {
    uint64_t pairs = 0;
    if (dist_pairs != "all") {
      char* end = nullptr;
      pairs = std::strtoull(dist_pairs.c_str(), &end, 10);
      if (end == dist_pairs.c_str() || *end != '\0' || pairs == 0) {
        std::fprintf(stderr, "error: distortion: --pairs must be 'all' or a positive count\n");
        return kExitValidation;
      }
    }
    MatrixHandle A;
    sjl_status_t st = sjl_matrix_load(dist_matrix.c_str(), &A.p);
    if (st != SJL_OK) return bail("distortion", st);
    DatasetHandle X;
    st = sjl_dataset_load(dist_data.c_str(), parse_format(dist_format), dist_one_based ? 1 : 0,
                          static_cast<uint32_t>(sjl_matrix_d(A.p)), &X.p);
    if (st != SJL_OK) return bail("distortion", st);
    sjl_distortion_report_t rep;
    st = sjl_distortion(A.p, X.p, dist_eps, pairs, dist_seed,
                        dist_dump.empty() ? nullptr : dist_dump.c_str(), &rep);
    if (st != SJL_OK) return bail("distortion", st);
    if (rep.forced_sampled)
      std::fprintf(stderr,
                   "warning: pair count exceeds the all-pairs cap; sampled %" PRIu64
                   " pairs instead\n",
                   rep.pair_budget);
    std::printf("pair_count=%" PRIu64 "\n", rep.pair_count);
    std::printf("max_rel_distortion=%s\n", fmt(rep.max_rel_distortion).c_str());
    std::printf("mean_rel_distortion=%s\n", fmt(rep.mean_rel_distortion).c_str());
    std::printf("violations_at_eps=%" PRIu64 "\n", rep.violations_at_eps);
    std::printf("eps=%s\n", fmt(rep.eps).c_str());
    if (rep.sampled)
      std::printf("mode=sampled pairs=%" PRIu64 " seed=%" PRIu64 "\n", rep.pair_budget,
                  rep.pair_seed);
    else
      std::printf("mode=all-pairs\n");
    return 0;
  }

  if (cal_cmd->parsed()) {
    double cm = 0.0, cs = 0.0;
    const sjl_status_t st =
        sjl_calibrate(cal_target, cal_budget, cal_n, cal_d, cal_eps, cal_seed, &cm, &cs);
    if (st != SJL_OK) return bail("calibrate", st);
    std::printf("c_m=%s c_s=%s\n", fmt(cm).c_str(), fmt(cs).c_str());
    return 0;
  }

  if (sub_cmd->parsed()) {
    BasisHandle B;
    sjl_status_t st;
    if (!sub_basis.empty())
      st = sjl_basis_load_csv(sub_basis.c_str(), &B.p);
    else if (sub_k > 0 && sub_d > 0)
      st = sjl_basis_random(sub_k, sub_d, sub_basis_seed, &B.p);
    else {
      std::fprintf(stderr, "error: subspace-eval: provide --basis or --random-k with --d\n");
      return kExitValidation;
    }
    if (st != SJL_OK) return bail("subspace-eval", st);

    sjl_subspace_plan_t plan;
    st = sjl_plan_subspace(sjl_basis_k(B.p), sub_eps, sub_cm, sub_cs, &plan);
    if (st != SJL_OK) return bail("subspace-eval", st);
    print_subspace_plan(plan, false);

    if (sub_trials == 0) {
      MatrixHandle A;
      st = sjl_matrix_sample(plan.m, sjl_basis_d(B.p), plan.s, sub_seed, &A.p);
      if (st != SJL_OK) return bail("subspace-eval", st);
      double dev = 0.0;
      st = sjl_subspace_distortion(A.p, B.p, &dev);
      if (st != SJL_OK) return bail("subspace-eval", st);
      std::printf("seed=%" PRIu64 " distortion=%s\n", sub_seed, fmt(dev).c_str());
      return 0;
    }
    uint64_t succ = 0;
    for (uint64_t t = 0; t < sub_trials; ++t) {
      MatrixHandle A;
      st = sjl_matrix_sample(plan.m, sjl_basis_d(B.p), plan.s, sjl_derive_seed(sub_seed, t), &A.p);
      if (st != SJL_OK) return bail("subspace-eval", st);
      double dev = 0.0;
      st = sjl_subspace_distortion(A.p, B.p, &dev);
      if (st != SJL_OK) return bail("subspace-eval", st);
      if (dev <= sub_eps) ++succ;
    }
    std::printf("trials=%" PRIu64 " success_frequency=%s\n", sub_trials,
                fmt(static_cast<double>(succ) / static_cast<double>(sub_trials)).c_str());
    return 0;
  }

  if (reg_cmd->parsed()) {
    DenseHandle X, y;
    sjl_status_t st = sjl_dense_load_csv(reg_design.c_str(), &X.p);
    if (st != SJL_OK) return bail("regress", st);
    st = sjl_dense_load_csv(reg_target.c_str(), &y.p);
    if (st != SJL_OK) return bail("regress", st);

    const uint64_t p = sjl_dense_cols(X.p);
    std::vector<double> beta(p, 0.0);
    sjl_subspace_plan_t plan;
    uint64_t rank = 0;
    st = sjl_sketch_solve(X.p, y.p, reg_eps, reg_seed, reg_cm, reg_cs, reg_ridge, beta.data(),
                          &plan, &rank);
    if (st != SJL_OK) return bail("regress", st);
    print_subspace_plan(plan, false);

    double r2 = 0.0;
    st = sjl_residual_norm2(X.p, y.p, beta.data(), beta.size(), &r2);
    if (st != SJL_OK) return bail("regress", st);

    std::printf("effective_rank=%" PRIu64 "\n", rank);
    std::printf("residual2=%s\n", fmt(r2).c_str());
    std::string joined;
    for (size_t i = 0; i < beta.size(); ++i) {
      if (i > 0) joined += ',';
      joined += fmt(beta[i]);
    }
    std::printf("beta=%s\n", joined.c_str());

    if (reg_exact) {
      std::vector<double> exact(p, 0.0);
      uint64_t exact_rank = 0;
      st = sjl_exact_solve(X.p, y.p, exact.data(), &exact_rank);
      if (st != SJL_OK) return bail("regress", st);
      double er2 = 0.0;
      st = sjl_residual_norm2(X.p, y.p, exact.data(), exact.size(), &er2);
      if (st != SJL_OK) return bail("regress", st);
      std::printf("exact_residual2=%s\n", fmt(er2).c_str());
      const double ratio = er2 > 0.0 ? r2 / er2 : (r2 == 0.0 ? 1.0 : HUGE_VAL);
      std::printf("residual_ratio=%s\n", fmt(ratio).c_str());
    }

    if (!reg_out.empty()) {
      FILE* f = std::fopen(reg_out.c_str(), "wb");
      if (!f) {
        std::fprintf(stderr, "error: regress: cannot open %s\n", reg_out.c_str());
        return kExitIo;
      }
      for (double b : beta) std::fprintf(f, "%s\n", fmt(b).c_str());
      std::fclose(f);
    }
    return 0;
  }

  if (hard_cmd->parsed()) {
    DatasetHandle X;
    uint64_t ell = 0, subsets = 0;
    sjl_status_t st = sjl_hard_instance(hard_n, hard_d, hard_cap, hard_seed, &X.p, &ell, &subsets);
    if (st != SJL_OK) return bail("hard-instance", st);
    st = sjl_dataset_save(X.p, hard_out.c_str());
    if (st != SJL_OK) return bail("hard-instance", st);
    std::printf("ell=%" PRIu64 " subsets=%" PRIu64 " size=%" PRIu64 " out=%s\n", ell, subsets,
                sjl_dataset_size(X.p), hard_out.c_str());
    return 0;
  }

  if (lem_cmd->parsed()) {
    std::vector<uint64_t> counts(lem_trials, 0);
    std::vector<int64_t> bounds(lem_trials, 0);
    int hyp_ok = 0;
    const sjl_status_t st = sjl_verify_lemma7(lem_m, lem_s, lem_t, lem_trials, lem_seed,
                                              counts.data(), bounds.data(), &hyp_ok);
    if (st != SJL_OK) return bail("verify-lemma7", st);
    uint64_t violations = 0;
    for (uint64_t i = 0; i < lem_trials; ++i) {
      std::printf("trial=%" PRIu64 " count=%" PRIu64 " bound=%" PRId64 "\n", i, counts[i],
                  bounds[i]);
      if (static_cast<int64_t>(counts[i]) < bounds[i]) ++violations;
    }
    if (!hyp_ok)
      std::fprintf(stderr, "note: t > s/8, the lemma bound is vacuous for these parameters\n");
    std::printf("violations=%" PRIu64 " hypothesis_ok=%d result=%s\n", violations, hyp_ok,
                violations == 0 ? "PASS" : "FAIL");
    return violations == 0 ? 0 : kExitValidation;
  }

  if (lb_cmd->parsed()) {
    std::vector<uint64_t> svals;
    {
      std::string tok;
      for (char c : lb_s + ",") {
        if (c == ',') {
          if (!tok.empty()) svals.push_back(std::strtoull(tok.c_str(), nullptr, 10));
          tok.clear();
        } else {
          tok += c;
        }
      }
    }
    if (svals.empty()) {
      std::fprintf(stderr, "error: lb-sweep: empty --s list\n");
      return kExitValidation;
    }
    std::vector<double> freq(svals.size(), 0.0);
    std::vector<uint64_t> ms(svals.size(), 0);
    sjl_status_t st = sjl_lb_sweep(lb_d, lb_n, lb_eps, svals.data(), svals.size(), lb_trials,
                                   lb_seed, lb_cap, freq.data(), ms.data());
    if (st != SJL_OK) return bail("lb-sweep", st);

    uint64_t ell = 0;
    if (sjl_solve_ell(lb_n, lb_d, &ell) == SJL_OK) {
      for (size_t i = 0; i < svals.size(); ++i) {
        double tsug = 0.0;
        if (sjl_suggested_t(lb_d, lb_eps, ell, ms[i], svals[i], &tsug) == SJL_OK && tsug > 0.0)
          std::fprintf(stderr,
                       "note: s=%" PRIu64 ": suggested signature size t ~ %s (vanishing "
                       "term dropped)\n",
                       svals[i], fmt(tsug).c_str());
      }
    }

    FILE* f = stdout;
    if (!lb_out.empty()) {
      f = std::fopen(lb_out.c_str(), "wb");
      if (!f) {
        std::fprintf(stderr, "error: lb-sweep: cannot open %s\n", lb_out.c_str());
        return kExitIo;
      }
    }
    std::fprintf(f, "s,m,success_frequency\n");
    for (size_t i = 0; i < svals.size(); ++i)
      std::fprintf(f, "%" PRIu64 ",%" PRIu64 ",%s\n", svals[i], ms[i], fmt(freq[i]).c_str());
    if (f != stdout) std::fclose(f);
    return 0;
  }

  if (diag_cmd->parsed()) {
    DatasetHandle X;
    sjl_status_t st = sjl_dataset_load(diag_data.c_str(), parse_format(diag_format),
                                       diag_one_based ? 1 : 0, 0, &X.p);
    if (st != SJL_OK) return bail("diagnose", st);
    const uint64_t n = diag_n > 0 ? diag_n : sjl_dataset_size(X.p);
    sjl_plan_t plan;
    st = sjl_plan_jl(n, sjl_dataset_dim(X.p), diag_eps, diag_cm, diag_cs, &plan);
    if (st != SJL_OK) return bail("diagnose", st);
    sjl_battery_report_t rep;
    st = sjl_diagnose(&plan, X.p, diag_trials, diag_seed, &rep);
    if (st != SJL_OK) return bail("diagnose", st);

    std::printf("trials=%" PRIu64 " points=%" PRIu64 " evaluations=%" PRIu64 "\n", rep.trials,
                rep.points, rep.evaluations);
    std::printf("e1_frequency=%s e1=%s\n", fmt(rep.e1_frequency).c_str(),
                rep.e1_pass ? "PASS" : "FAIL");
    std::printf("e2_frequency=%s e2=%s\n", fmt(rep.e2_frequency).c_str(),
                rep.e2_pass ? "PASS" : "FAIL");
    std::printf("e3_frequency=%s e3=%s\n", fmt(rep.e3_frequency).c_str(),
                rep.e3_pass ? "PASS" : "FAIL");
    if (rep.wb_applicable)
      std::printf("well_behaved_frequency=%s well_behaved=%s\n", fmt(rep.wb_frequency).c_str(),
                  rep.wb_pass ? "PASS" : "FAIL");
    else
      std::printf("well_behaved_frequency=%s well_behaved=NA\n", fmt(rep.wb_frequency).c_str());
    std::printf("head_profile_checked=%" PRIu64 " head_profile_violations=%" PRIu64
                " head_profile=%s\n",
                rep.head_checked, rep.head_violations, rep.head_pass ? "PASS" : "FAIL");
    std::printf("identity_max_residual=%s identity=%s\n", fmt(rep.identity_max_residual).c_str(),
                rep.identity_pass ? "PASS" : "FAIL");
    std::printf("result=%s\n", rep.pass ? "PASS" : "FAIL");
    return rep.pass ? 0 : kExitValidation;
  }

  return 0;
}
