#include "slung/sweep.hpp"

#include <algorithm>

namespace slung::sweep {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<std::uint64_t> derive_seeds(std::uint64_t base_seed, int n) {
  std::vector<std::uint64_t> seeds(static_cast<size_t>(std::max(n, 0)));
  std::uint64_t s = base_seed;
  for (auto& out : seeds) out = splitmix64(s);
  return seeds;
}

std::vector<SweepRun> run_batch(const SystemParams& p, const Setpoints& sp,
                                const sim::SimConfig& cfg,
                                const estimator::EstimatorConfig& est_cfg,
                                const control::Gains& gains,
                                std::uint64_t base_seed, int n_runs,
                                bool parallel) {
  const auto seeds = derive_seeds(base_seed, n_runs);
  std::vector<SweepRun> runs(seeds.size());
  const auto eval = [&](int i) {
    SweepRun& r = runs[i];
    r.seed = seeds[i];
    sim::SimConfig run_cfg = cfg;
    run_cfg.seed = seeds[i];
    r.trace = sim::run_scenario(p, sp, run_cfg, est_cfg, gains);
    try {
      r.metrics = analysis::trace_metrics(r.trace, sp);
      r.has_metrics = true;
    } catch (const EmptyWindow&) {
      r.has_metrics = false;
    }
  };
  const int n = static_cast<int>(runs.size());
  if (parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < n; ++i) eval(i);
  } else {
    for (int i = 0; i < n; ++i) eval(i);
  }
  return runs;
}

SweepSummary summarize(const std::vector<SweepRun>& runs) {
  SweepSummary s;
  s.n_runs = static_cast<int>(runs.size());
  for (const auto& r : runs) {
    if (r.trace.aborted) ++s.n_aborted;
    if (!r.has_metrics) continue;
    ++s.n_with_metrics;
    s.worst_ctrl_err_mean_abs =
        std::max({s.worst_ctrl_err_mean_abs, r.metrics.ctrl_err_phi_0.mean_abs,
                  r.metrics.ctrl_err_phi_1.mean_abs});
    s.worst_est_err_mean_abs =
        std::max({s.worst_est_err_mean_abs, r.metrics.est_err_phi_0.mean_abs,
                  r.metrics.est_err_phi_1.mean_abs});
  }
  return s;
}

}  // namespace slung::sweep
