#pragma once

#include <cstdint>
#include <vector>

#include "slung/analysis.hpp"
#include "slung/sim.hpp"

namespace slung::sweep {

/// One Monte-Carlo run: the scenario trace plus its windowed metrics.
/// `has_metrics` is false when the run aborted before the metric windows
/// held any samples.
struct SweepRun {
  std::uint64_t seed = 0;
  sim::Trace trace;
  analysis::MetricsReport metrics;
  bool has_metrics = false;
};

struct SweepSummary {
  int n_runs = 0;
  int n_aborted = 0;
  int n_with_metrics = 0;
  /// Worst over runs of max(|ctrl err phi_0|, |ctrl err phi_1|) mean_abs, deg.
  double worst_ctrl_err_mean_abs = 0.0;
  /// Worst over runs of the cable-angle estimation-error mean_abs, deg.
  double worst_est_err_mean_abs = 0.0;
};

/// Per-run seeds derived from `base_seed` with the splitmix64 sequence, so a
/// batch is reproducible from a single number and runs stay decorrelated.
std::vector<std::uint64_t> derive_seeds(std::uint64_t base_seed, int n);

/// Runs `n_runs` copies of the scenario, identical except for the noise seed.
/// Runs are independent, so with `parallel` they execute under OpenMP; the
/// serial path is the reference and the outputs are bit-identical because
/// each run writes only its own slot.
std::vector<SweepRun> run_batch(const SystemParams& p, const Setpoints& sp,
                                const sim::SimConfig& cfg,
                                const estimator::EstimatorConfig& est_cfg,
                                const control::Gains& gains,
                                std::uint64_t base_seed, int n_runs,
                                bool parallel = true);

SweepSummary summarize(const std::vector<SweepRun>& runs);

}  // namespace slung::sweep
