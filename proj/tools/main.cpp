// slung: scenario runner, trace analyzer, and linearization report.
//
// Exit codes: 0 success, 2 configuration error (bad file, bad flag value,
// malformed CSV), 3 runtime failure (simulation abort, singular setpoints).

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "slung/analysis.hpp"
#include "slung/config.hpp"
#include "slung/csv.hpp"
#include "slung/errors.hpp"
#include "slung/sweep.hpp"

namespace {

using namespace slung;

struct CommonOpts {
  std::string config_path;
  std::string preset_name;
  std::string out_path = "trace.csv";
  std::string mode_override;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int sweep_n = 0;
};

config::RunConfig make_config(const CommonOpts& o) {
  config::RunConfig rc;
  if (!o.config_path.empty()) {
    rc = config::load_file(o.config_path);
  } else if (!o.preset_name.empty()) {
    rc = config::preset(o.preset_name);
  } else {
    rc = config::defaults();
  }
  if (o.seed_set) rc.sim.seed = o.seed;
  if (!o.mode_override.empty()) rc.sim.mode = config::mode_from_name(o.mode_override);
  return rc;
}

void print_kv(const char* key, double v) {
  std::printf("%s = %.9g\n", key, v);
}

std::string sweep_out_path(const std::string& base, int i) {
  std::string stem = base;
  const std::string ext = ".csv";
  if (stem.size() > ext.size() &&
      stem.compare(stem.size() - ext.size(), ext.size(), ext) == 0) {
    stem.resize(stem.size() - ext.size());
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "_%02d.csv", i);
  return stem + buf;
}

int cmd_run(const CommonOpts& o) {
  const auto rc = make_config(o);

  if (o.sweep_n > 0) {
    const auto runs = sweep::run_batch(rc.params, rc.setpoints, rc.sim, rc.est,
                                       rc.gains, rc.sim.seed, o.sweep_n);
    std::printf("[sweep]\nn_runs = %d\nbase_seed = %llu\n", o.sweep_n,
                static_cast<unsigned long long>(rc.sim.seed));
    for (size_t i = 0; i < runs.size(); ++i) {
      const auto& r = runs[i];
      csv::write_trace_csv(r.trace, sweep_out_path(o.out_path, static_cast<int>(i)));
      std::printf("run_%02zu: seed=%llu rows=%zu%s", i,
                  static_cast<unsigned long long>(r.seed), r.trace.rows.size(),
                  r.trace.aborted ? " ABORTED" : "");
      if (r.has_metrics) {
        std::printf(" ctrl_err=(%.3f, %.3f) deg est_err=(%.3f, %.3f) deg",
                    r.metrics.ctrl_err_phi_0.mean_abs,
                    r.metrics.ctrl_err_phi_1.mean_abs,
                    r.metrics.est_err_phi_0.mean_abs,
                    r.metrics.est_err_phi_1.mean_abs);
      }
      std::printf("\n");
    }
    const auto s = sweep::summarize(runs);
    std::printf("n_aborted = %d\n", s.n_aborted);
    print_kv("worst_ctrl_err_mean_abs_deg", s.worst_ctrl_err_mean_abs);
    print_kv("worst_est_err_mean_abs_deg", s.worst_est_err_mean_abs);
    return s.n_aborted == 0 ? 0 : 3;
  }

  const auto trace =
      sim::run_scenario(rc.params, rc.setpoints, rc.sim, rc.est, rc.gains);
  csv::write_trace_csv(trace, o.out_path);

  std::printf("[run]\nmode = %s\nseed = %llu\nrows = %zu\nout = %s\n",
              config::mode_name(rc.sim.mode).c_str(),
              static_cast<unsigned long long>(rc.sim.seed), trace.rows.size(),
              o.out_path.c_str());
  if (trace.aborted) {
    std::printf("aborted = %s\n", trace.abort_reason.c_str());
    std::fflush(stdout);
    std::fprintf(stderr, "simulation aborted: %s\n", trace.abort_reason.c_str());
    return 3;
  }

  // Metrics come from the file just written, so `analyze` on the same file
  // reproduces this block exactly.
  try {
    const auto reread = csv::read_trace_csv(o.out_path);
    const auto metrics = analysis::trace_metrics(reread, rc.setpoints);
    std::fputs(analysis::format_metrics(metrics).c_str(), stdout);
  } catch (const EmptyWindow& e) {
    std::printf("# metrics unavailable: %s\n", e.what());
  }
  return 0;
}

int cmd_analyze(const CommonOpts& o, const std::string& trace_path) {
  const auto rc = make_config(o);
  const auto trace = csv::read_trace_csv(trace_path);
  const auto metrics = analysis::trace_metrics(trace, rc.setpoints);
  std::fputs(analysis::format_metrics(metrics).c_str(), stdout);
  return 0;
}

int cmd_linearize(const CommonOpts& o) {
  const auto rc = make_config(o);
  const auto lin = control::linearize_reduced(rc.setpoints, rc.params);

  std::printf("[linearize]\n");
  print_kv("f_star", lin.ff.f);
  print_kv("phi_b_star_deg", lin.ff.phi_b * kRadToDeg);
  const auto print_mat = [](const char* name, const Mat2& m) {
    std::printf("%s = [%.9g, %.9g; %.9g, %.9g]\n", name, m(0, 0), m(0, 1),
                m(1, 0), m(1, 1));
  };
  print_mat("Hr", lin.Hr);
  print_mat("Pr", lin.Pr);
  print_mat("Br", lin.Br);

  const auto eigs = analysis::open_loop_eigs(rc.setpoints, rc.params);
  for (int i = 0; i < 4; ++i) {
    std::printf("eig_%d = %.9g%+.9gi\n", i, eigs[i].real(), eigs[i].imag());
  }

  const StateVec x0{lin.ff.phi_b, 0.0, rc.setpoints.phi_0, 0.0,
                    rc.setpoints.phi_1, 0.0};
  const InputWrench u0{0.0, lin.ff.f};
  std::printf("obs_rank = %d\n",
              analysis::observability_rank(x0, u0, rc.params).rank);
  std::printf("ctrl_rank = %d\n",
              analysis::controllability_rank(x0, u0, rc.params).rank);
  print_kv("out_of_plane_omega2",
           analysis::out_of_plane_omega2(rc.setpoints, rc.params));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar leader/payload/follower slung-load simulator"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string trace_path;

  const auto add_common = [&](CLI::App* cmd, bool with_out) {
    auto* cfg = cmd->add_option("--config", o.config_path, "Config file path");
    cmd->add_option("--preset", o.preset_name,
                    "Built-in preset: openloop|truth|estimated|two-robot")
        ->excludes(cfg);
    if (with_out) {
      cmd->add_option("--out", o.out_path, "Output CSV path");
      cmd->add_option("--seed", o.seed, "RNG seed override")
          ->check(CLI::NonNegativeNumber);
      cmd->add_option("--mode", o.mode_override,
                      "Mode override: openloop|truth|estimated");
      cmd->add_option("--sweep", o.sweep_n, "Run N seed-varied scenarios")
          ->check(CLI::PositiveNumber);
    }
  };

  auto* run = app.add_subcommand("run", "Simulate a scenario, write the trace CSV");
  add_common(run, true);

  auto* analyze = app.add_subcommand("analyze", "Windowed metrics of a trace CSV");
  analyze->add_option("--trace", trace_path, "Trace CSV produced by `run`")
      ->required();
  add_common(analyze, false);

  auto* linearize =
      app.add_subcommand("linearize", "Feedforward, reduced model, ranks");
  add_common(linearize, false);

  CLI11_PARSE(app, argc, argv);
  o.seed_set = run->count("--seed") > 0;

  try {
    if (app.got_subcommand(run)) return cmd_run(o);
    if (app.got_subcommand(analyze)) return cmd_analyze(o, trace_path);
    return cmd_linearize(o);
  } catch (const slung::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
