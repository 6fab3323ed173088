// Timing harness for the OpenMP-parallel batch and grid kernels against
// their serial reference implementations, verifying bit-identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "slung/analysis.hpp"
#include "slung/config.hpp"
#include "slung/sweep.hpp"

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int grid_n = 400;
  int runs = 8;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--grid") grid_n = std::atoi(argv[i + 1]);
    else if (flag == "--runs") runs = std::atoi(argv[i + 1]);
  }

  using namespace slung;
  const SystemParams p;
  bool all_match = true;

  double spd_s = 0.0, spd_p = 0.0;
  const double t_spd_serial =
      seconds([&] { spd_s = analysis::spd_margin_grid(p, grid_n, false); });
  const double t_spd_par =
      seconds([&] { spd_p = analysis::spd_margin_grid(p, grid_n, true); });
  all_match &= (spd_s == spd_p);
  std::printf("spd_margin_grid  n=%4d  serial %.3fs  parallel %.3fs  "
              "speedup %.2fx  identical=%s\n",
              grid_n, t_spd_serial, t_spd_par, t_spd_serial / t_spd_par,
              spd_s == spd_p ? "yes" : "NO");

  double eig_s = 0.0, eig_p = 0.0;
  const double t_eig_serial =
      seconds([&] { eig_s = analysis::max_real_eig_grid(p, grid_n, false); });
  const double t_eig_par =
      seconds([&] { eig_p = analysis::max_real_eig_grid(p, grid_n, true); });
  all_match &= (eig_s == eig_p);
  std::printf("max_real_eig_grid n=%4d  serial %.3fs  parallel %.3fs  "
              "speedup %.2fx  identical=%s\n",
              grid_n, t_eig_serial, t_eig_par, t_eig_serial / t_eig_par,
              eig_s == eig_p ? "yes" : "NO");

  auto rc = config::preset("estimated");
  rc.sim.duration = 20.0;
  std::vector<sweep::SweepRun> batch_s, batch_p;
  const double t_batch_serial = seconds([&] {
    batch_s = sweep::run_batch(rc.params, rc.setpoints, rc.sim, rc.est,
                               rc.gains, rc.sim.seed, runs, false);
  });
  const double t_batch_par = seconds([&] {
    batch_p = sweep::run_batch(rc.params, rc.setpoints, rc.sim, rc.est,
                               rc.gains, rc.sim.seed, runs, true);
  });
  bool batch_match = batch_s.size() == batch_p.size();
  for (size_t i = 0; batch_match && i < batch_s.size(); ++i) {
    const auto& a = batch_s[i].trace.rows;
    const auto& b = batch_p[i].trace.rows;
    batch_match = a.size() == b.size();
    for (size_t k = 0; batch_match && k < a.size(); ++k) {
      batch_match = a[k].truth.vec() == b[k].truth.vec() &&
                    a[k].xhat == b[k].xhat && a[k].f_cmd == b[k].f_cmd;
    }
  }
  all_match &= batch_match;
  std::printf("run_batch     runs=%3d  serial %.3fs  parallel %.3fs  "
              "speedup %.2fx  identical=%s\n",
              runs, t_batch_serial, t_batch_par, t_batch_serial / t_batch_par,
              batch_match ? "yes" : "NO");

  return all_match ? 0 : 1;
}
