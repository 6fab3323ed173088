#pragma once

#include <string>

#include "slung/controller.hpp"
#include "slung/sim.hpp"
#include "slung/types.hpp"

namespace slung::analysis {

struct RankResult {
  int rank = 0;
  Eigen::VectorXd singular_values;
};

/// Rank of [C; CA; ...; CA^5] for the finite-difference linearization
/// A = df/dx, C = dh/dx at (x0, u0). SVD rank with threshold 1e-8 * sigma_max.
RankResult observability_rank(const StateVec& x0, const InputWrench& u0,
                              const SystemParams& p, double fd_step = 1e-6);

/// Rank of [B, AB, ..., A^5 B] with B = df/du at (x0, u0).
RankResult controllability_rank(const StateVec& x0, const InputWrench& u0,
                                const SystemParams& p, double fd_step = 1e-6);

/// Eigenvalues of the open-loop reduced linearization [[0, I], [-Hr*^-1 Pr*, 0]];
/// purely imaginary pairs +-i omega for valid setpoints.
Eigen::Vector4cd open_loop_eigs(const Setpoints& sp, const SystemParams& p);

/// Squared out-of-plane pendulum frequency about the static equilibrium,
///   omega^2 = T1 sin(phi_1*) / (m (-l0 sin(phi_0*) + l1 sin(phi_1*)))
/// with T1 the static-equilibrium tension.
double out_of_plane_omega2(const Setpoints& sp, const SystemParams& p);

/// Steady-state cable-angle shift when the actual thrust is (1 + delta_f) f*
/// at the commanded roll phi_b*: damped Newton (step factor 0.5) on the static
/// balance G_r = U_r from the setpoints, ||residual|| < 1e-10 within 100
/// iterations. Returns (dphi_0, dphi_1) in rad. Throws NoConvergence.
Vec2 thrust_sensitivity(double delta_f, const Setpoints& sp,
                        const SystemParams& p);

struct ChannelStats {
  double mean = 0.0;
  double sd = 0.0;
  double mean_abs = 0.0;
  double max_abs = 0.0;
};

/// Windowed trace statistics. Estimation errors over t in [5, 55] s and
/// control errors over t in [20, 55] s, windows clipped to the trace; angle
/// channels in deg, rates in deg/s. Oscillation amplitude is peak-to-peak/2
/// of the true cable angles over the estimation window.
struct MetricsReport {
  ChannelStats est_err_phi_b, est_err_dphi_b;
  ChannelStats est_err_phi_0, est_err_dphi_0;
  ChannelStats est_err_phi_1, est_err_dphi_1;
  ChannelStats ctrl_err_phi_0, ctrl_err_phi_1;
  ChannelStats ctrl_rate_phi_0, ctrl_rate_phi_1;
  double osc_amp_phi_0 = 0.0;
  double osc_amp_phi_1 = 0.0;
};

/// Throws EmptyWindow when a clipped window holds no samples.
MetricsReport trace_metrics(const sim::Trace& trace, const Setpoints& sp);

/// Key = value block (prefixed by [metrics]) for the CLI.
std::string format_metrics(const MetricsReport& r);

/// Smallest eigenvalue of H over an n x n grid of (phi_0, phi_1) in
/// [-pi, pi]^2. OpenMP-parallel when `parallel`; the serial path is the
/// reference implementation (results are bit-identical).
double spd_margin_grid(const SystemParams& p, int n, bool parallel = true);

/// Largest |Re(eig)| of the open-loop reduced linearization over an n x n
/// grid of valid setpoints (-phi_0*, phi_1*) in [2 deg, 88 deg]^2.
double max_real_eig_grid(const SystemParams& p, int n, bool parallel = true);

}  // namespace slung::analysis
