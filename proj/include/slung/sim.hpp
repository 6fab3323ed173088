#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "slung/controller.hpp"
#include "slung/dynamics.hpp"
#include "slung/estimator.hpp"
#include "slung/types.hpp"

namespace slung::sim {

enum class Mode { kOpenLoop, kTruthFeedback, kEstimatedFeedback };

/// Inner roll-rate loop gains: tau_b = kp (phi_b_cmd - phi_b) - kd dphi_b.
/// Defaults place the closed roll poles at omega_n = 40 rad/s, zeta = 0.9,
/// well above the slung modes (~1.4-1.7 rad/s).
struct RollGains {
  double kp = 1600.0;
  double kd = 72.0;
};

double inner_roll_loop(double phi_b, double dphi_b, double phi_b_cmd,
                       const RollGains& g);

/// Sensor noise (1-sigma) and optional additive per-tick process noise.
struct NoiseConfig {
  double sigma_phi_b = 0.5 * kDegToRad;   // rad
  double sigma_dphi_b = 0.3 * kDegToRad;  // rad/s
  double sigma_acc = 0.05;                    // m/s^2
  Vec6 sigma_process = Vec6::Zero();          // state units per tick
};

/// Prescribed leader motion, reported as an acceleration in the leader plane.
struct LeaderTrajectory {
  enum class Kind { kFixed, kSinusoid, kWaypointRamp };
  Kind kind = Kind::kFixed;
  double amplitude = 0.1;  // m
  double period = 10.0;    // s
  int axis = 0;            // 0 = y, 1 = z

  Vec2 accel(double t) const;
};

struct SimConfig {
  double dt = 1.0 / 200.0;
  double duration = 60.0;
  std::uint64_t seed = 1;
  int substeps = 1;
  double c_d = 0.0;          // generalized damping, N m s
  double thrust_bias = 0.0;  // applied thrust = (1 + thrust_bias) * command
  Mode mode = Mode::kEstimatedFeedback;
  StateVec x0;
  NoiseConfig noise;
  RollGains roll;
  LeaderTrajectory leader;
};

struct TickRecord {
  double t = 0.0;
  StateVec truth;
  Measurement y;            // noisy
  Vec6 xhat = Vec6::Zero();
  Vec6 sigma_diag = Vec6::Zero();
  double f_cmd = 0.0;
  double phi_b_cmd = 0.0;
  double tau_b = 0.0;
  Vec2 leader_accel = Vec2::Zero();
};

struct Trace {
  std::vector<TickRecord> rows;
  bool aborted = false;
  std::string abort_reason;
};

/// One classic RK4 step of the forced dynamics; the input and leader
/// acceleration are held over the step. Throws NonFinite if the state leaves
/// the reals.
StateVec step_rk4(const StateVec& x, const InputWrench& u, double dt,
                  const SystemParams& p, const Vec2& leader_accel = Vec2::Zero(),
                  double c_d = 0.0);

/// Noise-free measurement plus white Gaussian channel noise.
Measurement sample_imu(const StateVec& x, const InputWrench& u,
                       const SystemParams& p, const NoiseConfig& n,
                       std::mt19937_64& rng,
                       const Vec2& leader_accel = Vec2::Zero(),
                       double c_d = 0.0);

/// Full closed-loop rollout at the control rate 1/dt. Per tick: sense with
/// the held input, filter (predict with the held input, then update),
/// compute the next command from the mode's feedback source, log, integrate.
/// The estimator always runs, whatever the mode. A NonFinite or
/// SingularConfiguration mid-run aborts, returning the partial trace with
/// `aborted` set.
Trace run_scenario(const SystemParams& p, const Setpoints& sp,
                   const SimConfig& cfg,
                   const estimator::EstimatorConfig& est_cfg,
                   const control::Gains& gains);

}  // namespace slung::sim
