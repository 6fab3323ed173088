#include "slung/sim.hpp"

#include <cmath>

namespace slung::sim {

namespace {

Vec6 deriv(const Vec6& x, const InputWrench& u, const SystemParams& p,
           const Vec2& aL, double c_d) {
  return dynamics::state_derivative(StateVec::from_vec(x), u, p, aL, c_d)
      .vec();
}

}  // namespace

StateVec step_rk4(const StateVec& x, const InputWrench& u, double dt,
                  const SystemParams& p, const Vec2& leader_accel,
                  double c_d) {
  const Vec6 x0 = x.vec();
  const Vec6 k1 = deriv(x0, u, p, leader_accel, c_d);
  const Vec6 k2 = deriv(x0 + 0.5 * dt * k1, u, p, leader_accel, c_d);
  const Vec6 k3 = deriv(x0 + 0.5 * dt * k2, u, p, leader_accel, c_d);
  const Vec6 k4 = deriv(x0 + dt * k3, u, p, leader_accel, c_d);
  const Vec6 out = x0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite()) {
    throw NonFinite("step_rk4: state left the reals");
  }
  return StateVec::from_vec(out);
}

double inner_roll_loop(double phi_b, double dphi_b, double phi_b_cmd,
                       const RollGains& g) {
  return g.kp * (phi_b_cmd - phi_b) - g.kd * dphi_b;
}

Measurement sample_imu(const StateVec& x, const InputWrench& u,
                       const SystemParams& p, const NoiseConfig& n,
                       std::mt19937_64& rng, const Vec2& leader_accel,
                       double c_d) {
  Measurement y = dynamics::measurement(x, u, p, leader_accel, c_d);
  std::normal_distribution<double> gauss(0.0, 1.0);
  y.phi_b += n.sigma_phi_b * gauss(rng);
  y.dphi_b += n.sigma_dphi_b * gauss(rng);
  y.a_y += n.sigma_acc * gauss(rng);
  y.a_z += n.sigma_acc * gauss(rng);
  return y;
}

Vec2 LeaderTrajectory::accel(double t) const {
  Vec2 a = Vec2::Zero();
  switch (kind) {
    case Kind::kFixed:
      break;
    case Kind::kSinusoid: {
      // position = amplitude sin(w t) on the chosen axis
      const double w = 2.0 * M_PI / period;
      a[axis] = -amplitude * w * w * std::sin(w * t);
      break;
    }
    case Kind::kWaypointRamp: {
      // one smooth translation by `amplitude` over `period` seconds
      if (t >= 0.0 && t <= period) {
        const double w = M_PI / period;
        a[axis] = 0.5 * amplitude * w * w * std::cos(w * t);
      }
      break;
    }
  }
  return a;
}

Trace run_scenario(const SystemParams& p, const Setpoints& sp,
                   const SimConfig& cfg,
                   const estimator::EstimatorConfig& est_cfg,
                   const control::Gains& gains) {
  p.validate();
  const auto lin = control::linearize_reduced(sp, p);

  estimator::EstimatorConfig ecfg = est_cfg;
  if (ecfg.r_diag.isZero()) {
    // R from the sensor sigmas, floored so it stays positive definite even in
    // noiseless runs.
    const auto floor2 = [](double s) {
      const double v = std::max(s, 1e-8);
      return v * v;
    };
    ecfg.r_diag = Vec4(floor2(cfg.noise.sigma_phi_b),
                       floor2(cfg.noise.sigma_dphi_b),
                       floor2(cfg.noise.sigma_acc), floor2(cfg.noise.sigma_acc));
  }

  estimator::EstimatorState est;
  est.x = ecfg.x0;
  est.Sigma = ecfg.sigma0_diag.asDiagonal();

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool process_noise = !cfg.noise.sigma_process.isZero();

  const int n_ticks = static_cast<int>(std::llround(cfg.duration / cfg.dt)) + 1;
  Trace trace;
  trace.rows.reserve(n_ticks);

  StateVec x = cfg.x0;
  Vec2 integ = Vec2::Zero();
  // Input held during the interval that ends at the current tick; the IMU
  // reads the thrust being applied at the sampling instant.
  InputWrench held{0.0, lin.ff.f};
  double held_cmd_f = lin.ff.f;
  double held_cmd_phib = lin.ff.phi_b;

  for (int k = 0; k < n_ticks; ++k) {
    const double t = k * cfg.dt;
    const Vec2 aL = cfg.leader.accel(t);

    TickRecord row;
    row.t = t;
    row.truth = x;
    row.leader_accel = aL;

    try {
      // The filter believes the commanded thrust, a quasi-static leader, and
      // an undamped plant; the truth IMU sees the applied thrust and the
      // real plant.
      const InputWrench applied{held.tau_b,
                                (1.0 + cfg.thrust_bias) * held.f};
      row.y = sample_imu(x, applied, p, cfg.noise, rng, aL, cfg.c_d);

      if (k > 0) {
        est = estimator::predict(est, held, p, ecfg, cfg.dt);
      }
      est = estimator::update(est, row.y, held, p, ecfg);
      row.xhat = est.x;
      row.sigma_diag = est.Sigma.diagonal();

      // Next command from the mode's feedback source.
      double f_cmd = lin.ff.f;
      double phib_cmd = lin.ff.phi_b;
      if (cfg.mode != Mode::kOpenLoop) {
        const StateVec fb = cfg.mode == Mode::kTruthFeedback
                                ? x
                                : StateVec::from_vec(est.x);
        const auto ctrl =
            control::control(fb, sp, gains, lin, integ, cfg.dt, p);
        f_cmd = ctrl.f;
        phib_cmd = ctrl.phi_b_cmd;
        integ = ctrl.integ;
      }
      const double tau_b = inner_roll_loop(x.phi_b, x.dphi_b, phib_cmd,
                                           cfg.roll);
      held = InputWrench{tau_b, f_cmd};
      held_cmd_f = f_cmd;
      held_cmd_phib = phib_cmd;

      row.f_cmd = held_cmd_f;
      row.phi_b_cmd = held_cmd_phib;
      row.tau_b = tau_b;
      trace.rows.push_back(row);

      if (k + 1 < n_ticks) {
        const InputWrench applied_next{held.tau_b,
                                       (1.0 + cfg.thrust_bias) * held.f};
        const double h = cfg.dt / cfg.substeps;
        for (int s = 0; s < cfg.substeps; ++s) {
          x = step_rk4(x, applied_next, h, p, aL, cfg.c_d);
        }
        if (process_noise) {
          Vec6 w;
          for (int i = 0; i < 6; ++i) {
            w[i] = cfg.noise.sigma_process[i] * gauss(rng);
          }
          x = StateVec::from_vec(x.vec() + w);
        }
      }
    } catch (const NonFinite& e) {
      trace.aborted = true;
      trace.abort_reason = e.what();
      break;
    } catch (const SingularConfiguration& e) {
      trace.aborted = true;
      trace.abort_reason = e.what();
      break;
    }
  }
  return trace;
}

}  // namespace slung::sim
