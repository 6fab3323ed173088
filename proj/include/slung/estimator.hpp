#pragma once

#include <functional>

#include "slung/dynamics.hpp"
#include "slung/errors.hpp"
#include "slung/types.hpp"

namespace slung::estimator {

/// Forgetting-factor EKF configuration. lambda in (0, 1] scales the prior
/// covariance in the prediction, the innovation covariance, and the gain,
/// discounting old information; lambda = 1 recovers the textbook EKF.
struct EstimatorConfig {
  double lambda = 0.8;
  Vec6 q_diag = (Vec6() << 1e-6, 1e-4, 1e-6, 1e-4, 1e-6, 1e-4).finished();
  Vec4 r_diag = Vec4::Zero();  ///< filled from the noise sigmas when zero
  double fd_step = 1e-6;
  Vec6 x0 = Vec6::Zero();
  /// Initial covariance diagonal; defaults cover ~10 deg / 15 deg offsets.
  Vec6 sigma0_diag =
      (Vec6() << 0.03, 0.03, 0.07, 0.07, 0.07, 0.07).finished();
};

struct EstimatorState {
  Vec6 x = Vec6::Zero();
  Mat6 Sigma = Mat6::Identity();
  Vec4 innovation = Vec4::Zero();      ///< last update's y - h(x-, u)
  Eigen::Matrix4d S = Eigen::Matrix4d::Identity();  ///< last innovation cov
};

/// Central-difference Jacobian of a vector map, one column per input
/// perturbation.
Eigen::MatrixXd jacobian_fd(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double step = 1e-6);

/// Forward-Euler mean propagation with discounted covariance:
///   x- = x+ + f(x+, u) dt,  F = I + df/dx dt,  Sigma- = lambda F Sigma+ F' + Q.
/// The prediction model is the quasi-static leader, zero-drag plant.
EstimatorState predict(const EstimatorState& s, const InputWrench& u,
                       const SystemParams& p, const EstimatorConfig& cfg,
                       double dt);

/// Discounted measurement update:
///   S = lambda H Sigma- H' + R,  K = lambda Sigma- H' S^-1,
///   x+ = x- + K (y - h(x-, u)),  Sigma+ = Sigma- - lambda K H Sigma-
/// with the posterior covariance symmetrized.
EstimatorState update(const EstimatorState& s, const Measurement& y,
                      const InputWrench& u, const SystemParams& p,
                      const EstimatorConfig& cfg);

}  // namespace slung::estimator
