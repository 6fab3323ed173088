#include "slung/estimator.hpp"

#include <cmath>

namespace slung::estimator {

Eigen::MatrixXd jacobian_fd(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double step) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (int j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    J.col(j) = (f(xp) - f(xm)) / (2.0 * step);
  }
  return J;
}

namespace {

Vec6 model_f(const Vec6& x, const InputWrench& u, const SystemParams& p) {
  return dynamics::state_derivative(StateVec::from_vec(x), u, p).vec();
}

Vec4 model_h(const Vec6& x, const InputWrench& u, const SystemParams& p) {
  return dynamics::measurement(StateVec::from_vec(x), u, p).vec();
}

void check_finite(const Eigen::Ref<const Eigen::MatrixXd>& m,
                  const char* where) {
  if (!m.allFinite()) {
    throw NonFinite(std::string("estimator: non-finite values in ") + where);
  }
}

}  // namespace

EstimatorState predict(const EstimatorState& s, const InputWrench& u,
                       const SystemParams& p, const EstimatorConfig& cfg,
                       double dt) {
  EstimatorState out = s;
  out.x = s.x + model_f(s.x, u, p) * dt;

  const auto f_of_x = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return model_f(x, u, p);
  };
  const Mat6 F =
      Mat6::Identity() + jacobian_fd(f_of_x, s.x, cfg.fd_step) * dt;
  out.Sigma = cfg.lambda * F * s.Sigma * F.transpose();
  out.Sigma += cfg.q_diag.asDiagonal();
  out.Sigma = 0.5 * (out.Sigma + out.Sigma.transpose()).eval();
  check_finite(out.x, "predicted state");
  check_finite(out.Sigma, "predicted covariance");
  return out;
}

EstimatorState update(const EstimatorState& s, const Measurement& y,
                      const InputWrench& u, const SystemParams& p,
                      const EstimatorConfig& cfg) {
  const auto h_of_x = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return model_h(x, u, p);
  };
  const Eigen::MatrixXd H = jacobian_fd(h_of_x, s.x, cfg.fd_step);

  EstimatorState out = s;
  out.S = cfg.lambda * H * s.Sigma * H.transpose();
  out.S += cfg.r_diag.asDiagonal();
  // K = lambda Sigma H' S^-1 through the symmetric solve S K' = H Sigma.
  const Eigen::Matrix<double, 6, 4> K =
      cfg.lambda * out.S.ldlt().solve(H * s.Sigma).transpose();
  out.innovation = y.vec() - model_h(s.x, u, p);
  out.x = s.x + K * out.innovation;
  out.Sigma = s.Sigma - cfg.lambda * K * H * s.Sigma;
  out.Sigma = 0.5 * (out.Sigma + out.Sigma.transpose()).eval();
  check_finite(out.x, "updated state");
  check_finite(out.Sigma, "updated covariance");
  return out;
}

}  // namespace slung::estimator
