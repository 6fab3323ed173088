#include "slung/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "slung/estimator.hpp"

namespace slung::analysis {

namespace {

int svd_rank(const Eigen::MatrixXd& m, Eigen::VectorXd* sv) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd s = svd.singularValues();
  if (sv != nullptr) *sv = s;
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double tol = 1e-8 * s[0];
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > tol) ++rank;
  }
  return rank;
}

Mat6 fd_A(const StateVec& x0, const InputWrench& u0, const SystemParams& p,
          double step) {
  const auto f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return dynamics::state_derivative(StateVec::from_vec(x), u0, p).vec();
  };
  return estimator::jacobian_fd(f, x0.vec(), step);
}

}  // namespace

RankResult observability_rank(const StateVec& x0, const InputWrench& u0,
                              const SystemParams& p, double fd_step) {
  const Mat6 A = fd_A(x0, u0, p, fd_step);
  const auto h = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return dynamics::measurement(StateVec::from_vec(x), u0, p).vec();
  };
  const Eigen::MatrixXd C = estimator::jacobian_fd(h, x0.vec(), fd_step);

  Eigen::MatrixXd O(24, 6);
  Eigen::MatrixXd block = C;
  for (int k = 0; k < 6; ++k) {
    O.middleRows(4 * k, 4) = block;
    block = block * A;
  }
  RankResult r;
  r.rank = svd_rank(O, &r.singular_values);
  return r;
}

RankResult controllability_rank(const StateVec& x0, const InputWrench& u0,
                                const SystemParams& p, double fd_step) {
  const Mat6 A = fd_A(x0, u0, p, fd_step);
  const auto f_of_u = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    return dynamics::state_derivative(x0, InputWrench{u[0], u[1]}, p).vec();
  };
  const Eigen::MatrixXd B = estimator::jacobian_fd(f_of_u, u0.vec(), fd_step);

  Eigen::MatrixXd ctrb(6, 12);
  Eigen::MatrixXd block = B;
  for (int k = 0; k < 6; ++k) {
    ctrb.middleCols(2 * k, 2) = block;
    block = A * block;
  }
  RankResult r;
  r.rank = svd_rank(ctrb, &r.singular_values);
  return r;
}

Eigen::Vector4cd open_loop_eigs(const Setpoints& sp, const SystemParams& p) {
  const auto lin = control::linearize_reduced(sp, p);
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  A.topRightCorner<2, 2>() = Mat2::Identity();
  A.bottomLeftCorner<2, 2>() = -lin.Hr.inverse() * lin.Pr;
  return Eigen::EigenSolver<Eigen::Matrix4d>(A, false).eigenvalues();
}

double out_of_plane_omega2(const Setpoints& sp, const SystemParams& p) {
  const double s0 = std::sin(sp.phi_0);
  const double s1 = std::sin(sp.phi_1);
  const double s01 = std::sin(sp.phi_0 - sp.phi_1);
  if (std::abs(s01) <= dynamics::kSingularSinEps) {
    throw SingularConfiguration("out_of_plane_omega2: collinear cables");
  }
  const double denom = p.m * (-p.l0 * s0 + p.l1 * s1);
  if (denom <= 0.0) {
    throw InvalidRange("out_of_plane_omega2: setpoints outside valid range");
  }
  const double T1 = p.M * p.g * s0 / s01;  // static tension
  return T1 * s1 / denom;
}

Vec2 thrust_sensitivity(double delta_f, const Setpoints& sp,
                        const SystemParams& p) {
  const auto ff = control::feedforward(sp, p);
  const double f = (1.0 + delta_f) * ff.f;
  const double pb = ff.phi_b;

  Vec2 phi(sp.phi_0, sp.phi_1);
  for (int it = 0; it < 100; ++it) {
    const Vec2 res(
        (p.m + p.M) * p.g * p.l0 * std::sin(phi[0]) -
            f * p.l0 * std::sin(phi[0] - pb),
        -p.m * p.g * p.l1 * std::sin(phi[1]) - f * p.l1 * std::sin(pb - phi[1]));
    if (res.norm() < 1e-10) {
      return phi - Vec2(sp.phi_0, sp.phi_1);
    }
    // The balance rows decouple, so the Jacobian is diagonal.
    const double j0 = (p.m + p.M) * p.g * p.l0 * std::cos(phi[0]) -
                      f * p.l0 * std::cos(phi[0] - pb);
    const double j1 = -p.m * p.g * p.l1 * std::cos(phi[1]) +
                      f * p.l1 * std::cos(pb - phi[1]);
    phi[0] -= 0.5 * res[0] / j0;
    phi[1] -= 0.5 * res[1] / j1;
  }
  throw NoConvergence("thrust_sensitivity: Newton did not reach 1e-10");
}

namespace {

struct Window {
  double lo, hi;
  bool contains(double t) const { return t >= lo - 1e-12 && t <= hi + 1e-12; }
};

ChannelStats stats_of(const std::vector<double>& v) {
  ChannelStats s;
  if (v.empty()) return s;
  double sum = 0.0, sum_abs = 0.0, max_abs = 0.0;
  for (double x : v) {
    sum += x;
    sum_abs += std::abs(x);
    max_abs = std::max(max_abs, std::abs(x));
  }
  s.mean = sum / v.size();
  s.mean_abs = sum_abs / v.size();
  s.max_abs = max_abs;
  double acc = 0.0;
  for (double x : v) acc += (x - s.mean) * (x - s.mean);
  s.sd = std::sqrt(acc / v.size());
  return s;
}

}  // namespace

MetricsReport trace_metrics(const sim::Trace& trace, const Setpoints& sp) {
  if (trace.rows.empty()) {
    throw EmptyWindow("trace_metrics: empty trace");
  }
  const double t_end = trace.rows.back().t;
  const Window est_w{5.0, std::min(55.0, t_end)};
  const Window ctrl_w{20.0, std::min(55.0, t_end)};

  const double deg = 180.0 / M_PI;
  std::vector<double> e[6];
  std::vector<double> c0, c1, r0, r1, a0, a1;
  for (const auto& row : trace.rows) {
    if (est_w.contains(row.t)) {
      const Vec6 err = row.xhat - row.truth.vec();
      for (int i = 0; i < 6; ++i) e[i].push_back(err[i] * deg);
      a0.push_back(row.truth.phi_0 * deg);
      a1.push_back(row.truth.phi_1 * deg);
    }
    if (ctrl_w.contains(row.t)) {
      c0.push_back((row.truth.phi_0 - sp.phi_0) * deg);
      c1.push_back((row.truth.phi_1 - sp.phi_1) * deg);
      r0.push_back(row.truth.dphi_0 * deg);
      r1.push_back(row.truth.dphi_1 * deg);
    }
  }
  if (e[0].empty() || c0.empty()) {
    throw EmptyWindow("trace_metrics: a clipped window holds no samples");
  }

  MetricsReport m;
  m.est_err_phi_b = stats_of(e[0]);
  m.est_err_dphi_b = stats_of(e[1]);
  m.est_err_phi_0 = stats_of(e[2]);
  m.est_err_dphi_0 = stats_of(e[3]);
  m.est_err_phi_1 = stats_of(e[4]);
  m.est_err_dphi_1 = stats_of(e[5]);
  m.ctrl_err_phi_0 = stats_of(c0);
  m.ctrl_err_phi_1 = stats_of(c1);
  m.ctrl_rate_phi_0 = stats_of(r0);
  m.ctrl_rate_phi_1 = stats_of(r1);
  const auto [min0, max0] = std::minmax_element(a0.begin(), a0.end());
  const auto [min1, max1] = std::minmax_element(a1.begin(), a1.end());
  m.osc_amp_phi_0 = 0.5 * (*max0 - *min0);
  m.osc_amp_phi_1 = 0.5 * (*max1 - *min1);
  return m;
}

std::string format_metrics(const MetricsReport& r) {
  std::string out = "[metrics]\n";
  char buf[256];
  const auto put = [&](const char* key, const ChannelStats& s) {
    std::snprintf(buf, sizeof(buf),
                  "%s_mean = %.9g\n%s_sd = %.9g\n%s_mean_abs = %.9g\n"
                  "%s_max_abs = %.9g\n",
                  key, s.mean, key, s.sd, key, s.mean_abs, key, s.max_abs);
    out += buf;
  };
  put("est_err_phi_b_deg", r.est_err_phi_b);
  put("est_err_dphi_b_dps", r.est_err_dphi_b);
  put("est_err_phi_0_deg", r.est_err_phi_0);
  put("est_err_dphi_0_dps", r.est_err_dphi_0);
  put("est_err_phi_1_deg", r.est_err_phi_1);
  put("est_err_dphi_1_dps", r.est_err_dphi_1);
  put("ctrl_err_phi_0_deg", r.ctrl_err_phi_0);
  put("ctrl_err_phi_1_deg", r.ctrl_err_phi_1);
  put("ctrl_rate_phi_0_dps", r.ctrl_rate_phi_0);
  put("ctrl_rate_phi_1_dps", r.ctrl_rate_phi_1);
  std::snprintf(buf, sizeof(buf), "osc_amp_phi_0_deg = %.9g\n", r.osc_amp_phi_0);
  out += buf;
  std::snprintf(buf, sizeof(buf), "osc_amp_phi_1_deg = %.9g\n", r.osc_amp_phi_1);
  out += buf;
  return out;
}

double spd_margin_grid(const SystemParams& p, int n, bool parallel) {
  std::vector<double> margin(static_cast<size_t>(n) * n);
  const auto eval = [&](int idx) {
    const int i = idx / n, j = idx % n;
    const double p0 = -M_PI + 2.0 * M_PI * i / (n - 1);
    const double p1 = -M_PI + 2.0 * M_PI * j / (n - 1);
    const auto t =
        dynamics::manipulator_terms(Vec3(0.0, p0, p1), Vec3::Zero(), p);
    Eigen::SelfAdjointEigenSolver<Mat3> es(t.H, Eigen::EigenvaluesOnly);
    margin[idx] = es.eigenvalues().minCoeff();
  };
  if (parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (int idx = 0; idx < n * n; ++idx) eval(idx);
  } else {
    for (int idx = 0; idx < n * n; ++idx) eval(idx);
  }
  return *std::min_element(margin.begin(), margin.end());
}

double max_real_eig_grid(const SystemParams& p, int n, bool parallel) {
  std::vector<double> worst(static_cast<size_t>(n) * n);
  const double lo = 2.0 * M_PI / 180.0, hi = 88.0 * M_PI / 180.0;
  const auto eval = [&](int idx) {
    const int i = idx / n, j = idx % n;
    const Setpoints sp{-(lo + (hi - lo) * i / (n - 1)),
                       lo + (hi - lo) * j / (n - 1)};
    worst[idx] = open_loop_eigs(sp, p).real().cwiseAbs().maxCoeff();
  };
  if (parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (int idx = 0; idx < n * n; ++idx) eval(idx);
  } else {
    for (int idx = 0; idx < n * n; ++idx) eval(idx);
  }
  return *std::max_element(worst.begin(), worst.end());
}

}  // namespace slung::analysis
