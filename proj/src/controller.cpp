#include "slung/controller.hpp"

#include <algorithm>
#include <cmath>

#include "slung/dynamics.hpp"

namespace slung::control {

Feedforward feedforward(const Setpoints& sp, const SystemParams& p) {
  const double s0 = std::sin(sp.phi_0), c0 = std::cos(sp.phi_0);
  const double s1 = std::sin(sp.phi_1), c1 = std::cos(sp.phi_1);
  const double det = s0 * c1 - c0 * s1;  // = sin(phi_0* - phi_1*)
  if (std::abs(det) <= dynamics::kSingularSinEps) {
    throw SingularConfiguration(
        "feedforward: setpoints with collinear cables have no static balance");
  }
  const double b0 = (p.m + p.M) * p.g * s0;
  const double b1 = -p.m * p.g * s1;
  // Cramer on [[s0, -c0], [-s1, c1]] (u, v)' = (b0, b1)'.
  const double u = (b0 * c1 + c0 * b1) / det;
  const double v = (s0 * b1 + s1 * b0) / det;
  return Feedforward{std::hypot(u, v), std::atan2(v, u)};
}

LinearizedReduced linearize_reduced(const Setpoints& sp,
                                    const SystemParams& p) {
  LinearizedReduced lin;
  lin.ff = feedforward(sp, p);
  const double f = lin.ff.f;
  const double pb = lin.ff.phi_b;
  const double c01 = std::cos(sp.phi_0 - sp.phi_1);

  lin.Hr(0, 0) = (p.m + p.M) * p.l0 * p.l0;
  lin.Hr(0, 1) = -p.m * p.l0 * p.l1 * c01;
  lin.Hr(1, 0) = lin.Hr(0, 1);
  lin.Hr(1, 1) = p.m * p.l1 * p.l1;

  // d(G_r - U_r)/dPhi is diagonal: each balance row depends on its own angle.
  lin.Pr.setZero();
  lin.Pr(0, 0) = (p.m + p.M) * p.g * p.l0 * std::cos(sp.phi_0) -
                 f * p.l0 * std::cos(sp.phi_0 - pb);
  lin.Pr(1, 1) = -p.m * p.g * p.l1 * std::cos(sp.phi_1) +
                 f * p.l1 * std::cos(pb - sp.phi_1);

  lin.Br(0, 0) = p.l0 * std::sin(sp.phi_0 - pb);
  lin.Br(0, 1) = -f * p.l0 * std::cos(sp.phi_0 - pb);
  lin.Br(1, 0) = p.l1 * std::sin(pb - sp.phi_1);
  lin.Br(1, 1) = f * p.l1 * std::cos(pb - sp.phi_1);
  return lin;
}

ControlOutput control(const StateVec& fb, const Setpoints& sp, const Gains& g,
                      const LinearizedReduced& lin, const Vec2& integ,
                      double dt, const SystemParams& p) {
  const Vec2 err(fb.phi_0 - sp.phi_0, fb.phi_1 - sp.phi_1);
  const Vec2 derr(fb.dphi_0, fb.dphi_1);

  const auto clamped = [&](Vec2 v) {
    v[0] = std::clamp(v[0], -g.integ_limit, g.integ_limit);
    v[1] = std::clamp(v[1], -g.integ_limit, g.integ_limit);
    return v;
  };
  const Mat2 gain_map = lin.Br.inverse() * lin.Hr;
  const auto delta_u = [&](const Vec2& I) -> Vec2 {
    return gain_map * (-g.kp.cwiseProduct(err) - g.kd.cwiseProduct(derr) -
                       g.ki.cwiseProduct(I));
  };

  const double lo = g.f_min;
  const double hi = g.thrust_ceiling(p);

  ControlOutput out;
  Vec2 candidate = clamped(integ + err * dt);
  Vec2 du = delta_u(candidate);
  double f_raw = lin.ff.f + du[0];
  if (f_raw < lo || f_raw > hi) {
    // Anti-windup: hold the integral and re-evaluate with it held.
    candidate = integ;
    du = delta_u(candidate);
    f_raw = lin.ff.f + du[0];
  }
  out.integ = candidate;
  out.f = std::clamp(f_raw, lo, hi);
  out.phi_b_cmd = lin.ff.phi_b + du[1];
  return out;
}

}  // namespace slung::control
