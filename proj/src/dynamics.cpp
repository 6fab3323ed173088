#include "slung/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace slung {

void SystemParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("SystemParams.") + name +
                                  " must be strictly positive");
    }
  };
  positive(m, "m");
  positive(M, "M");
  positive(l0, "l0");
  positive(l1, "l1");
  positive(Ib, "Ib");
  positive(g, "g");
}

}  // namespace slung

namespace slung::dynamics {

namespace {

// Generalized gravity under the effective field gamma = (-aL_y, -(g + aL_z)).
// Shared by every public entry point so the leader-at-rest path is
// bit-identical to the plain gravity formula.
Vec3 generalized_gravity(const Vec3& phi, const SystemParams& p,
                         const Vec2& aL) {
  const double ay = aL[0];
  const double gz = p.g + aL[1];
  const double s0 = std::sin(phi[1]), c0 = std::cos(phi[1]);
  const double s1 = std::sin(phi[2]), c1 = std::cos(phi[2]);
  Vec3 G;
  G[0] = 0.0;
  G[1] = (p.m + p.M) * p.l0 * (ay * c0 + gz * s0);
  G[2] = -p.m * p.l1 * (ay * c1 + gz * s1);
  return G;
}

// Accelerations ddPhi = H^-1 (B u - C - G' - drag). The roll row of H is the
// identity, so only the lower 2x2 block needs a solve.
Vec3 accelerations(const StateVec& x, const InputWrench& u,
                   const SystemParams& p, const Vec2& aL, double c_d) {
  const Vec3 phi = x.angles();
  const Vec3 dphi = x.rates();
  ManipulatorTerms t = manipulator_terms(phi, dphi, p);
  t.G = generalized_gravity(phi, p, aL);

  Vec3 rhs = t.B * u.vec() - t.C - t.G;
  if (c_d != 0.0) {
    rhs[0] -= c_d * dphi[0] / p.Ib;  // roll row is pre-divided by Ib
    rhs[1] -= c_d * dphi[1];
    rhs[2] -= c_d * dphi[2];
  }

  const double a = t.H(1, 1), b = t.H(1, 2), c = t.H(2, 2);
  const double det = a * c - b * b;  // = m l0^2 l1^2 (m sin^2 + M) > 0
  Vec3 qdd;
  qdd[0] = rhs[0];
  qdd[1] = (c * rhs[1] - b * rhs[2]) / det;
  qdd[2] = (a * rhs[2] - b * rhs[1]) / det;
  return qdd;
}

}  // namespace

ManipulatorTerms manipulator_terms(const Vec3& phi, const Vec3& dphi,
                                   const SystemParams& p) {
  const double s01 = std::sin(phi[1] - phi[2]);
  const double c01 = std::cos(phi[1] - phi[2]);
  const double ml01 = p.m * p.l0 * p.l1;

  ManipulatorTerms t;
  t.H(0, 0) = 1.0;
  t.H(1, 1) = (p.m + p.M) * p.l0 * p.l0;
  t.H(1, 2) = -ml01 * c01;
  t.H(2, 1) = t.H(1, 2);
  t.H(2, 2) = p.m * p.l1 * p.l1;
  t.H(0, 1) = t.H(1, 0) = t.H(0, 2) = t.H(2, 0) = 0.0;

  t.C[0] = 0.0;
  t.C[1] = -ml01 * dphi[2] * dphi[2] * s01;
  t.C[2] = ml01 * dphi[1] * dphi[1] * s01;

  t.G = generalized_gravity(phi, p, Vec2::Zero());

  t.B.setZero();
  t.B(0, 0) = 1.0;
  t.B(1, 1) = p.l0 * std::sin(phi[1] - phi[0]);
  t.B(2, 1) = p.l1 * std::sin(phi[0] - phi[2]);
  return t;
}

std::pair<Vec2, Vec2> positions(double phi_0, double phi_1,
                                const SystemParams& p) {
  const Vec2 r0(p.l0 * std::sin(phi_0), -p.l0 * std::cos(phi_0));
  const Vec2 r1 = r0 + Vec2(-p.l1 * std::sin(phi_1), p.l1 * std::cos(phi_1));
  return {r0, r1};
}

StateVec state_derivative(const StateVec& x, const InputWrench& u,
                          const SystemParams& p, const Vec2& leader_accel,
                          double c_d) {
  const Vec3 qdd = accelerations(x, u, p, leader_accel, c_d);
  StateVec dx;
  dx.phi_b = x.dphi_b;
  dx.dphi_b = qdd[0];
  dx.phi_0 = x.dphi_0;
  dx.dphi_0 = qdd[1];
  dx.phi_1 = x.dphi_1;
  dx.dphi_1 = qdd[2];
  return dx;
}

double cable_tension(const StateVec& x, const InputWrench& u,
                     const SystemParams& p, const Vec2& leader_accel,
                     double c_d) {
  const double s01 = std::sin(x.phi_0 - x.phi_1);
  if (std::abs(s01) <= kSingularSinEps) {
    throw SingularConfiguration(
        "cable_tension: |sin(phi_0 - phi_1)| <= " +
        std::to_string(kSingularSinEps) + ", cables collinear");
  }
  const double ddphi_0 = accelerations(x, u, p, leader_accel, c_d)[1];
  // Payload torque balance about the leader anchor; the gravity torque uses
  // the same effective field as the dynamics.
  const double ay = leader_accel[0];
  const double gz = p.g + leader_accel[1];
  const double grav =
      p.M * (ay * std::cos(x.phi_0) + gz * std::sin(x.phi_0));
  return (p.M * p.l0 * ddphi_0 + grav + c_d * x.dphi_0 / p.l0) / s01;
}

Measurement measurement(const StateVec& x, const InputWrench& u,
                        const SystemParams& p, const Vec2& leader_accel,
                        double c_d) {
  const double T1 = cable_tension(x, u, p, leader_accel, c_d);
  Measurement y;
  y.phi_b = x.phi_b;
  y.dphi_b = x.dphi_b;
  y.a_y = -(T1 / p.m) * std::sin(x.phi_1 - x.phi_b);
  y.a_z = (T1 / p.m) * std::cos(x.phi_1 - x.phi_b) - u.f / p.m;
  return y;
}

double total_energy(const StateVec& x, const SystemParams& p) {
  const double s0 = std::sin(x.phi_0), c0 = std::cos(x.phi_0);
  const double s1 = std::sin(x.phi_1), c1 = std::cos(x.phi_1);
  const Vec2 v0(p.l0 * c0 * x.dphi_0, p.l0 * s0 * x.dphi_0);
  const Vec2 v1 = v0 + Vec2(-p.l1 * c1 * x.dphi_1, -p.l1 * s1 * x.dphi_1);
  const double kinetic = 0.5 * p.M * v0.squaredNorm() +
                         0.5 * p.m * v1.squaredNorm() +
                         0.5 * p.Ib * x.dphi_b * x.dphi_b;
  const auto [r0, r1] = positions(x.phi_0, x.phi_1, p);
  const double potential = p.g * (p.M * r0[1] + p.m * r1[1]);
  return kinetic + potential;
}

}  // namespace slung::dynamics
