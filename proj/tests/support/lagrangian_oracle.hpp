#pragma once

// Independent dynamics oracle: builds the equations of motion numerically
// from the Lagrangian (energies and position Jacobians only, all derivatives
// by central finite differences). Shares no code with slung::dynamics; used
// to cross-check state_derivative and manipulator_terms.
//
// Internals run in long double: the roll row of the mass matrix is Ib ~ 6e-5,
// so double-precision cancellation noise in the energy differences (~1e-9)
// would alias into ~1e-5 roll-acceleration errors after the solve.

#include <Eigen/Dense>
#include <cmath>

#include "slung/types.hpp"

namespace oracle {

using slung::InputWrench;
using slung::StateVec;
using slung::SystemParams;
using slung::Vec2;
using slung::Vec3;

using Real = long double;
using LVec2 = Eigen::Matrix<Real, 2, 1>;
using LVec3 = Eigen::Matrix<Real, 3, 1>;
using LMat3 = Eigen::Matrix<Real, 3, 3>;
using LMat23 = Eigen::Matrix<Real, 2, 3>;

// Mass positions written out from scratch (leader anchor at the origin,
// y lateral, z up). q = (phi_b, phi_0, phi_1).
inline LVec2 payload_pos(const LVec3& q, const SystemParams& p) {
  return LVec2(Real(p.l0) * std::sin(q[1]), -Real(p.l0) * std::cos(q[1]));
}
inline LVec2 follower_pos(const LVec3& q, const SystemParams& p) {
  return payload_pos(q, p) +
         LVec2(-Real(p.l1) * std::sin(q[2]), Real(p.l1) * std::cos(q[2]));
}

inline LMat23 fd_position_jacobian(LVec2 (*pos)(const LVec3&,
                                                const SystemParams&),
                                   const LVec3& q, const SystemParams& p,
                                   Real h = 1e-7L) {
  LMat23 J;
  for (int j = 0; j < 3; ++j) {
    LVec3 qp = q, qm = q;
    qp[j] += h;
    qm[j] -= h;
    J.col(j) = (pos(qp, p) - pos(qm, p)) / (2.0L * h);
  }
  return J;
}

// Kinetic energy of the two point masses plus the roll inertia. Velocities of
// the masses come from the FD position Jacobians, not from any closed form.
inline Real kinetic_l(const LVec3& q, const LVec3& v, const SystemParams& p) {
  const LVec2 v0 = fd_position_jacobian(&payload_pos, q, p) * v;
  const LVec2 v1 = fd_position_jacobian(&follower_pos, q, p) * v;
  return 0.5L * Real(p.M) * v0.squaredNorm() +
         0.5L * Real(p.m) * v1.squaredNorm() +
         0.5L * Real(p.Ib) * v[0] * v[0];
}

// Potential under the effective gravity field gamma = (-aL_y, -(g + aL_z)):
// U = -(M gamma . r0 + m gamma . r1). Reduces to g * (M z0 + m z1) when the
// leader is inertial.
inline Real potential_l(const LVec3& q, const SystemParams& p,
                        const Vec2& leader_accel) {
  const LVec2 gamma(-Real(leader_accel[0]), -(Real(p.g) + Real(leader_accel[1])));
  return -(Real(p.M) * gamma.dot(payload_pos(q, p)) +
           Real(p.m) * gamma.dot(follower_pos(q, p)));
}

inline Vec2 payload_pos(const Vec3& q, const SystemParams& p) {
  return payload_pos(q.cast<Real>().eval(), p).cast<double>();
}
inline Vec2 follower_pos(const Vec3& q, const SystemParams& p) {
  return follower_pos(q.cast<Real>().eval(), p).cast<double>();
}

inline double kinetic(const Vec3& q, const Vec3& v, const SystemParams& p) {
  return static_cast<double>(kinetic_l(q.cast<Real>(), v.cast<Real>(), p));
}
inline double potential(const Vec3& q, const SystemParams& p,
                        const Vec2& leader_accel) {
  return static_cast<double>(potential_l(q.cast<Real>(), p, leader_accel));
}

// Accelerations from the Euler-Lagrange equations
//   d/dt dK/dv - dK/dq + dU/dq = Q(q, v, u)
// assembled entirely by finite differences:
//   mass matrix      M_ij = d^2 K / dv_i dv_j
//   bias             b_i  = sum_j (d^2 K / dv_i dq_j) v_j - dK/dq_i
//   applied forces   Q    = (Ib tau_b, f F . dr1/dq) - c_d v
// then solve M qdd = Q - b - dU/dq. The roll equation here carries the
// physical inertia Ib, so tau_b is first converted to a true torque.
inline Vec3 accelerations(const StateVec& x, const InputWrench& u,
                          const SystemParams& p,
                          const Vec2& leader_accel = Vec2::Zero(),
                          double c_d = 0.0) {
  const LVec3 q = x.angles().cast<Real>();
  const LVec3 v = x.rates().cast<Real>();

  const Real hv = 1e-3L;  // K is quadratic in v: second differences exact
  const Real hq = 1e-4L;

  LMat3 M;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      LVec3 vpp = v, vpm = v, vmp = v, vmm = v;
      vpp[i] += hv; vpp[j] += hv;
      vpm[i] += hv; vpm[j] -= hv;
      vmp[i] -= hv; vmp[j] += hv;
      vmm[i] -= hv; vmm[j] -= hv;
      M(i, j) = (kinetic_l(q, vpp, p) - kinetic_l(q, vpm, p) -
                 kinetic_l(q, vmp, p) + kinetic_l(q, vmm, p)) /
                (4.0L * hv * hv);
    }
  }

  LVec3 bias;
  for (int i = 0; i < 3; ++i) {
    Real acc = 0.0L;
    for (int j = 0; j < 3; ++j) {
      LVec3 qp = q, qm = q, vp = v, vm = v;
      qp[j] += hq;
      qm[j] -= hq;
      vp[i] += hq;
      vm[i] -= hq;
      const Real mixed = (kinetic_l(qp, vp, p) - kinetic_l(qp, vm, p) -
                          kinetic_l(qm, vp, p) + kinetic_l(qm, vm, p)) /
                         (4.0L * hq * hq);
      acc += mixed * v[j];
    }
    LVec3 qp = q, qm = q;
    qp[i] += hq;
    qm[i] -= hq;
    acc -= (kinetic_l(qp, v, p) - kinetic_l(qm, v, p)) / (2.0L * hq);
    bias[i] = acc;
  }

  LVec3 gravity;
  for (int i = 0; i < 3; ++i) {
    LVec3 qp = q, qm = q;
    qp[i] += hq;
    qm[i] -= hq;
    gravity[i] = (potential_l(qp, p, leader_accel) -
                  potential_l(qm, p, leader_accel)) /
                 (2.0L * hq);
  }

  // Thrust acts at the follower, opposite the body z axis.
  const LVec2 thrust = Real(u.f) * LVec2(-std::sin(Real(x.phi_b)),
                                         std::cos(Real(x.phi_b)));
  const LMat23 J1 = fd_position_jacobian(&follower_pos, q, p);
  LVec3 Q = J1.transpose() * thrust;
  Q[0] += Real(p.Ib) * Real(u.tau_b);
  Q -= Real(c_d) * v;

  const LVec3 qdd = M.ldlt().solve(Q - bias - gravity);
  return qdd.cast<double>();
}

}  // namespace oracle
