#pragma once

#include "slung/errors.hpp"
#include "slung/types.hpp"

namespace slung::control {

/// Static feedforward (f*, phi_b*) holding the cable angles at the setpoints.
struct Feedforward {
  double f = 0.0;      ///< thrust magnitude, N (always > 0 for valid setpoints)
  double phi_b = 0.0;  ///< roll command, rad
};

/// Solves G_r(sp) = U_r(sp; f, phi_b) through the substitution
/// (u, v) = (f cos(phi_b), f sin(phi_b)), which makes the balance linear:
///   sin(phi_0*) u - cos(phi_0*) v = (m+M) g sin(phi_0*)
///  -sin(phi_1*) u + cos(phi_1*) v = -m g sin(phi_1*)
/// then f* = hypot(u, v), phi_b* = atan2(v, u).
/// Throws SingularConfiguration when sin(phi_0* - phi_1*) degenerates.
Feedforward feedforward(const Setpoints& sp, const SystemParams& p);

/// Reduced-model linearization about a setpoint equilibrium:
///   Hr* dd(dPhi) + Pr* dPhi = Br* du_r,   dPhi = (phi_0, phi_1) - setpoints,
///   u_r = (f, phi_b).
/// Hr* is the lower-right 2x2 block of H, Pr* = d(G_r - U_r)/dPhi (diagonal),
/// Br* = dU_r/du_r. det(Br*) = f* l0 l1 sin(phi_0* - phi_1*).
struct LinearizedReduced {
  Mat2 Hr = Mat2::Identity();
  Mat2 Pr = Mat2::Zero();
  Mat2 Br = Mat2::Identity();
  Feedforward ff;
};

LinearizedReduced linearize_reduced(const Setpoints& sp, const SystemParams& p);

/// Outer-loop PID gains and actuator limits. kp/kd/ki are the diagonal gains
/// acting on dPhi = (phi_0, phi_1) errors; integ_limit clamps each channel of
/// the error integral (rad s). f_max <= 0 requests the default 2 (m+M) g.
struct Gains {
  Vec2 kp = Vec2(4.0, 4.0);
  Vec2 kd = Vec2(3.0, 3.0);
  Vec2 ki = Vec2(0.5, 0.5);
  double integ_limit = 10.0 * kDegToRad;  // 10 deg s
  double f_min = 0.0;
  double f_max = -1.0;

  double thrust_ceiling(const SystemParams& p) const {
    return f_max > 0.0 ? f_max : 2.0 * (p.m + p.M) * p.g;
  }
};

struct ControlOutput {
  double f = 0.0;          ///< thrust command, N (saturated)
  double phi_b_cmd = 0.0;  ///< roll command, rad
  Vec2 integ = Vec2::Zero();  ///< updated error integral
};

/// Feedforward + PID law
///   du_r = (Br*)^-1 Hr* (-Kp dPhi - Kd d(dPhi) - Ki I),  I' = I + dPhi dt
/// mapped onto (f, phi_b) around the feedforward. The integral is clamped per
/// channel and frozen whenever the thrust command saturates.
ControlOutput control(const StateVec& fb, const Setpoints& sp, const Gains& g,
                      const LinearizedReduced& lin, const Vec2& integ,
                      double dt, const SystemParams& p);

}  // namespace slung::control
