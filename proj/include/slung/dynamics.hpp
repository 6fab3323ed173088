#pragma once

#include <utility>

#include "slung/errors.hpp"
#include "slung/types.hpp"

namespace slung::dynamics {

/// Guard on |sin(phi_0 - phi_1)| below which the cable geometry is treated
/// as singular (tension undefined, cables collinear).
inline constexpr double kSingularSinEps = 1e-3;

/// Terms of the manipulator equation H(Phi) ddPhi + C(Phi, dPhi) + G(Phi) = B(Phi) u
/// in coordinates Phi = (phi_b, phi_0, phi_1). The roll row is normalized by
/// Ib, so H(0,0) = 1 and B(0,0) = 1; tau_b is an angular acceleration command.
struct ManipulatorTerms {
  Mat3 H = Mat3::Identity();  ///< inertia matrix, symmetric positive definite
  Vec3 C = Vec3::Zero();      ///< Coriolis/centrifugal vector
  Vec3 G = Vec3::Zero();      ///< generalized gravity vector
  Mat32 B = Mat32::Zero();    ///< input map for u = (tau_b, f)
};

/// Assembles H, C, G, B at a configuration and rate.
///
/// H = [ 1        0                          0                  ]
///     [ 0  (m+M) l0^2            -m l0 l1 cos(phi_0 - phi_1)   ]
///     [ 0  -m l0 l1 cos(phi_0 - phi_1)       m l1^2            ]
///
/// C = (0, -m l0 l1 dphi_1^2 sin(phi_0 - phi_1),
///         m l0 l1 dphi_0^2 sin(phi_0 - phi_1))
/// G = (0, (m+M) g l0 sin(phi_0), -m g l1 sin(phi_1))
/// B = [ 1, 0; 0, l0 sin(phi_0 - phi_b); 0, l1 sin(phi_b - phi_1) ]
ManipulatorTerms manipulator_terms(const Vec3& phi, const Vec3& dphi,
                                   const SystemParams& p);

/// Payload and follower positions in the leader-fixed plane, (y, z) with z up,
/// origin at the leader's cable anchor:
///   r0 = ( l0 sin(phi_0), -l0 cos(phi_0) )
///   r1 = r0 + ( -l1 sin(phi_1), l1 cos(phi_1) )
std::pair<Vec2, Vec2> positions(double phi_0, double phi_1,
                                const SystemParams& p);

/// Time derivative of the full state under input u.
///
/// leader_accel is the leader's inertial acceleration (y, z); it enters as a
/// pseudo-force by replacing the gravity vector (0, -g) with
/// (-aL_y, -g - aL_z) when forming the generalized gravity terms. c_d adds
/// linear damping -c_d dPhi to the generalized forces (the normalized roll
/// row receives -c_d dphi_b / Ib).
StateVec state_derivative(const StateVec& x, const InputWrench& u,
                          const SystemParams& p,
                          const Vec2& leader_accel = Vec2::Zero(),
                          double c_d = 0.0);

/// Tension in the payload-to-follower cable, from the payload's torque
/// balance about the leader anchor:
///   T1 = (M l0 ddphi_0 + M g sin(phi_0) + c_d dphi_0 / l0) / sin(phi_0 - phi_1)
/// with ddphi_0 taken from state_derivative, and the gravity term generalized
/// the same way as in state_derivative when the leader accelerates. Positive
/// when the cable pulls the payload toward the follower.
///
/// Throws SingularConfiguration when |sin(phi_0 - phi_1)| <= kSingularSinEps.
double cable_tension(const StateVec& x, const InputWrench& u,
                     const SystemParams& p,
                     const Vec2& leader_accel = Vec2::Zero(), double c_d = 0.0);

/// Noise-free IMU model: the specific force on the follower in body axes,
///   a_y = -(T1/m) sin(phi_1 - phi_b)
///   a_z =  (T1/m) cos(phi_1 - phi_b) - f/m
/// plus the roll and roll-rate channels. At a static equilibrium
/// ||(a_y, a_z)|| = g and phi_b = -asin(a_y / g).
Measurement measurement(const StateVec& x, const InputWrench& u,
                        const SystemParams& p,
                        const Vec2& leader_accel = Vec2::Zero(),
                        double c_d = 0.0);

/// Total mechanical energy, J. Kinetic from the two point masses and the roll
/// inertia; potential datum at the leader anchor.
double total_energy(const StateVec& x, const SystemParams& p);

}  // namespace slung::dynamics
