#pragma once

#include <Eigen/Dense>

namespace slung {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat46 = Eigen::Matrix<double, 4, 6>;
using Mat62 = Eigen::Matrix<double, 6, 2>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

/// Physical parameters of the leader / payload / follower chain.
/// Masses in kg, lengths in m, Ib in kg m^2, g in m/s^2. All strictly positive.
struct SystemParams {
  double m = 0.073;    ///< follower robot mass
  double M = 0.030;    ///< payload mass
  double l0 = 0.94;    ///< leader-to-payload cable length
  double l1 = 0.95;    ///< payload-to-follower cable length
  double Ib = 6.0e-5;  ///< follower roll inertia about x_b
  double g = 9.81;     ///< gravitational acceleration

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Planar state x = [phi_b, dphi_b, phi_0, dphi_0, phi_1, dphi_1].
/// Angles in rad, rates in rad/s. phi_0 is the leader-side cable angle,
/// phi_1 the follower-side cable angle, phi_b the follower roll.
struct StateVec {
  double phi_b = 0.0;
  double dphi_b = 0.0;
  double phi_0 = 0.0;
  double dphi_0 = 0.0;
  double phi_1 = 0.0;
  double dphi_1 = 0.0;

  Vec6 vec() const {
    Vec6 v;
    v << phi_b, dphi_b, phi_0, dphi_0, phi_1, dphi_1;
    return v;
  }
  static StateVec from_vec(const Vec6& v) {
    return StateVec{v[0], v[1], v[2], v[3], v[4], v[5]};
  }
  /// Configuration vector Phi = (phi_b, phi_0, phi_1).
  Vec3 angles() const { return Vec3(phi_b, phi_0, phi_1); }
  /// Rate vector dPhi = (dphi_b, dphi_0, dphi_1).
  Vec3 rates() const { return Vec3(dphi_b, dphi_0, dphi_1); }
};

/// Control input u = (tau_b, f). tau_b is the normalized roll torque in
/// rad/s^2 (the roll row of H is scaled to identity; the physical torque is
/// Ib*tau_b). f is the collective thrust in N.
struct InputWrench {
  double tau_b = 0.0;
  double f = 0.0;

  Vec2 vec() const { return Vec2(tau_b, f); }
};

/// IMU-derived measurement y = [phi_b, dphi_b, a_y, a_z].
/// Roll and roll rate in rad, rad/s; specific force in body axes, m/s^2.
struct Measurement {
  double phi_b = 0.0;
  double dphi_b = 0.0;
  double a_y = 0.0;
  double a_z = 0.0;

  Vec4 vec() const { return Vec4(phi_b, dphi_b, a_y, a_z); }
  static Measurement from_vec(const Vec4& v) {
    return Measurement{v[0], v[1], v[2], v[3]};
  }
};

/// Commanded cable-angle setpoints, rad. Valid range: phi_0* in (-pi/2, 0),
/// phi_1* in (0, pi/2) (payload hangs between the two robots).
struct Setpoints {
  double phi_0 = 0.0;
  double phi_1 = 0.0;
};

}  // namespace slung
