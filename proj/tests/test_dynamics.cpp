#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "slung/controller.hpp"
#include "slung/dynamics.hpp"
#include "slung/sim.hpp"
#include "support/lagrangian_oracle.hpp"

using namespace slung;
namespace dyn = slung::dynamics;

namespace {
const double kDeg = M_PI / 180.0;
const SystemParams kParams{};  // defaults are the hardware values

StateVec random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-1.2, 1.2);
  std::uniform_real_distribution<double> rate(-3.0, 3.0);
  StateVec x;
  x.phi_b = ang(rng);
  x.dphi_b = rate(rng);
  x.phi_0 = ang(rng);
  x.dphi_0 = rate(rng);
  x.phi_1 = ang(rng);
  x.dphi_1 = rate(rng);
  return x;
}

InputWrench random_input(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> tau(-20.0, 20.0);
  std::uniform_real_distribution<double> thrust(0.0, 2.0);
  return InputWrench{tau(rng), thrust(rng)};
}

StateVec mirror(const StateVec& x) {
  return StateVec{-x.phi_b, -x.dphi_b, -x.phi_0,
                  -x.dphi_0, -x.phi_1, -x.dphi_1};
}
}  // namespace

TEST_CASE("manipulator terms at rest and zero angles") {
  auto t = dyn::manipulator_terms(Vec3::Zero(), Vec3::Zero(), kParams);
  const double mM = kParams.m + kParams.M;
  CHECK(t.H(0, 0) == 1.0);
  CHECK(t.H(0, 1) == 0.0);
  CHECK(t.H(1, 0) == 0.0);
  CHECK(t.H(1, 1) == doctest::Approx(mM * kParams.l0 * kParams.l0).epsilon(1e-14));
  CHECK(t.H(2, 2) == doctest::Approx(kParams.m * kParams.l1 * kParams.l1).epsilon(1e-14));
  CHECK(t.H(1, 2) ==
        doctest::Approx(-kParams.m * kParams.l0 * kParams.l1).epsilon(1e-14));
  CHECK(t.C.norm() == 0.0);
  CHECK(t.G.norm() == 0.0);
  CHECK(t.B(0, 0) == 1.0);
  CHECK(t.B(1, 1) == 0.0);  // sin(phi_0 - phi_b) = 0
  CHECK(t.B(2, 1) == 0.0);
}

TEST_CASE("lower inertia block is diagonal at right-angle cables") {
  Vec3 phi(0.0, 0.25 * M_PI, -0.25 * M_PI);  // phi_0 - phi_1 = pi/2
  auto t = dyn::manipulator_terms(phi, Vec3::Zero(), kParams);
  CHECK(std::abs(t.H(1, 2)) < 1e-15);
  CHECK(std::abs(t.H(2, 1)) < 1e-15);
}

TEST_CASE("gravity vector at the experimental setpoints") {
  Vec3 phi(0.0, -40.0 * kDeg, 40.0 * kDeg);
  auto t = dyn::manipulator_terms(phi, Vec3::Zero(), kParams);
  CHECK(t.G[0] == 0.0);
  CHECK(t.G[1] == doctest::Approx(-0.61052237).epsilon(1e-6));
  CHECK(t.G[2] == doctest::Approx(-0.43730352).epsilon(1e-6));
}

TEST_CASE("H symmetric positive definite over the full angle grid") {
  double min_eig = 1e300;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double p0 = -M_PI + 2.0 * M_PI * i / 99.0;
      const double p1 = -M_PI + 2.0 * M_PI * j / 99.0;
      auto t = dyn::manipulator_terms(Vec3(0.3, p0, p1), Vec3::Zero(), kParams);
      CHECK((t.H - t.H.transpose()).norm() == 0.0);
      Eigen::SelfAdjointEigenSolver<Mat3> es(t.H);
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
  }
  CHECK(min_eig > 0.0);
}

TEST_CASE("state derivative matches the finite-difference Lagrangian oracle") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 1000; ++k) {
    const StateVec x = random_state(rng);
    const InputWrench u = random_input(rng);
    const StateVec dx = dyn::state_derivative(x, u, kParams);
    CHECK(dx.phi_b == x.dphi_b);
    CHECK(dx.phi_0 == x.dphi_0);
    CHECK(dx.phi_1 == x.dphi_1);
    const Vec3 qdd_ref = oracle::accelerations(x, u, kParams);
    const Vec3 qdd(dx.dphi_b, dx.dphi_0, dx.dphi_1);
    const double scale = std::max(1.0, qdd_ref.lpNorm<Eigen::Infinity>());
    CHECK((qdd - qdd_ref).lpNorm<Eigen::Infinity>() / scale < 1e-6);
  }
}

TEST_CASE("oracle agreement holds with drag and leader acceleration") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> acc(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const StateVec x = random_state(rng);
    const InputWrench u = random_input(rng);
    const Vec2 aL(acc(rng), acc(rng));
    const double c_d = 0.002;
    const StateVec dx = dyn::state_derivative(x, u, kParams, aL, c_d);
    const Vec3 qdd_ref = oracle::accelerations(x, u, kParams, aL, c_d);
    const Vec3 qdd(dx.dphi_b, dx.dphi_0, dx.dphi_1);
    const double scale = std::max(1.0, qdd_ref.lpNorm<Eigen::Infinity>());
    CHECK((qdd - qdd_ref).lpNorm<Eigen::Infinity>() / scale < 1e-6);
  }
}

TEST_CASE("feedforward equilibrium is a fixed point of the dynamics") {
  const Setpoints sp{-40.0 * kDeg, 40.0 * kDeg};
  const auto ff = control::feedforward(sp, kParams);
  StateVec x;
  x.phi_b = ff.phi_b;
  x.phi_0 = sp.phi_0;
  x.phi_1 = sp.phi_1;
  const StateVec dx = dyn::state_derivative(x, InputWrench{0.0, ff.f}, kParams);
  CHECK(dx.vec().lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("all-zero state with no input stays at rest") {
  const StateVec dx = dyn::state_derivative(StateVec{}, InputWrench{}, kParams);
  CHECK(dx.vec().lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("leader free-fall cancels gravity") {
  // aL = (0, -g) makes the effective gravity vanish: any configuration at
  // rest with zero input is then an equilibrium.
  StateVec x;
  x.phi_0 = -0.7;
  x.phi_1 = 0.4;
  x.phi_b = 0.2;
  const Vec2 aL(0.0, -kParams.g);
  const StateVec dx = dyn::state_derivative(x, InputWrench{}, kParams, aL);
  CHECK(dx.vec().lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("zero leader acceleration reproduces the plain gravity path") {
  std::mt19937_64 rng(44);
  for (int k = 0; k < 50; ++k) {
    const StateVec x = random_state(rng);
    const InputWrench u = random_input(rng);
    const StateVec a = dyn::state_derivative(x, u, kParams);
    const StateVec b = dyn::state_derivative(x, u, kParams, Vec2::Zero());
    CHECK(a.vec() == b.vec());
  }
}

TEST_CASE("cable tension at the static experimental equilibrium") {
  const Setpoints sp{-40.0 * kDeg, 40.0 * kDeg};
  const auto ff = control::feedforward(sp, kParams);
  StateVec x;
  x.phi_b = ff.phi_b;
  x.phi_0 = sp.phi_0;
  x.phi_1 = sp.phi_1;
  const double T1 = dyn::cable_tension(x, InputWrench{0.0, ff.f}, kParams);
  CHECK(T1 == doctest::Approx(0.19209068262524479).epsilon(1e-9));
}

TEST_CASE("tension vanishes for a plumb payload with no swing torque") {
  // phi_0 = 0 and phi_1 = pi/2 decouple the lower block, so ddphi_0 = 0 with
  // zero input and the torque balance forces T1 = 0.
  StateVec x;
  x.phi_1 = 0.5 * M_PI;
  const double T1 = dyn::cable_tension(x, InputWrench{}, kParams);
  CHECK(std::abs(T1) < 1e-14);
}

TEST_CASE("tension rejects collinear cables") {
  StateVec x;
  x.phi_0 = 0.3;
  x.phi_1 = 0.3;
  CHECK_THROWS_AS(dyn::cable_tension(x, InputWrench{0.0, 0.5}, kParams),
                  SingularConfiguration);
}

TEST_CASE("tension is invariant under the planar mirror") {
  std::mt19937_64 rng(45);
  int tested = 0;
  while (tested < 200) {
    const StateVec x = random_state(rng);
    if (std::abs(std::sin(x.phi_0 - x.phi_1)) < 0.05) continue;
    const InputWrench u = random_input(rng);
    const InputWrench um{-u.tau_b, u.f};
    const double a = dyn::cable_tension(x, u, kParams);
    const double b = dyn::cable_tension(mirror(x), um, kParams);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    ++tested;
  }
}

TEST_CASE("measurement in tension-free level hover") {
  StateVec x;
  x.phi_1 = 0.5 * M_PI;  // keeps the geometry regular while T1 = 0
  const InputWrench u{0.0, kParams.m * kParams.g};
  const Measurement y = dyn::measurement(x, u, kParams);
  CHECK(y.phi_b == 0.0);
  CHECK(y.dphi_b == 0.0);
  CHECK(std::abs(y.a_y) < 1e-14);
  CHECK(y.a_z == doctest::Approx(-kParams.g).epsilon(1e-12));
}

TEST_CASE("static equilibrium measurement is a pure gravity reading") {
  const Setpoints sp{-40.0 * kDeg, 40.0 * kDeg};
  const auto ff = control::feedforward(sp, kParams);
  StateVec x;
  x.phi_b = ff.phi_b;
  x.phi_0 = sp.phi_0;
  x.phi_1 = sp.phi_1;
  const Measurement y = dyn::measurement(x, InputWrench{0.0, ff.f}, kParams);
  CHECK(std::hypot(y.a_y, y.a_z) == doctest::Approx(kParams.g).epsilon(1e-9));
  // Complementary-filter consistency: roll recoverable from a_y alone.
  CHECK(-std::asin(y.a_y / kParams.g) == doctest::Approx(ff.phi_b).epsilon(1e-9));
}

TEST_CASE("lateral channel vanishes when the roll aligns with cable 1") {
  std::mt19937_64 rng(46);
  int tested = 0;
  while (tested < 50) {
    StateVec x = random_state(rng);
    x.phi_b = x.phi_1;
    if (std::abs(std::sin(x.phi_0 - x.phi_1)) < 0.05) continue;
    const Measurement y = dyn::measurement(x, random_input(rng), kParams);
    CHECK(std::abs(y.a_y) < 1e-12);
    ++tested;
  }
}

TEST_CASE("measurement mirror flips a_y and keeps a_z") {
  std::mt19937_64 rng(47);
  int tested = 0;
  while (tested < 100) {
    const StateVec x = random_state(rng);
    if (std::abs(std::sin(x.phi_0 - x.phi_1)) < 0.05) continue;
    const InputWrench u = random_input(rng);
    const Measurement a = dyn::measurement(x, u, kParams);
    const Measurement b =
        dyn::measurement(mirror(x), InputWrench{-u.tau_b, u.f}, kParams);
    CHECK(b.a_y == doctest::Approx(-a.a_y).epsilon(1e-12));
    CHECK(b.a_z == doctest::Approx(a.a_z).epsilon(1e-12));
    ++tested;
  }
}

TEST_CASE("specific-force norm matches Newtonian follower acceleration") {
  // ||(a_y, a_z)|| must equal ||r1dd - gamma|| with r1dd from the oracle
  // accelerations (basis-free check of the tension + thrust force model).
  std::mt19937_64 rng(48);
  int tested = 0;
  while (tested < 100) {
    const StateVec x = random_state(rng);
    if (std::abs(std::sin(x.phi_0 - x.phi_1)) < 0.1) continue;
    const InputWrench u = random_input(rng);
    const Measurement y = dyn::measurement(x, u, kParams);

    const Vec3 q = x.angles();
    const Vec3 v = x.rates();
    const Vec3 qdd = oracle::accelerations(x, u, kParams);
    const double h = 1e-4;
    const Vec3 qp = q + h * v + 0.5 * h * h * qdd;
    const Vec3 qm = q - h * v + 0.5 * h * h * qdd;
    const Vec2 r1dd = (oracle::follower_pos(qp, kParams) -
                       2.0 * oracle::follower_pos(q, kParams) +
                       oracle::follower_pos(qm, kParams)) /
                      (h * h);
    const Vec2 gamma(0.0, -kParams.g);
    const double want = (r1dd - gamma).norm();
    CHECK(std::hypot(y.a_y, y.a_z) ==
          doctest::Approx(want).epsilon(2e-3).scale(1.0));
    ++tested;
  }
}

TEST_CASE("positions at reference configurations") {
  auto [r0a, r1a] = dyn::positions(0.0, 0.0, kParams);
  CHECK(r0a == Vec2(0.0, -0.94));
  CHECK(r1a[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r1a[1] == doctest::Approx(0.01).epsilon(1e-12));

  auto [r0b, r1b] = dyn::positions(-40.0 * kDeg, 40.0 * kDeg, kParams);
  CHECK(r0b[0] == doctest::Approx(-0.6042203531).epsilon(1e-9));
  CHECK(r0b[1] == doctest::Approx(-0.7200817765).epsilon(1e-9));
  CHECK(r1b[0] == doctest::Approx(-1.2148685823).epsilon(1e-9));
  CHECK(r1b[1] == doctest::Approx(0.0076604444).epsilon(1e-6));
}

TEST_CASE("rest energy equals the potential at the hanging configuration") {
  const double e = dyn::total_energy(StateVec{}, kParams);
  CHECK(e == doctest::Approx(-0.2694807).epsilon(1e-9));
}

TEST_CASE("total energy matches the oracle energies on random states") {
  std::mt19937_64 rng(49);
  for (int k = 0; k < 200; ++k) {
    const StateVec x = random_state(rng);
    const double want = oracle::kinetic(x.angles(), x.rates(), kParams) +
                        oracle::potential(x.angles(), kParams, Vec2::Zero());
    CHECK(dyn::total_energy(x, kParams) ==
          doctest::Approx(want).epsilon(1e-7));
  }
}

TEST_CASE("power balance along a forced trajectory") {
  // dE/dt = Ib tau_b dphi_b + f (l0 sin(phi_0-phi_b) dphi_0
  //          + l1 sin(phi_b-phi_1) dphi_1) - c_d ||dPhi||^2.
  // tau_b is a normalized command, so the roll power uses the true torque.
  for (const double c_d : {0.0, 0.002}) {
    StateVec x;
    x.phi_0 = -35.0 * kDeg;
    x.phi_1 = 45.0 * kDeg;
    x.phi_b = 0.1;
    const InputWrench u{0.4, 0.9};
    const double dt = 1e-3;
    double max_rel = 0.0;
    for (int k = 0; k < 400; ++k) {
      const StateVec xm = x;
      const StateVec xp =
          sim::step_rk4(x, u, dt, kParams, Vec2::Zero(), c_d);
      const StateVec xpp =
          sim::step_rk4(xp, u, dt, kParams, Vec2::Zero(), c_d);
      const double dE = (dyn::total_energy(xpp, kParams) -
                         dyn::total_energy(xm, kParams)) /
                        (2.0 * dt);
      const StateVec& c = xp;
      const double power =
          kParams.Ib * u.tau_b * c.dphi_b +
          u.f * (kParams.l0 * std::sin(c.phi_0 - c.phi_b) * c.dphi_0 +
                 kParams.l1 * std::sin(c.phi_b - c.phi_1) * c.dphi_1) -
          c_d * (c.dphi_b * c.dphi_b + c.dphi_0 * c.dphi_0 +
                 c.dphi_1 * c.dphi_1);
      max_rel = std::max(max_rel,
                         std::abs(dE - power) / std::max(1e-3, std::abs(power)));
      x = xp;
    }
    CHECK(max_rel < 1e-4);
  }
}
