#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "reflex_sim/arm_dynamics.hpp"
#include "reflex_sim/config.hpp"

using namespace reflex_sim;

namespace {

ArmModel one_joint(double g_arm, double inertia = 0.05, double mu_s = 0.0, double mu_k = 0.0) {
  ArmModel m;
  JointParams j;
  j.name = "E-p";
  j.inertia = inertia;
  j.damping = 0.0;
  j.mu_static = mu_s;
  j.mu_kinetic = mu_k;
  m.joints = {j};
  MuscleParams a;
  a.name = "a";
  a.l0 = 300.0;
  m.muscles = {a};
  m.moment_arms = Eigen::MatrixXd::Constant(1, 1, g_arm);
  m.gravity = 0.0;
  return m;
}

ArmModel pair_joint(double inertia = 0.05, double mu_s = 0.0, double mu_k = 0.0) {
  ArmModel m = one_joint(20.0, inertia, mu_s, mu_k);
  MuscleParams b;
  b.name = "b";
  b.l0 = 300.0;
  m.muscles.push_back(b);
  m.moment_arms = Eigen::MatrixXd(1, 2);
  m.moment_arms << 20.0, -20.0;
  return m;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Height of every mass in the chain, hanging pose at theta = 0 pointing down.
double potential(const ArmModel& m, const Eigen::VectorXd& theta, double payload) {
  double phi = 0.0, y = 0.0, v = 0.0;
  for (int j = 0; j < m.n_joints(); ++j) {
    const auto& jp = m.joints[j];
    if (!jp.gravity_plane) continue;
    phi += theta[j];
    v += jp.link_mass * m.gravity * (y - jp.link_com * std::cos(phi));
    y -= jp.link_length * std::cos(phi);
  }
  return v + payload * m.gravity * y;
}

}  // namespace

TEST_SUITE("arm_dynamics") {

TEST_CASE("muscle lengths from joint angles") {
  const ArmModel flex = one_joint(20.0);
  CHECK(muscle_lengths_from_joints(vec({0.0}), flex)[0] == 300.0);
  CHECK(muscle_lengths_from_joints(vec({-1.57}), flex)[0] == doctest::Approx(331.4));
  const ArmModel ext = one_joint(-20.0);
  CHECK(muscle_lengths_from_joints(vec({-1.57}), ext)[0] == doctest::Approx(268.6));
  CHECK_THROWS_AS(muscle_lengths_from_joints(vec({0.0, 0.0}), flex), std::invalid_argument);
}

TEST_CASE("h is affine with slope -G^T") {
  const ArmModel robot = default_robot();
  // dyadic values keep every operation exact
  const Eigen::VectorXd a = vec({-0.5, -1.25});
  const Eigen::VectorXd b = vec({0.25, -0.125});
  const Eigen::VectorXd lhs =
      muscle_lengths_from_joints(a, robot) - muscle_lengths_from_joints(b, robot);
  const Eigen::VectorXd rhs = -robot.moment_arms.transpose() * (a - b);
  CHECK(lhs == rhs);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> th(-2.4, 0.0);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd x = vec({th(rng), th(rng)}), y = vec({th(rng), th(rng)});
    const Eigen::VectorXd d = muscle_lengths_from_joints(x, robot) - muscle_lengths_from_joints(y, robot);
    REQUIRE((d + robot.moment_arms.transpose() * (x - y)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("joint torques") {
  const ArmModel flex = one_joint(20.0);
  CHECK(joint_torques(vec({0.0}), flex)[0] == 0.0);
  // a wire that lengthens as theta falls pulls theta back up
  CHECK(joint_torques(vec({100.0}), flex)[0] == doctest::Approx(2.0));
  const ArmModel pair = pair_joint();
  CHECK(joint_torques(vec({80.0, 80.0}), pair)[0] == 0.0);
  CHECK_THROWS_AS(joint_torques(vec({-1.0}), flex), std::invalid_argument);
}

TEST_CASE("muscle torque does virtual work against path lengthening") {
  const ArmModel robot = default_robot();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> f(0.0, 400.0), th(-2.0, 0.0), d(-1e-3, 1e-3);
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd tens = vec({f(rng), f(rng), f(rng), f(rng)});
    const Eigen::VectorXd theta = vec({th(rng), th(rng)});
    const Eigen::VectorXd dtheta = vec({d(rng), d(rng)});
    const Eigen::VectorXd dl =
        muscle_lengths_from_joints(theta + dtheta, robot) - muscle_lengths_from_joints(theta, robot);
    const double work_joint = joint_torques(tens, robot).dot(dtheta);
    const double work_wire = -tens.dot(dl) / 1000.0;
    REQUIRE(work_joint == doctest::Approx(work_wire).epsilon(1e-9));
  }
}

TEST_CASE("gravity torque is minus the potential gradient") {
  const ArmModel robot = default_robot();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> th(-2.0, 0.5);
  for (double payload : {0.0, 3.6, 10.0}) {
    for (int i = 0; i < 50; ++i) {
      ArmState s = ArmState::at_rest(vec({th(rng), th(rng)}));
      s.payload_mass = payload;
      const Eigen::VectorXd tau = gravity_torques(s, robot);
      for (int j = 0; j < 2; ++j) {
        const double h = 1e-6;
        Eigen::VectorXd p = s.theta, q = s.theta;
        p[j] += h;
        q[j] -= h;
        const double grad = (potential(robot, p, payload) - potential(robot, q, payload)) / (2 * h);
        REQUIRE(tau[j] == doctest::Approx(-grad).epsilon(1e-6));
      }
    }
  }
  ArmModel off = robot;
  off.gravity = 0.0;
  CHECK(gravity_torques(ArmState::at_rest(vec({-0.3, -1.0})), off).isZero());
}

TEST_CASE("step_dynamics examples") {
  SUBCASE("rest stays at rest") {
    const ArmModel m = one_joint(20.0);
    const ArmState s = ArmState::at_rest(vec({-1.0}));
    const ArmState n = step_dynamics(s, vec({0.0}), vec({0.0}), 0.001, m);
    CHECK(n.theta[0] == -1.0);
    CHECK(n.omega[0] == 0.0);
  }
  SUBCASE("breakaway subtracts static friction") {
    const ArmModel m = one_joint(20.0, 0.05, 0.2, 0.2);
    const ArmState n = step_dynamics(ArmState::at_rest(vec({-1.0})), vec({0.5}), vec({0.0}), 0.001, m);
    CHECK(n.omega[0] == doctest::Approx(0.001 * (0.5 - 0.2) / 0.05));
    CHECK(n.omega[0] == doctest::Approx(0.006));
    CHECK(n.theta[0] == doctest::Approx(-1.0 + 0.001 * 0.006));
  }
  SUBCASE("below static friction nothing moves") {
    const ArmModel m = one_joint(20.0, 0.05, 0.2, 0.2);
    const ArmState n = step_dynamics(ArmState::at_rest(vec({-1.0})), vec({0.1}), vec({0.0}), 0.001, m);
    CHECK(n.omega[0] == 0.0);
  }
  SUBCASE("bad dt") {
    const ArmModel m = one_joint(20.0);
    CHECK_THROWS_AS(step_dynamics(ArmState::at_rest(vec({0.0})), vec({0.0}), vec({0.0}), 0.0, m),
                    std::invalid_argument);
  }
}

TEST_CASE("stiction holds for many steps") {
  const ArmModel m = one_joint(20.0, 0.05, 0.2, 0.1);
  ArmState s = ArmState::at_rest(vec({-0.7}));
  for (int i = 0; i < 20000; ++i) s = step_dynamics(s, vec({0.19}), vec({-0.005}), 0.001, m, i);
  CHECK(s.theta[0] == -0.7);
  CHECK(s.omega[0] == 0.0);
}

TEST_CASE("kinetic energy never grows under friction and damping alone") {
  ArmModel m = default_robot();
  m.gravity = 0.0;
  ArmState s = ArmState::at_rest(vec({-0.5, -1.2}));
  s = apply_impulse(apply_impulse(s, 0, 2.0), 1, -3.0);
  double ke = kinetic_energy(s, m);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < 5000; ++i) {
    s = step_dynamics(s, zero, zero, 0.001, m, i);
    const double next = kinetic_energy(s, m);
    REQUIRE(next <= ke);
    ke = next;
  }
  CHECK(ke == 0.0);
}

TEST_CASE("joint limits push back one-sidedly") {
  const ArmModel m = one_joint(20.0);
  ArmState s = ArmState::at_rest(vec({0.01}));
  CHECK(limit_torques(s, m)[0] == doctest::Approx(-500.0 * 0.01));
  s.theta[0] = -1.0;
  CHECK(limit_torques(s, m)[0] == 0.0);
  s.theta[0] = 0.01;
  s.omega[0] = -5.0;  // leaving fast: the damper may not pull inward
  CHECK(limit_torques(s, m)[0] == 0.0);
  const ArmState n = step_dynamics(ArmState::at_rest(vec({0.02})), vec({0.0}), vec({0.0}), 0.001, m);
  CHECK(n.limit_force[0] == doctest::Approx(10.0));
  CHECK(n.omega[0] < 0.0);
}

TEST_CASE("impulses") {
  ArmState s = ArmState::at_rest(vec({0.0, 0.0}));
  CHECK(apply_impulse(s, 1, 0.0).omega == s.omega);
  CHECK(apply_impulse(s, 1, -1.5).omega[1] == -1.5);
  CHECK(apply_impulse(apply_impulse(s, 0, 0.5), 0, 0.5).omega[0] == 1.0);
  CHECK_THROWS_AS(apply_impulse(s, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(apply_impulse(s, -1, 1.0), std::invalid_argument);
}

TEST_CASE("divergence is reported with its tick") {
  const ArmModel m = one_joint(20.0);
  const ArmState s = ArmState::at_rest(vec({-1.0}));
  try {
    step_dynamics(s, vec({std::numeric_limits<double>::infinity()}), vec({0.0}), 0.001, m, 42);
    FAIL("no throw");
  } catch (const DivergenceError& e) {
    CHECK(e.tick() == 42);
  }
}

TEST_CASE("payload lengthens the lever and adds inertia") {
  const ArmModel robot = default_robot();
  const Eigen::VectorXd reach = payload_reach(robot);
  CHECK(reach[1] == doctest::Approx(robot.joints[1].link_length));
  CHECK(reach[0] == doctest::Approx(robot.joints[0].link_length + robot.joints[1].link_length));
  ArmState s = ArmState::at_rest(vec({0.0, -1.0}));
  s.payload_mass = 2.0;
  CHECK(effective_inertia(s, robot)[1] ==
        doctest::Approx(robot.joints[1].inertia + 2.0 * reach[1] * reach[1]));
}

TEST_CASE("model validation") {
  ArmModel m = default_robot();
  CHECK(m.problems().empty());
  m.joints[1].mu_kinetic = m.joints[1].mu_static + 1.0;
  CHECK_FALSE(m.problems().empty());
  m = default_robot();
  m.joints[0].theta_min = m.joints[0].theta_max;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m = default_robot();
  m.moment_arms(0, 0) = std::nan("");
  CHECK_FALSE(m.problems().empty());
  m = default_robot();
  m.joints[0].inertia = 0.0;
  CHECK_FALSE(m.problems().empty());
}

}
