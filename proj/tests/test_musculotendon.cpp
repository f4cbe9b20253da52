#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "reflex_sim/musculotendon.hpp"

using namespace reflex_sim;

TEST_SUITE("musculotendon") {

TEST_CASE("tension from elongation") {
  CHECK(tension_from_elongation(0.0, 0.5) == doctest::Approx(1.0));
  CHECK(tension_from_elongation(2.0, 0.5) == doctest::Approx(std::exp(1.0)));
  CHECK(tension_from_elongation(-10.0, 0.5) == doctest::Approx(0.006737947).epsilon(1e-6));
  CHECK(tension_from_elongation(100.0, 0.3, 400.0) == 400.0);
  CHECK_THROWS_AS(tension_from_elongation(std::nan(""), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(tension_from_elongation(1.0, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("elongation from tension") {
  CHECK(elongation_from_tension(1.0, 0.5) == 0.0);
  CHECK(elongation_from_tension(std::exp(1.0), 0.5) == doctest::Approx(2.0));
  CHECK(elongation_from_tension(15.0, 0.3) == doctest::Approx(9.0268).epsilon(1e-4));
  CHECK_THROWS_AS(elongation_from_tension(0.0, 0.3), std::domain_error);
  CHECK_THROWS_AS(elongation_from_tension(-1.0, 0.3), std::domain_error);
}

TEST_CASE("round trip over the working range") {
  for (double k : {0.05, 0.3, 1.0}) {
    for (double lf = std::log(1e-6); lf <= std::log(400.0); lf += 0.01) {
      const double f = std::exp(lf);
      const double back = tension_from_elongation(elongation_from_tension(f, k), k);
      REQUIRE(std::abs(back - f) <= 1e-9 * f);
    }
  }
}

TEST_CASE("tension is strictly increasing in elongation") {
  double prev = tension_from_elongation(-50.0, 0.3);
  for (double dn = -49.9; dn < 20.0; dn += 0.1) {
    const double f = tension_from_elongation(dn, 0.3);
    REQUIRE(f > prev);
    prev = f;
  }
}

TEST_CASE("step_motor") {
  MuscleParams p;
  p.servo_gain = 20.0;
  p.motor_vmax = 200.0;
  SUBCASE("zero error") {
    const auto u = step_motor(make_muscle(p, 100.0), 100.0, 0.001);
    CHECK(u.l_motor == 100.0);
    CHECK((u.flags & kFlagMotorClamped) == 0);
  }
  SUBCASE("velocity clamp") {
    // 20/s * -10 mm = -200 mm/s, right at the clamp
    const auto u = step_motor(make_muscle(p, 100.0), 90.0, 0.001);
    CHECK(u.l_motor == doctest::Approx(99.8).epsilon(1e-12));
    const auto far = step_motor(make_muscle(p, 100.0), 50.0, 0.001);
    CHECK(far.l_motor == doctest::Approx(99.8).epsilon(1e-12));
    CHECK((far.flags & kFlagMotorClamped) != 0);
  }
  SUBCASE("proportional region") {
    const auto u = step_motor(make_muscle(p, 100.0), 99.9, 0.001);
    CHECK(u.l_motor == doctest::Approx(100.0 - 20.0 * 0.1 * 0.001).epsilon(1e-12));
    CHECK(u.l_motor == doctest::Approx(99.998));
  }
  CHECK_THROWS_AS(step_motor(make_muscle(p, 100.0), 90.0, 0.0), std::invalid_argument);
}

TEST_CASE("motor speed never exceeds vmax") {
  MuscleParams p;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ref(0.0, 600.0);
  auto u = make_muscle(p, 300.0);
  for (int i = 0; i < 5000; ++i) {
    const double before = u.l_motor;
    u = step_motor(u, ref(rng), 0.001);
    REQUIRE(std::abs(u.l_motor - before) <= p.motor_vmax * 0.001 * (1.0 + 1e-12));
  }
}

TEST_CASE("update_tension") {
  MuscleParams p;
  p.k = 0.5;
  auto u = update_tension(make_muscle(p, 100.0), 102.0);
  CHECK(u.elongation == doctest::Approx(2.0));
  CHECK(u.tension == doctest::Approx(std::exp(1.0)));
  u = update_tension(make_muscle(p, 100.0), 100.0);
  CHECK(u.tension == doctest::Approx(1.0));
  u = update_tension(make_muscle(p, 100.0), 95.0);
  CHECK(u.tension == doctest::Approx(std::exp(-2.5)));

  SUBCASE("flags") {
    CHECK((update_tension(make_muscle(p, 100.0), 80.0).flags & kFlagSlack) != 0);
    const auto sat = update_tension(make_muscle(p, 100.0), 120.0);
    CHECK((sat.flags & kFlagSaturated) != 0);
    CHECK(sat.tension == p.f_max);
  }
  SUBCASE("previous tension only moves on rotate") {
    auto v = make_muscle(p, 100.0);
    v.tension_prev = 3.0;
    v = update_tension(v, 104.0);
    CHECK(v.tension_prev == 3.0);
    v = rotate_tension(v);
    CHECK(v.tension_prev == v.tension);
  }
}

TEST_CASE("muscle parameter validation") {
  MuscleParams p;
  CHECK(p.problems().empty());
  p.k = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MuscleParams{};
  p.motor_vmax = -1.0;
  CHECK_FALSE(p.problems().empty());
}

}
