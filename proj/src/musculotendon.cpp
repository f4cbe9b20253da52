#include "reflex_sim/musculotendon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reflex_sim {

std::vector<std::string> MuscleParams::problems() const {
  std::vector<std::string> out;
  auto require = [&](bool ok, const char* field) {
    if (!ok) out.push_back("MuscleParams." + std::string(field) + " out of range for muscle '" + name + "'");
  };
  require(std::isfinite(k) && k > 0.0, "k");
  require(std::isfinite(l0) && l0 > 0.0, "l0");
  require(std::isfinite(f_max) && f_max > 0.0, "f_max");
  require(std::isfinite(motor_vmax) && motor_vmax > 0.0, "motor_vmax");
  require(std::isfinite(servo_gain) && servo_gain > 0.0, "servo_gain");
  require(std::isfinite(preload), "preload");
  return out;
}

void MuscleParams::validate() const {
  if (const auto p = problems(); !p.empty()) throw std::invalid_argument(p.front());
}

double tension_from_elongation(double elongation, double k, double f_max) {
  if (!std::isfinite(elongation) || !std::isfinite(k)) {
    throw std::invalid_argument("tension_from_elongation: non-finite input");
  }
  if (k <= 0.0) {
    throw std::invalid_argument("tension_from_elongation: k must be positive");
  }
  return std::clamp(std::exp(k * elongation), 0.0, f_max);
}

double elongation_from_tension(double tension, double k) {
  if (!std::isfinite(tension) || !std::isfinite(k) || k <= 0.0) {
    throw std::invalid_argument("elongation_from_tension: bad input");
  }
  if (tension <= 0.0) {
    throw std::domain_error("elongation_from_tension: slack wire (f <= 0) has no elongation");
  }
  return std::log(tension) / k;
}

MuscleUnit make_muscle(const MuscleParams& params, double l_motor) {
  params.validate();
  MuscleUnit unit;
  unit.params = params;
  unit.l_motor = l_motor;
  unit.l_ref = l_motor;
  return unit;
}

MuscleUnit step_motor(MuscleUnit unit, double effective_ref, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_motor: dt must be positive");
  const double vmax = unit.params.motor_vmax;
  const double rate = unit.params.servo_gain * (effective_ref - unit.l_motor);
  const double clamped = std::clamp(rate, -vmax, vmax);
  unit.flags = static_cast<std::uint8_t>(unit.flags & ~kFlagMotorClamped);
  if (clamped != rate) unit.flags |= kFlagMotorClamped;
  unit.l_ref = effective_ref;
  unit.l_motor += clamped * dt;
  return unit;
}

MuscleUnit update_tension(MuscleUnit unit, double geo_length) {
  unit.elongation = geo_length - unit.l_motor;
  const double raw = std::exp(unit.params.k * unit.elongation);
  unit.tension = tension_from_elongation(unit.elongation, unit.params.k, unit.params.f_max);
  unit.flags = static_cast<std::uint8_t>(unit.flags & ~(kFlagSaturated | kFlagSlack));
  if (raw > unit.params.f_max) unit.flags |= kFlagSaturated;
  if (unit.tension < kSlackTension) unit.flags |= kFlagSlack;
  return unit;
}

MuscleUnit rotate_tension(MuscleUnit unit) {
  unit.tension_prev = unit.tension;
  return unit;
}

}  // namespace reflex_sim
