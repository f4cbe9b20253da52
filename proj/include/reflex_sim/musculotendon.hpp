#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace reflex_sim {

/// Tension below which a muscle is flagged slack in telemetry (N).
inline constexpr double kSlackTension = 0.01;

/// Parameters of one motor + wire + nonlinear elastic element actuator.
struct MuscleParams {
  std::string name;
  double k = 0.3;             // elastic exponent (1/mm)
  double l0 = 300.0;          // muscle length at zero joint angle (mm)
  double f_max = 400.0;       // tension ceiling (N)
  double motor_vmax = 200.0;  // mm/s
  double servo_gain = 20.0;   // 1/s
  // Elastic elongation left in the element when the motor sits exactly at
  // h(theta). The geometric path length is h(theta) + preload.
  double preload = 0.0;       // mm

  std::vector<std::string> problems() const;
  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

enum MuscleFlag : std::uint8_t {
  kFlagSaturated = 1u << 0,
  kFlagSlack = 1u << 1,
  kFlagMotorClamped = 1u << 2,
};

struct MuscleUnit {
  MuscleParams params;
  double l_motor = 0.0;       // wound wire length, also the measured length l (mm)
  double l_ref = 0.0;         // last effective reference fed to the servo (mm)
  double elongation = 0.0;    // dn (mm)
  double tension = 1.0;       // f (N)
  double tension_prev = 1.0;  // f at the previous control tick (N)
  std::uint8_t flags = 0;
};

/// f = exp(k * dn), clamped to [0, f_max].
double tension_from_elongation(double elongation, double k,
                               double f_max = std::numeric_limits<double>::infinity());

/// Inverse of the constitutive law, ln(f) / k. Throws std::domain_error for f <= 0.
double elongation_from_tension(double tension, double k);

MuscleUnit make_muscle(const MuscleParams& params, double l_motor);

/// Proportional servo with a velocity clamp, one explicit Euler step.
MuscleUnit step_motor(MuscleUnit unit, double effective_ref, double dt);

/// Sets dn = geo_length - l_motor and recomputes f. Does not touch tension_prev.
MuscleUnit update_tension(MuscleUnit unit, double geo_length);

/// Called at control-tick boundaries: tension_prev := tension.
MuscleUnit rotate_tension(MuscleUnit unit);

}  // namespace reflex_sim
