#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "reflex_sim/arm_dynamics.hpp"
#include "reflex_sim/controllers.hpp"
#include "reflex_sim/metrics.hpp"
#include "reflex_sim/reflex_controller.hpp"
#include "reflex_sim/telemetry.hpp"

namespace reflex_sim {

struct ImpulseEvent {
  int joint = 0;
  double d_omega = 0.0;  // rad/s
};

/// Sets the end-effector payload to `mass` (kg).
struct PayloadEvent {
  double mass = 0.0;
};

/// Piecewise-linear commanded references, knot times relative to the event.
/// Once started it replaces every other source of commanded references.
struct RefTrajectoryEvent {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> lengths;

  Eigen::VectorXd sample(double t_rel) const;
};

using EventKind = std::variant<ImpulseEvent, PayloadEvent, RefTrajectoryEvent>;

struct ScenarioEvent {
  double time = 0.0;
  EventKind kind;
};

std::string event_kind_name(const EventKind& kind);

struct ScenarioScript {
  std::string name;
  double duration = 5.0;
  Eigen::VectorXd initial_posture;
  std::vector<ScenarioEvent> events;
  bool reflex_enabled = true;
  bool feedback_enabled = false;
  std::uint64_t seed = 0;
  double jitter = 0.0;  // uniform +-jitter seconds on event times, 0 = off
  MetricsContext metrics;

  std::vector<std::string> problems(int n_joints, int n_muscles) const;
  /// Throws std::invalid_argument naming the offending field.
  void validate(int n_joints, int n_muscles) const;
};

struct SimTiming {
  double physics_dt = 0.001;  // s
  double reflex_rate = 100.0; // Hz
};

/// Runs one scenario on the fixed-step clock: physics every physics_dt,
/// reflex every 1/reflex_rate, feedback every 1/fb.rate (feedback first when
/// ticks coincide). Bit-deterministic for identical inputs. Throws
/// DivergenceError if the state stops being finite.
TelemetryLog run(const ScenarioScript& scenario, const ArmModel& robot,
                 const ReflexParams& reflex, const std::optional<FeedbackParams>& fb,
                 const SimTiming& timing = {});

/// Postures, impact strengths, payloads and timings of the built-in experiments.
struct ScenarioDefaults {
  double e1_posture = -0.04;
  double e1_first_impact = 1.0;
  double e1_impact_interval = 1.0;
  double e1_impulse = 3.0;     // rad/s
  double e1_shoulder = 0.0;

  double e2_posture = -1.57;
  double e2_first_impact = 2.0;
  double e2_impact_interval = 1.5;
  double e2_impulse = 3.0;
  double e2_settle = 3.0;

  double e3_posture = -1.57;
  double e3_drop_time = 4.0;
  double e3_payload = 3.6;    // kg
  double e3_drop_height = 0.2; // m
  double e3_theta_thre = -1.55;
  double e3_tail = 8.0;

  double e4_start_posture = -0.3;
  double e4_end_posture = -0.7;
  double e4_ramp_start = 1.0;
  double e4_ramp_duration = 1.0;
  double e4_payload = 10.0;    // kg
  double e4_payload_time = 1.0;  // dumbbell taken up as the lift starts
  double e4_tail = 6.0;
  double e4_shoulder = 0.0;
};

/// Elbow velocity change when a mass dropped from `height` sticks to the end
/// of the forearm: m v r / I_eff, with v = sqrt(2 g height).
double drop_impulse(const ArmModel& robot, int joint, const Eigen::VectorXd& posture,
                    double mass, double height);

/// E1_protective, E2_postural, E3_feedback, E4_lifting. The elbow is the last
/// joint of the robot.
std::map<std::string, ScenarioScript> builtin_scenarios(const ArmModel& robot,
                                                        const ScenarioDefaults& d = {});

}  // namespace reflex_sim
