#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "reflex_sim/reflex_controller.hpp"

namespace reflex_sim {

/// Everything observable at one physics tick. Values are the state at time t,
/// before the step to t + dt is taken.
struct TickRecord {
  double t = 0.0;
  Eigen::VectorXd theta, omega, limit_force;              // per joint
  Eigen::VectorXd l_motor, l_ref_cmd, l_ref_eff;          // per muscle (mm)
  Eigen::VectorXd tension, dtension, offset;              // per muscle
  std::vector<std::uint8_t> flags;                        // MuscleFlag bits
  std::vector<std::uint8_t> fired;                        // 1 if a reflex fired this tick
  double payload = 0.0;
  bool reflex_tick = false;
  bool feedback_tick = false;
  int script_events = 0;
};

struct AppliedEvent {
  int index = 0;        // position in the (jittered, sorted) event list
  long tick = 0;
  double t_scheduled = 0.0;
  std::string kind;
};

struct TelemetryLog {
  std::string scenario;
  double dt = 0.001;
  std::vector<std::string> joint_names;
  std::vector<std::string> muscle_names;
  std::vector<TickRecord> ticks;
  std::vector<ReflexEvent> reflex_events;
  std::vector<AppliedEvent> script_events;

  int n_joints() const { return static_cast<int>(joint_names.size()); }
  int n_muscles() const { return static_cast<int>(muscle_names.size()); }
  double t_end() const { return ticks.empty() ? 0.0 : ticks.back().t; }
};

}  // namespace reflex_sim
