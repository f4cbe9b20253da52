#pragma once

#include <optional>
#include <vector>

#include "reflex_sim/telemetry.hpp"

namespace reflex_sim {

/// Which side of the threshold angle counts as converged.
enum class ThresholdSide { Below, Above };

struct ConvResult {
  bool converged = false;
  double value = 0.0;  // s, meaningful only when converged

  /// Non-converged compares as +infinity.
  double as_number() const;
};

struct TensionStats {
  double peak = 0.0;
  double steady = 0.0;
  int steady_muscle = 0;
};

/// Analysis hints carried by a scenario; all optional except the joint.
struct MetricsContext {
  int joint = 0;
  std::optional<double> t_before;
  std::optional<double> t_after;
  std::optional<double> t_impact;
  std::optional<double> theta_ref;
  std::optional<double> theta_thre;
  ThresholdSide side = ThresholdSide::Below;
  double drift_window = 0.5;  // s
  double window_final = 1.0;  // s
};

struct MetricsReport {
  std::optional<double> drift;
  std::optional<double> max_deviation;
  std::optional<ConvResult> conv_time;
  std::vector<double> peak_tension_per_muscle;
  double peak_tension = 0.0;
  double steady_tension = 0.0;
  double limit_contact = 0.0;
  int reflex_event_count = 0;
};

/// |mean theta over [t_after, t_after + w) - mean theta over [t_before, t_before + w)|.
/// Throws std::out_of_range when a window leaves the log.
double drift(const TelemetryLog& log, int joint, double t_before, double t_after,
             double window = 0.5);

/// Smallest dt such that theta stays on the target side of theta_thre for all
/// t >= t_impact + dt. Non-converged if the last logged tick is still outside.
ConvResult conv_time(const TelemetryLog& log, int joint, double t_impact, double theta_thre,
                     ThresholdSide target_side = ThresholdSide::Below);

/// Peak over all ticks and muscles; steady is the final-window mean of the
/// muscle with the largest final-window mean.
TensionStats tension_stats(const TelemetryLog& log, double window_final = 1.0);

/// max |theta - theta_ref| over ticks with t >= t_from.
double max_deviation(const TelemetryLog& log, int joint, double theta_ref, double t_from = 0.0);

/// Largest logged limit torque over [t_from, t_to) on any joint.
double limit_contact(const TelemetryLog& log, double t_from, double t_to);

MetricsReport compute_report(const TelemetryLog& log, const MetricsContext& ctx);

}  // namespace reflex_sim
