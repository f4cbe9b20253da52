#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "reflex_sim/metrics.hpp"
#include "reflex_sim/telemetry.hpp"

namespace reflex_sim {

/// Frozen CSV column order, one row per physics tick:
///   t,
///   theta_<j>, omega_<j>, limit_force_<j>                      for each joint j
///   l_motor_<i>, l_ref_cmd_<i>, l_ref_eff_<i>, f_<i>, df_<i>,
///   offset_<i>, flags_<i>, fired_<i>                           for each muscle i
///   payload, reflex_tick, feedback_tick, script_events
std::vector<std::string> csv_header(int n_joints, int n_muscles);

/// Doubles are written in shortest round-trip form, so read_csv(write_csv(x))
/// reproduces every logged value exactly.
void write_csv(std::ostream& out, const TelemetryLog& log);
std::string to_csv(const TelemetryLog& log);

/// Rebuilds a log (reflex events from the fired_* columns). Joint and muscle
/// names become their indices. Throws std::runtime_error on malformed input.
TelemetryLog read_csv(std::istream& in);

using KeyValues = std::map<std::string, std::string>;

/// `key = value` lines: the context needed to recompute, then the metrics.
std::string format_metrics(const MetricsReport& report, const MetricsContext& ctx,
                           const KeyValues& extra = {});
KeyValues parse_key_values(std::istream& in);
MetricsContext context_from_key_values(const KeyValues& kv);

std::string format_double(double v);

}  // namespace reflex_sim
