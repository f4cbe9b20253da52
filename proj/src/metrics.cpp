#include "reflex_sim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace reflex_sim {

namespace {

// Tick index of time t on the log's grid.
long index_at(const TelemetryLog& log, double t) {
  const double t0 = log.ticks.front().t;
  return std::lround((t - t0) / log.dt);
}

double window_mean(const TelemetryLog& log, int joint, double t_start, double window) {
  if (log.ticks.empty()) throw std::out_of_range("drift: empty log");
  const long first = index_at(log, t_start);
  const long count = std::lround(window / log.dt);
  if (first < 0 || count <= 0 || first + count > static_cast<long>(log.ticks.size())) {
    throw std::out_of_range("drift: window outside log");
  }
  double sum = 0.0;
  for (long i = first; i < first + count; ++i) sum += log.ticks[i].theta[joint];
  return sum / static_cast<double>(count);
}

void require_joint(const TelemetryLog& log, int joint) {
  if (joint < 0 || joint >= log.n_joints()) throw std::out_of_range("metrics: joint index");
}

}  // namespace

double ConvResult::as_number() const {
  return converged ? value : std::numeric_limits<double>::infinity();
}

double drift(const TelemetryLog& log, int joint, double t_before, double t_after,
             double window) {
  require_joint(log, joint);
  return std::abs(window_mean(log, joint, t_after, window) -
                  window_mean(log, joint, t_before, window));
}

ConvResult conv_time(const TelemetryLog& log, int joint, double t_impact, double theta_thre,
                     ThresholdSide target_side) {
  require_joint(log, joint);
  if (log.ticks.empty()) return {};
  const long start = std::max(0L, index_at(log, t_impact));
  const long n = static_cast<long>(log.ticks.size());
  auto outside = [&](long i) {
    const double th = log.ticks[i].theta[joint];
    return target_side == ThresholdSide::Below ? th > theta_thre : th < theta_thre;
  };
  long last_violation = -1;
  for (long i = n - 1; i >= start; --i) {
    if (outside(i)) {
      last_violation = i;
      break;
    }
  }
  if (last_violation < 0) return {true, 0.0};
  if (last_violation == n - 1) return {false, 0.0};
  return {true, log.ticks[last_violation + 1].t - t_impact};
}

TensionStats tension_stats(const TelemetryLog& log, double window_final) {
  TensionStats out;
  if (log.ticks.empty()) return out;
  const int m = log.n_muscles();
  for (const auto& tick : log.ticks) out.peak = std::max(out.peak, tick.tension.maxCoeff());

  const long n = static_cast<long>(log.ticks.size());
  const long count = std::clamp(std::lround(window_final / log.dt), 1L, n);
  std::vector<double> means(m, 0.0);
  for (long i = n - count; i < n; ++i) {
    for (int k = 0; k < m; ++k) means[k] += log.ticks[i].tension[k];
  }
  for (auto& v : means) v /= static_cast<double>(count);
  const auto it = std::max_element(means.begin(), means.end());
  out.steady = *it;
  out.steady_muscle = static_cast<int>(it - means.begin());
  return out;
}

double max_deviation(const TelemetryLog& log, int joint, double theta_ref, double t_from) {
  require_joint(log, joint);
  double worst = 0.0;
  if (log.ticks.empty()) return worst;
  const long start = std::max(0L, index_at(log, t_from));
  for (long i = start; i < static_cast<long>(log.ticks.size()); ++i) {
    worst = std::max(worst, std::abs(log.ticks[i].theta[joint] - theta_ref));
  }
  return worst;
}

double limit_contact(const TelemetryLog& log, double t_from, double t_to) {
  double worst = 0.0;
  if (log.ticks.empty()) return worst;
  const long n = static_cast<long>(log.ticks.size());
  const long first = std::clamp(index_at(log, t_from), 0L, n);
  const long last = std::clamp(index_at(log, t_to), 0L, n);
  for (long i = first; i < last; ++i) worst = std::max(worst, log.ticks[i].limit_force.maxCoeff());
  return worst;
}

MetricsReport compute_report(const TelemetryLog& log, const MetricsContext& ctx) {
  MetricsReport r;
  if (ctx.t_before && ctx.t_after) {
    r.drift = drift(log, ctx.joint, *ctx.t_before, *ctx.t_after, ctx.drift_window);
  }
  if (ctx.theta_ref) {
    r.max_deviation = max_deviation(log, ctx.joint, *ctx.theta_ref, ctx.t_impact.value_or(0.0));
  }
  if (ctx.t_impact && ctx.theta_thre) {
    r.conv_time = conv_time(log, ctx.joint, *ctx.t_impact, *ctx.theta_thre, ctx.side);
  }
  r.peak_tension_per_muscle.assign(log.n_muscles(), 0.0);
  for (const auto& tick : log.ticks) {
    for (int k = 0; k < log.n_muscles(); ++k) {
      r.peak_tension_per_muscle[k] = std::max(r.peak_tension_per_muscle[k], tick.tension[k]);
    }
  }
  const TensionStats ts = tension_stats(log, ctx.window_final);
  r.peak_tension = ts.peak;
  r.steady_tension = ts.steady;
  r.limit_contact = limit_contact(log, log.ticks.empty() ? 0.0 : log.ticks.front().t,
                                  log.t_end() + log.dt);
  r.reflex_event_count = static_cast<int>(log.reflex_events.size());
  return r;
}

}  // namespace reflex_sim
