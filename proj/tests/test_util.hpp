#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "reflex_sim/reflex_controller.hpp"
#include "reflex_sim/telemetry.hpp"

namespace test_util {

using reflex_sim::TelemetryLog;

// One-joint, one-muscle log with theta(t) and f(t) sampled every dt over [0, t_end].
inline TelemetryLog synthetic_log(double t_end, double dt, const std::function<double(double)>& theta,
                                  const std::function<double(double)>& tension = [](double) { return 1.0; }) {
  TelemetryLog log;
  log.scenario = "synthetic";
  log.dt = dt;
  log.joint_names = {"0"};
  log.muscle_names = {"0"};
  const long n = std::lround(t_end / dt) + 1;
  for (long i = 0; i < n; ++i) {
    reflex_sim::TickRecord r;
    r.t = static_cast<double>(i) * dt;
    r.theta = Eigen::VectorXd::Constant(1, theta(r.t));
    r.omega = Eigen::VectorXd::Zero(1);
    r.limit_force = Eigen::VectorXd::Zero(1);
    r.l_motor = r.l_ref_cmd = r.l_ref_eff = Eigen::VectorXd::Constant(1, 300.0);
    r.tension = Eigen::VectorXd::Constant(1, tension(r.t));
    r.dtension = Eigen::VectorXd::Zero(1);
    r.offset = Eigen::VectorXd::Zero(1);
    r.flags = {0};
    r.fired = {0};
    log.ticks.push_back(r);
  }
  return log;
}

// Brute-force reflex replay on an integer tick grid. Nothing is carried
// between ticks except the list of past events: at tick k a muscle fires iff
// its tension rise beats the threshold and no muscle of its group fired on a
// tick in (k - w, k). Offsets are rebuilt from the last own event each tick.
struct OracleResult {
  std::vector<reflex_sim::ReflexEvent> events;
  std::vector<std::vector<double>> offsets;  // [tick][muscle]
};

inline OracleResult brute_force_reflex(const std::vector<std::vector<double>>& f,  // [tick][muscle]
                                       const std::vector<int>& group_of, double c_stretch,
                                       double dl, int w_ticks, double dt_tick) {
  OracleResult out;
  const std::size_t m = group_of.size();
  std::vector<std::pair<long, int>> fired;  // (tick, muscle)
  for (std::size_t k = 1; k < f.size(); ++k) {
    const long kk = static_cast<long>(k);
    std::vector<int> now;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(f[k][i] - f[k - 1][i] > c_stretch)) continue;
      bool blocked = false;
      for (const auto& [tk, mi] : fired) {
        if (group_of[mi] == group_of[i] && tk < kk && kk - tk < w_ticks) blocked = true;
      }
      if (!blocked) now.push_back(static_cast<int>(i));
    }
    for (int i : now) {
      fired.emplace_back(kk, i);
      out.events.push_back({i, static_cast<double>(kk) * dt_tick});
    }
    std::vector<double> off(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [tk, mi] : fired) {
        if (mi != static_cast<int>(i)) continue;
        const long age = kk - tk;
        if (age < w_ticks) off[i] = dl * (1.0 - static_cast<double>(age) / w_ticks);
      }
    }
    out.offsets.push_back(off);
  }
  return out;
}

struct RandomStream {
  std::vector<std::vector<double>> f;
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of;
  double c_stretch = 15.0;
  double dl = 10.0;
  int w_ticks = 50;
};

// Random walk tensions with occasional jumps around the threshold, random
// muscle count, group partition and loosening window.
inline RandomStream random_stream(std::uint64_t seed, int n_ticks = 400) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> m_dist(1, 6);
  RandomStream s;
  const int m = m_dist(rng);
  std::uniform_int_distribution<int> g_dist(1, m);
  const int n_groups = g_dist(rng);
  s.groups.assign(n_groups, {});
  s.group_of.assign(m, 0);
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int i = 0; i < m; ++i) {
    const int g = i < n_groups ? i : std::uniform_int_distribution<int>(0, n_groups - 1)(rng);
    s.groups[g].push_back(perm[i]);
    s.group_of[perm[i]] = g;
  }
  s.c_stretch = std::uniform_real_distribution<double>(5.0, 30.0)(rng);
  s.dl = std::uniform_real_distribution<double>(1.0, 25.0)(rng);
  s.w_ticks = std::uniform_int_distribution<int>(1, 120)(rng);

  std::normal_distribution<double> step(0.0, s.c_stretch * 0.4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cur(m);
  for (auto& v : cur) v = std::uniform_real_distribution<double>(0.0, 200.0)(rng);
  for (int k = 0; k < n_ticks; ++k) {
    for (int i = 0; i < m; ++i) {
      double d = step(rng);
      const double r = u(rng);
      if (r < 0.04) d = s.c_stretch * (1.0 + u(rng));  // clear trigger
      else if (r < 0.06) d = s.c_stretch;              // exactly at threshold, must not fire
      cur[i] = std::max(0.0, cur[i] + d);
    }
    s.f.push_back(cur);
  }
  return s;
}

// Same stream through the production controller at 100 Hz.
inline OracleResult replay_production(const RandomStream& s, double dt_tick = 0.01) {
  reflex_sim::ReflexParams p;
  p.c_stretch = s.c_stretch;
  p.dl_stretch = s.dl;
  p.dt_loose = s.w_ticks * dt_tick;
  p.groups = s.groups;
  auto state = reflex_sim::ReflexState::initial(p, static_cast<int>(s.group_of.size()));
  OracleResult out;
  for (std::size_t k = 1; k < s.f.size(); ++k) {
    auto u = reflex_sim::update(std::move(state), s.f[k - 1], s.f[k],
                                static_cast<double>(k) * dt_tick, dt_tick, p);
    out.events.insert(out.events.end(), u.events.begin(), u.events.end());
    out.offsets.push_back(u.offsets);
    state = std::move(u.state);
  }
  return out;
}

// Events must match exactly; ramp values to rounding of t = k * dt.
inline bool same_replay(const OracleResult& a, const OracleResult& b, double tol = 1e-9) {
  if (a.events.size() != b.events.size() || a.offsets.size() != b.offsets.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    if (a.events[i].muscle != b.events[i].muscle) return false;
    if (std::abs(a.events[i].t - b.events[i].t) > 1e-12) return false;
  }
  for (std::size_t k = 0; k < a.offsets.size(); ++k) {
    for (std::size_t i = 0; i < a.offsets[k].size(); ++i) {
      if (std::abs(a.offsets[k][i] - b.offsets[k][i]) > tol) return false;
    }
  }
  return true;
}

}  // namespace test_util
