#include "reflex_sim/reflex_controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace reflex_sim {

std::vector<std::string> ReflexParams::problems(int n_muscles) const {
  std::vector<std::string> out;
  if (!(std::isfinite(c_stretch) && c_stretch > 0.0)) {
    out.push_back("ReflexParams.c_stretch must be positive");
  }
  if (!(std::isfinite(dl_stretch) && dl_stretch > 0.0)) {
    out.push_back("ReflexParams.dl_stretch must be positive");
  }
  if (!(std::isfinite(dt_loose) && dt_loose > 0.0)) {
    out.push_back("ReflexParams.dt_loose must be positive");
  }
  std::vector<int> seen(std::max(0, n_muscles), 0);
  for (const auto& g : groups) {
    for (int i : g) {
      if (i < 0 || i >= n_muscles) {
        out.push_back("ReflexParams.groups: muscle index " + std::to_string(i) + " out of range");
      } else {
        ++seen[i];
      }
    }
  }
  for (int i = 0; i < n_muscles; ++i) {
    if (seen[i] != 1) {
      out.push_back("ReflexParams.groups: not a partition (muscle " + std::to_string(i) +
                    " appears " + std::to_string(seen[i]) + " times)");
    }
  }
  return out;
}

void ReflexParams::validate(int n_muscles) const {
  if (const auto p = problems(n_muscles); !p.empty()) throw std::invalid_argument(p.front());
}

std::vector<std::vector<int>> groups_per_joint(const Eigen::MatrixXd& moment_arms) {
  std::vector<std::vector<int>> groups(moment_arms.rows());
  for (int i = 0; i < moment_arms.cols(); ++i) {
    int joint = 0;
    for (int j = 0; j < moment_arms.rows(); ++j) {
      if (moment_arms(j, i) != 0.0) {
        joint = j;
        break;
      }
    }
    groups[joint].push_back(i);
  }
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

ReflexState ReflexState::initial(const ReflexParams& params, int n_muscles) {
  params.validate(n_muscles);
  ReflexState s;
  s.muscles.assign(n_muscles, MuscleReflex{});
  s.inhibited_until.assign(params.groups.size(), -std::numeric_limits<double>::infinity());
  s.group_of.assign(n_muscles, 0);
  for (std::size_t g = 0; g < params.groups.size(); ++g) {
    for (int i : params.groups[g]) s.group_of[i] = static_cast<int>(g);
  }
  return s;
}

bool detect(double f_prev, double f_now, const ReflexParams& params) {
  return f_now - f_prev > params.c_stretch;
}

ReflexUpdate update(ReflexState state, std::span<const double> tensions_prev,
                    std::span<const double> tensions_now, double t, double dt_tick,
                    const ReflexParams& params) {
  const std::size_t m = state.muscles.size();
  if (tensions_prev.size() != m || tensions_now.size() != m) {
    throw std::invalid_argument("reflex update: tension vectors do not match muscle count");
  }
  if (state.last_t && !(t > *state.last_t)) {
    throw ContractViolation("reflex update: time must increase monotonically");
  }
  state.last_t = t;
  const double eps = 1e-6 * dt_tick;

  // Ramp and retire loosening muscles first; the half-open window lets a
  // muscle whose ramp ends now fire again on this tick.
  for (auto& mr : state.muscles) {
    if (mr.phase != ReflexPhase::Loosening) continue;
    const double elapsed = t - mr.t_fired;
    if (elapsed >= params.dt_loose - eps) {
      mr.phase = ReflexPhase::Idle;
      mr.offset = 0.0;
    } else {
      mr.offset = params.dl_stretch * (1.0 - elapsed / params.dt_loose);
    }
  }

  // Eligibility is judged against the pre-tick inhibition windows.
  const std::vector<double> inhibited_before = state.inhibited_until;
  ReflexUpdate out;
  for (std::size_t i = 0; i < m; ++i) {
    auto& mr = state.muscles[i];
    const int g = state.group_of[i];
    const bool inhibited = t < inhibited_before[g] - eps;
    if (mr.phase != ReflexPhase::Idle || inhibited) continue;
    if (!detect(tensions_prev[i], tensions_now[i], params)) continue;
    mr.phase = ReflexPhase::Loosening;
    mr.offset = params.dl_stretch;
    mr.t_fired = t;
    state.inhibited_until[g] = t + params.dt_loose;
    out.events.push_back({static_cast<int>(i), t});
  }

  out.offsets.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.offsets[i] = state.muscles[i].offset;
  out.state = std::move(state);
  return out;
}

Eigen::VectorXd effective_ref(const Eigen::VectorXd& l_ref_commanded,
                              std::span<const double> offsets) {
  if (static_cast<std::size_t>(l_ref_commanded.size()) != offsets.size()) {
    throw std::invalid_argument("effective_ref: size mismatch");
  }
  Eigen::VectorXd out = l_ref_commanded;
  for (std::size_t i = 0; i < offsets.size(); ++i) out[static_cast<Eigen::Index>(i)] -= offsets[i];
  return out;
}

}  // namespace reflex_sim
