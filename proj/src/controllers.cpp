#include "reflex_sim/controllers.hpp"

#include <cmath>
#include <stdexcept>

namespace reflex_sim {

std::vector<std::string> FeedbackParams::problems(int n_joints) const {
  std::vector<std::string> out;
  if (!(alpha > 0.0 && alpha <= 1.0)) out.push_back("FeedbackParams.alpha must lie in (0, 1]");
  if (!(std::isfinite(rate) && rate > 0.0)) out.push_back("FeedbackParams.rate must be positive");
  if (theta_ref.size() != n_joints || !theta_ref.allFinite()) {
    out.push_back("FeedbackParams.theta_ref must hold one finite angle per joint");
  }
  return out;
}

void FeedbackParams::validate(int n_joints) const {
  if (const auto p = problems(n_joints); !p.empty()) throw std::invalid_argument(p.front());
}

FeedbackState FeedbackState::initial(const FeedbackParams& params) {
  return FeedbackState{params.theta_ref};
}

FeedbackState feedback_update(FeedbackState state, const Eigen::VectorXd& theta_meas,
                              const FeedbackParams& params) {
  if (theta_meas.size() != state.theta_virtual.size() ||
      params.theta_ref.size() != state.theta_virtual.size()) {
    throw std::invalid_argument("feedback_update: size mismatch");
  }
  state.theta_virtual += params.alpha * (params.theta_ref - theta_meas);
  return state;
}

Eigen::VectorXd refs_from_virtual(const Eigen::VectorXd& theta_virtual, const ArmModel& model) {
  return muscle_lengths_from_joints(theta_virtual, model);
}

Eigen::VectorXd hold_posture_refs(const Eigen::VectorXd& theta_target, const ArmModel& model) {
  return muscle_lengths_from_joints(theta_target, model);
}

}  // namespace reflex_sim
