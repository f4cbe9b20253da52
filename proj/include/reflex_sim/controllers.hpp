#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "reflex_sim/arm_dynamics.hpp"

namespace reflex_sim {

/// Joint-angle feedback on a virtual reference angle.
struct FeedbackParams {
  double alpha = 0.3;       // dimensionless gain in (0, 1]
  double rate = 5.0;        // Hz
  Eigen::VectorXd theta_ref;

  std::vector<std::string> problems(int n_joints) const;
  void validate(int n_joints) const;
};

struct FeedbackState {
  Eigen::VectorXd theta_virtual;

  /// theta_virtual starts at theta_ref.
  static FeedbackState initial(const FeedbackParams& params);
};

/// theta_virtual += alpha * (theta_ref - theta_meas).
FeedbackState feedback_update(FeedbackState state, const Eigen::VectorXd& theta_meas,
                              const FeedbackParams& params);

/// Commanded reference lengths h(theta_virtual).
Eigen::VectorXd refs_from_virtual(const Eigen::VectorXd& theta_virtual, const ArmModel& model);

/// Open-loop posture: evaluated once, held for the rest of the run.
Eigen::VectorXd hold_posture_refs(const Eigen::VectorXd& theta_target, const ArmModel& model);

}  // namespace reflex_sim
