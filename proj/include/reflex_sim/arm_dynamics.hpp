#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

#include "reflex_sim/musculotendon.hpp"

namespace reflex_sim {

/// One revolute joint plus the link distal to it. Links with gravity_plane set
/// rotate in the vertical plane and form a planar serial chain for gravity.
struct JointParams {
  std::string name;
  double inertia = 0.05;          // kg m^2
  double damping = 0.1;           // N m s / rad
  double theta_min = -2.4;        // rad
  double theta_max = 0.0;         // rad
  double limit_stiffness = 500.0; // N m / rad
  double limit_damping = 5.0;     // N m s / rad
  double mu_static = 0.0;         // N m
  double mu_kinetic = 0.0;        // N m
  double stiction_band = 1e-3;    // rad/s
  double link_mass = 0.0;         // kg
  double link_length = 0.0;       // m
  double link_com = 0.0;          // m, from the joint axis
  bool gravity_plane = true;
};

/// Joint geometry and dynamics of an n-joint arm driven by m muscles.
///
/// moment_arms is n x m (mm/rad). Muscle lengths follow l = l0 - G^T theta and
/// tensions map to joint torques through tau = G f / 1000, the transpose of
/// the same Jacobian, so a muscle always pulls its joint in the direction that
/// shortens it.
struct ArmModel {
  std::vector<JointParams> joints;
  std::vector<MuscleParams> muscles;
  Eigen::MatrixXd moment_arms;
  double gravity = 9.81;          // m/s^2, zero disables gravity

  int n_joints() const { return static_cast<int>(joints.size()); }
  int n_muscles() const { return static_cast<int>(muscles.size()); }

  std::vector<std::string> problems() const;
  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const;
};

struct ArmState {
  Eigen::VectorXd theta;        // rad
  Eigen::VectorXd omega;        // rad/s
  double payload_mass = 0.0;    // kg at the end of the last in-plane link
  Eigen::VectorXd limit_force;  // |limit torque| applied in the last step (N m)

  static ArmState at_rest(const Eigen::VectorXd& theta);
};

/// Raised when the integrator produces a non-finite state.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long tick, const std::string& what)
      : std::runtime_error(what), tick_(tick) {}
  long tick() const { return tick_; }

 private:
  long tick_;
};

/// The map h: l = l0 - G^T theta.
Eigen::VectorXd muscle_lengths_from_joints(const Eigen::VectorXd& theta, const ArmModel& model);

/// Geometric path lengths seen by the elastic elements, h(theta) + preload.
Eigen::VectorXd muscle_path_lengths(const Eigen::VectorXd& theta, const ArmModel& model);

/// tau = G f / 1000. Throws std::invalid_argument on negative tension.
Eigen::VectorXd joint_torques(const Eigen::VectorXd& tensions, const ArmModel& model);

Eigen::VectorXd gravity_torques(const ArmState& state, const ArmModel& model);
Eigen::VectorXd limit_torques(const ArmState& state, const ArmModel& model);
Eigen::VectorXd effective_inertia(const ArmState& state, const ArmModel& model);
double kinetic_energy(const ArmState& state, const ArmModel& model);

/// Distance from each joint axis to the payload along the in-plane chain (m).
Eigen::VectorXd payload_reach(const ArmModel& model);

/// One semi-implicit Euler step with Karnopp stiction, Coulomb kinetic
/// friction, viscous damping, gravity and one-sided limit spring-dampers.
/// `tick` only labels DivergenceError.
ArmState step_dynamics(ArmState state, const Eigen::VectorXd& tau_muscle,
                       const Eigen::VectorXd& tau_ext, double dt, const ArmModel& model,
                       long tick = -1);

ArmState apply_impulse(ArmState state, int joint, double d_omega);

}  // namespace reflex_sim
