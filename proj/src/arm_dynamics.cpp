#include "reflex_sim/arm_dynamics.hpp"

#include <cmath>
#include <sstream>

namespace reflex_sim {

namespace {

double sign(double x) { return (x > 0.0) - (x < 0.0); }

void require_size(const Eigen::VectorXd& v, int n, const char* what) {
  if (v.size() != n) {
    std::ostringstream os;
    os << what << ": expected " << n << " entries, got " << v.size();
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

std::vector<std::string> ArmModel::problems() const {
  std::vector<std::string> out;
  const int n = n_joints();
  const int m = n_muscles();
  if (n == 0) out.push_back("ArmModel.joints: at least one joint required");
  if (m == 0) out.push_back("ArmModel.muscles: at least one muscle required");
  if (moment_arms.rows() != n || moment_arms.cols() != m) {
    out.push_back("ArmModel.moment_arms: must be n_joints x n_muscles");
  } else if (!moment_arms.allFinite()) {
    out.push_back("ArmModel.moment_arms: non-finite entry");
  }
  if (!std::isfinite(gravity) || gravity < 0.0) out.push_back("ArmModel.gravity: must be >= 0");
  for (const auto& j : joints) {
    auto require = [&](bool ok, const char* field) {
      if (!ok) {
        out.push_back("JointParams." + std::string(field) + " out of range for joint '" +
                      j.name + "'");
      }
    };
    require(std::isfinite(j.inertia) && j.inertia > 0.0, "inertia");
    require(j.damping >= 0.0, "damping");
    require(j.theta_min < j.theta_max, "theta_min");
    require(j.limit_stiffness >= 0.0, "limit_stiffness");
    require(j.limit_damping >= 0.0, "limit_damping");
    require(j.mu_kinetic >= 0.0, "mu_kinetic");
    require(j.mu_static >= j.mu_kinetic, "mu_static");
    require(j.stiction_band >= 0.0, "stiction_band");
    require(j.link_mass >= 0.0, "link_mass");
    require(j.link_length >= 0.0, "link_length");
    require(j.link_com >= 0.0, "link_com");
  }
  for (const auto& mp : muscles) {
    const auto p = mp.problems();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

void ArmModel::validate() const {
  if (const auto p = problems(); !p.empty()) throw std::invalid_argument(p.front());
}

ArmState ArmState::at_rest(const Eigen::VectorXd& theta) {
  ArmState s;
  s.theta = theta;
  s.omega = Eigen::VectorXd::Zero(theta.size());
  s.limit_force = Eigen::VectorXd::Zero(theta.size());
  return s;
}

Eigen::VectorXd muscle_lengths_from_joints(const Eigen::VectorXd& theta, const ArmModel& model) {
  require_size(theta, model.n_joints(), "muscle_lengths_from_joints");
  if (!theta.allFinite()) throw std::invalid_argument("muscle_lengths_from_joints: non-finite angle");
  Eigen::VectorXd l0(model.n_muscles());
  for (int i = 0; i < model.n_muscles(); ++i) l0[i] = model.muscles[i].l0;
  return l0 - model.moment_arms.transpose() * theta;
}

Eigen::VectorXd muscle_path_lengths(const Eigen::VectorXd& theta, const ArmModel& model) {
  Eigen::VectorXd l = muscle_lengths_from_joints(theta, model);
  for (int i = 0; i < model.n_muscles(); ++i) l[i] += model.muscles[i].preload;
  return l;
}

Eigen::VectorXd joint_torques(const Eigen::VectorXd& tensions, const ArmModel& model) {
  require_size(tensions, model.n_muscles(), "joint_torques");
  if ((tensions.array() < 0.0).any()) {
    throw std::invalid_argument("joint_torques: negative tension");
  }
  return model.moment_arms * tensions / 1000.0;
}

Eigen::VectorXd payload_reach(const ArmModel& model) {
  const int n = model.n_joints();
  Eigen::VectorXd reach = Eigen::VectorXd::Zero(n);
  double acc = 0.0;
  for (int j = n - 1; j >= 0; --j) {
    if (!model.joints[j].gravity_plane) continue;
    acc += model.joints[j].link_length;
    reach[j] = acc;
  }
  return reach;
}

Eigen::VectorXd gravity_torques(const ArmState& state, const ArmModel& model) {
  const int n = model.n_joints();
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(n);
  if (model.gravity == 0.0) return tau;

  // Horizontal positions of each in-plane joint axis and link COM, plus the payload.
  std::vector<double> axis_x(n, 0.0), com_x(n, 0.0);
  double phi = 0.0, x = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto& jp = model.joints[j];
    if (!jp.gravity_plane) continue;
    phi += state.theta[j];
    axis_x[j] = x;
    com_x[j] = x + jp.link_com * std::sin(phi);
    x += jp.link_length * std::sin(phi);
  }
  const double payload_x = x;

  for (int j = 0; j < n; ++j) {
    if (!model.joints[j].gravity_plane) continue;
    double moment = state.payload_mass * (payload_x - axis_x[j]);
    for (int k = j; k < n; ++k) {
      if (!model.joints[k].gravity_plane) continue;
      moment += model.joints[k].link_mass * (com_x[k] - axis_x[j]);
    }
    tau[j] = -model.gravity * moment;
  }
  return tau;
}

Eigen::VectorXd limit_torques(const ArmState& state, const ArmModel& model) {
  const int n = model.n_joints();
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const auto& jp = model.joints[j];
    const double th = state.theta[j];
    const double w = state.omega[j];
    if (th > jp.theta_max) {
      tau[j] = std::min(0.0, -jp.limit_stiffness * (th - jp.theta_max) - jp.limit_damping * w);
    } else if (th < jp.theta_min) {
      tau[j] = std::max(0.0, -jp.limit_stiffness * (th - jp.theta_min) - jp.limit_damping * w);
    }
  }
  return tau;
}

Eigen::VectorXd effective_inertia(const ArmState& state, const ArmModel& model) {
  const Eigen::VectorXd reach = payload_reach(model);
  Eigen::VectorXd inertia(model.n_joints());
  for (int j = 0; j < model.n_joints(); ++j) {
    inertia[j] = model.joints[j].inertia + state.payload_mass * reach[j] * reach[j];
  }
  return inertia;
}

double kinetic_energy(const ArmState& state, const ArmModel& model) {
  const Eigen::VectorXd inertia = effective_inertia(state, model);
  return 0.5 * (inertia.array() * state.omega.array().square()).sum();
}

ArmState step_dynamics(ArmState state, const Eigen::VectorXd& tau_muscle,
                       const Eigen::VectorXd& tau_ext, double dt, const ArmModel& model,
                       long tick) {
  const int n = model.n_joints();
  require_size(state.theta, n, "step_dynamics theta");
  require_size(state.omega, n, "step_dynamics omega");
  require_size(tau_muscle, n, "step_dynamics tau_muscle");
  require_size(tau_ext, n, "step_dynamics tau_ext");
  if (!(dt > 0.0 && dt <= 0.005)) {
    throw std::invalid_argument("step_dynamics: dt must lie in (0, 5 ms]");
  }

  const Eigen::VectorXd inertia = effective_inertia(state, model);
  const Eigen::VectorXd tau_g = gravity_torques(state, model);
  const Eigen::VectorXd tau_lim = limit_torques(state, model);

  for (int j = 0; j < n; ++j) {
    const auto& jp = model.joints[j];
    const double w = state.omega[j];
    const double tau_free =
        tau_muscle[j] + tau_ext[j] + tau_g[j] + tau_lim[j] - jp.damping * w;

    double w_next;
    if (std::abs(w) < jp.stiction_band) {
      if (std::abs(tau_free) <= jp.mu_static) {
        w_next = 0.0;
      } else {
        w_next = w + dt * (tau_free - jp.mu_static * sign(tau_free)) / inertia[j];
      }
    } else {
      w_next = w + dt * (tau_free - jp.mu_kinetic * sign(w)) / inertia[j];
      // Kinetic friction never reverses the motion on its own.
      if (w_next * w < 0.0 && std::abs(tau_free) <= jp.mu_static) w_next = 0.0;
    }
    state.omega[j] = w_next;
    state.theta[j] += dt * w_next;
  }
  state.limit_force = tau_lim.cwiseAbs();

  if (!state.theta.allFinite() || !state.omega.allFinite()) {
    std::ostringstream os;
    os << "integration diverged at tick " << tick;
    throw DivergenceError(tick, os.str());
  }
  return state;
}

ArmState apply_impulse(ArmState state, int joint, double d_omega) {
  if (joint < 0 || joint >= state.omega.size()) {
    throw std::invalid_argument("apply_impulse: joint index out of range");
  }
  state.omega[joint] += d_omega;
  return state;
}

}  // namespace reflex_sim
