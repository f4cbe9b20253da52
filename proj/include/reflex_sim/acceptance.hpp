#pragma once

#include <string>
#include <vector>

#include "reflex_sim/experiments.hpp"

namespace reflex_sim {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

/// Experiment-level acceptance checks. Each evaluate_* takes the runs of
/// standard_sweep(key) in order (reflex off first).
CriterionResult evaluate_e1(const std::vector<RunResult>& runs, const ExperimentConfig& cfg);
CriterionResult evaluate_e2(const std::vector<RunResult>& runs);
CriterionResult evaluate_e3(const std::vector<RunResult>& runs);
/// `frictionless` are the same sets rerun with every joint's Coulomb friction zeroed.
CriterionResult evaluate_e4(const std::vector<RunResult>& runs,
                            const std::vector<RunResult>& frictionless);

/// Runs whatever `key` needs and evaluates its criterion (e1..e4).
CriterionResult check_experiment(const std::string& key, const ExperimentConfig& cfg, int threads);

/// Two runs of every set of the experiment's standard sweep give identical CSV bytes.
CriterionResult check_determinism(const ExperimentConfig& cfg, int threads);

/// Per-impact maxima of limit_contact, one window per impulse event.
std::vector<double> limit_contact_per_impact(const TelemetryLog& log, const ScenarioScript& s);

/// Copy of the robot with mu_static = mu_kinetic = 0 on every joint.
ArmModel without_friction(ArmModel robot);

}  // namespace reflex_sim
