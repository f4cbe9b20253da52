#pragma once

#include <string>
#include <vector>

#include "reflex_sim/config.hpp"
#include "reflex_sim/metrics.hpp"
#include "reflex_sim/scenario.hpp"

namespace reflex_sim {

/// Maps e1..e4 to the built-in scenario names; throws std::invalid_argument otherwise.
std::string scenario_name_for(const std::string& key);

/// Built-in experiment with the shipped robot and default reflex/feedback settings.
ExperimentConfig builtin_experiment(const std::string& key, const ArmModel& robot,
                                    const ScenarioDefaults& defaults = {});
ExperimentConfig builtin_experiment(const std::string& key);

/// The parameter sets compared for each experiment, reflex-off first.
///   e1: off, (10, 0.5)
///   e2: off, (10, 0.5), (10, 1.0), (20, 1.0)
///   e3, e4: off, (10, 1.0), (10, 3.0), (10, 5.0)
std::vector<SweepSet> standard_sweep(const std::string& key);

struct RunResult {
  SweepSet set;
  TelemetryLog log;
  MetricsReport report;
};

RunResult run_one(const ExperimentConfig& cfg, const SweepSet& set);

/// Fans runs out over `threads` workers; results keep the order of `sets`.
std::vector<RunResult> run_sweep(const ExperimentConfig& cfg, const std::vector<SweepSet>& sets,
                                 int threads);

/// REFLEX_SIM_THREADS if set and positive, else hardware concurrency.
int sweep_threads_from_env();

}  // namespace reflex_sim
