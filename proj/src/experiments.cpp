#include "reflex_sim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>

namespace reflex_sim {

std::string scenario_name_for(const std::string& key) {
  if (key == "e1") return "E1_protective";
  if (key == "e2") return "E2_postural";
  if (key == "e3") return "E3_feedback";
  if (key == "e4") return "E4_lifting";
  throw std::invalid_argument("unknown experiment '" + key + "' (expected e1, e2, e3 or e4)");
}

ExperimentConfig builtin_experiment(const std::string& key, const ArmModel& robot,
                                    const ScenarioDefaults& defaults) {
  ExperimentConfig cfg;
  cfg.key = key;
  cfg.robot = robot;
  cfg.scenario_defaults = defaults;
  cfg.scenario = builtin_scenarios(robot, defaults).at(scenario_name_for(key));
  cfg.reflex = default_reflex(robot);
  if (cfg.scenario.feedback_enabled) {
    FeedbackParams fb;
    fb.theta_ref = cfg.scenario.initial_posture;
    cfg.feedback = fb;
  }
  cfg.output_dir = "out/" + key;
  return cfg;
}

ExperimentConfig builtin_experiment(const std::string& key) {
  return builtin_experiment(key, default_robot());
}

std::vector<SweepSet> standard_sweep(const std::string& key) {
  if (key == "e1") return {{"off", false, 10.0, 0.5}, {"on", true, 10.0, 0.5}};
  if (key == "e2") {
    return {{"off", false, 10.0, 0.5},
            {"dl10_dt0.5", true, 10.0, 0.5},
            {"dl10_dt1.0", true, 10.0, 1.0},
            {"dl20_dt1.0", true, 20.0, 1.0}};
  }
  if (key == "e3" || key == "e4") {
    return {{"off", false, 10.0, 0.5},
            {"dt1.0", true, 10.0, 1.0},
            {"dt3.0", true, 10.0, 3.0},
            {"dt5.0", true, 10.0, 5.0}};
  }
  throw std::invalid_argument("no standard sweep for experiment '" + key + "'");
}

RunResult run_one(const ExperimentConfig& cfg, const SweepSet& set) {
  ScenarioScript scenario = cfg.scenario;
  scenario.reflex_enabled = set.reflex_on;
  ReflexParams reflex = cfg.reflex;
  reflex.dl_stretch = set.dl_stretch;
  reflex.dt_loose = set.dt_loose;
  RunResult r;
  r.set = set;
  r.log = run(scenario, cfg.robot, reflex, cfg.feedback, cfg.timing);
  r.report = compute_report(r.log, scenario.metrics);
  return r;
}

std::vector<RunResult> run_sweep(const ExperimentConfig& cfg, const std::vector<SweepSet>& sets,
                                 int threads) {
  std::vector<RunResult> results(sets.size());
  std::vector<std::exception_ptr> errors(sets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sets.size(); i = next++) {
      try {
        results[i] = run_one(cfg, sets[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_workers = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(1, sets.size())));
  std::vector<std::jthread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

int sweep_threads_from_env() {
  if (const char* env = std::getenv("REFLEX_SIM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace reflex_sim
