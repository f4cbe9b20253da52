#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "reflex_sim/arm_dynamics.hpp"
#include "reflex_sim/controllers.hpp"
#include "reflex_sim/reflex_controller.hpp"
#include "reflex_sim/scenario.hpp"

namespace reflex_sim {

inline constexpr int kSchemaVersion = 1;

/// Aggregated configuration problems, one "field.path: message" per entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Desk-scale two-joint arm (S-p, E-p) with a flexor/extensor pair per joint.
ArmModel default_robot();
ReflexParams default_reflex(const ArmModel& robot);

nlohmann::json robot_to_json(const ArmModel& robot);
ArmModel robot_from_json(const nlohmann::json& j);
ArmModel load_robot(const std::filesystem::path& path);

struct SweepSet {
  std::string label;
  bool reflex_on = true;
  double dl_stretch = 10.0;
  double dt_loose = 0.5;
};

/// One fully resolved experiment: what `run` needs plus output settings.
struct ExperimentConfig {
  std::string key;  // e1..e4 or custom
  ArmModel robot;
  ScenarioScript scenario;
  ScenarioDefaults scenario_defaults;
  ReflexParams reflex;
  std::optional<FeedbackParams> feedback;
  SimTiming timing;
  std::vector<SweepSet> sweep;  // empty outside sweep mode
  std::string output_dir = "out";
};

/// Parses an experiment config file; relative robot paths resolve against the
/// config's directory. Throws ConfigError listing every problem found.
ExperimentConfig load_experiment(const std::filesystem::path& path);
ExperimentConfig experiment_from_json(const nlohmann::json& j,
                                      const std::filesystem::path& base_dir);

/// Schema and invariant check without running physics. Accepts robot and
/// experiment configs (dispatching on "kind"); an empty list means valid.
std::vector<std::string> validate_config(const std::filesystem::path& path);
std::vector<std::string> validate_config_json(const nlohmann::json& j,
                                              const std::filesystem::path& base_dir);

nlohmann::json scenario_to_json(const ScenarioScript& s);
ScenarioScript scenario_from_json(const nlohmann::json& j);

std::vector<SweepSet> sweep_from_json(const nlohmann::json& j);

}  // namespace reflex_sim
