#include "reflex_sim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "reflex_sim/experiments.hpp"

namespace reflex_sim {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string join_lines(const std::vector<std::string>& errors) {
  std::ostringstream os;
  for (std::size_t i = 0; i < errors.size(); ++i) os << (i ? "\n" : "") << errors[i];
  return os.str();
}

// Collects type and presence errors instead of throwing on the first one.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(const std::string& path, const std::string& msg) {
    errors_.push_back(path + ": " + msg);
  }

  bool object(const json& j, const std::string& path) {
    if (!j.is_object()) {
      error(path, "expected an object");
      return false;
    }
    return true;
  }

  void only_keys(const json& j, const std::string& path, std::set<std::string> allowed) {
    if (!j.is_object()) return;
    for (const auto& [key, _] : j.items()) {
      if (!allowed.count(key)) error(path + "." + key, "unknown field");
    }
  }

  template <class T>
  void get(const json& j, const std::string& key, const std::string& path, T& out,
           bool required = false) {
    if (!j.is_object() || !j.contains(key)) {
      if (required) error(path + "." + key, "missing required field");
      return;
    }
    const json& v = j.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::invalid_argument("number");
      } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_integer()) throw std::invalid_argument("integer");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("boolean");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("string");
      }
      out = v.get<T>();
    } catch (const std::exception& e) {
      error(path + "." + key, std::string("wrong type (expected ") + e.what() + ")");
    }
  }

  void vector(const json& j, const std::string& key, const std::string& path,
              Eigen::VectorXd& out, bool required = false) {
    std::vector<double> v;
    if (!j.is_object() || !j.contains(key)) {
      if (required) error(path + "." + key, "missing required field");
      return;
    }
    const json& arr = j.at(key);
    if (!arr.is_array() ||
        !std::all_of(arr.begin(), arr.end(), [](const json& x) { return x.is_number(); })) {
      error(path + "." + key, "expected an array of numbers");
      return;
    }
    v = arr.get<std::vector<double>>();
    out = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

 private:
  std::vector<std::string>& errors_;
};

void check_header(Reader& rd, const json& j, const std::string& kind) {
  int version = 0;
  rd.get(j, "schema_version", "$", version, true);
  if (j.is_object() && j.contains("schema_version") && version != kSchemaVersion) {
    rd.error("$.schema_version", "unsupported version " + std::to_string(version));
  }
  std::string k;
  rd.get(j, "kind", "$", k, true);
  if (!k.empty() && k != kind) rd.error("$.kind", "expected \"" + kind + "\", got \"" + k + "\"");
}

ArmModel read_robot(Reader& rd, const json& j, const std::string& path) {
  ArmModel robot;
  if (!rd.object(j, path)) return robot;
  rd.only_keys(j, path, {"schema_version", "kind", "gravity", "joints", "muscles"});
  rd.get(j, "gravity", path, robot.gravity);
  if (!j.contains("joints") || !j["joints"].is_array()) {
    rd.error(path + ".joints", "expected an array");
  } else {
    for (std::size_t i = 0; i < j["joints"].size(); ++i) {
      const json& jj = j["joints"][i];
      const std::string p = path + ".joints[" + std::to_string(i) + "]";
      JointParams jp;
      if (rd.object(jj, p)) {
        rd.only_keys(jj, p,
                     {"name", "inertia", "damping", "theta_min", "theta_max", "limit_stiffness",
                      "limit_damping", "mu_static", "mu_kinetic", "stiction_band", "link_mass",
                      "link_length", "link_com", "gravity_plane"});
        rd.get(jj, "name", p, jp.name, true);
        rd.get(jj, "inertia", p, jp.inertia, true);
        rd.get(jj, "damping", p, jp.damping);
        rd.get(jj, "theta_min", p, jp.theta_min, true);
        rd.get(jj, "theta_max", p, jp.theta_max, true);
        rd.get(jj, "limit_stiffness", p, jp.limit_stiffness);
        rd.get(jj, "limit_damping", p, jp.limit_damping);
        rd.get(jj, "mu_static", p, jp.mu_static);
        rd.get(jj, "mu_kinetic", p, jp.mu_kinetic);
        rd.get(jj, "stiction_band", p, jp.stiction_band);
        rd.get(jj, "link_mass", p, jp.link_mass);
        rd.get(jj, "link_length", p, jp.link_length);
        rd.get(jj, "link_com", p, jp.link_com);
        rd.get(jj, "gravity_plane", p, jp.gravity_plane);
      }
      robot.joints.push_back(jp);
    }
  }
  const int n = robot.n_joints();
  std::vector<Eigen::VectorXd> columns;
  if (!j.contains("muscles") || !j["muscles"].is_array()) {
    rd.error(path + ".muscles", "expected an array");
  } else {
    for (std::size_t i = 0; i < j["muscles"].size(); ++i) {
      const json& mj = j["muscles"][i];
      const std::string p = path + ".muscles[" + std::to_string(i) + "]";
      MuscleParams mp;
      Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
      if (rd.object(mj, p)) {
        rd.only_keys(mj, p, {"name", "k", "l0", "f_max", "motor_vmax", "servo_gain", "preload",
                             "moment_arms"});
        rd.get(mj, "name", p, mp.name, true);
        rd.get(mj, "k", p, mp.k, true);
        rd.get(mj, "l0", p, mp.l0, true);
        rd.get(mj, "f_max", p, mp.f_max);
        rd.get(mj, "motor_vmax", p, mp.motor_vmax);
        rd.get(mj, "servo_gain", p, mp.servo_gain);
        rd.get(mj, "preload", p, mp.preload);
        rd.vector(mj, "moment_arms", p, col, true);
        if (col.size() != n) {
          rd.error(p + ".moment_arms", "needs one entry per joint (" + std::to_string(n) + ")");
          col = Eigen::VectorXd::Zero(n);
        }
      }
      robot.muscles.push_back(mp);
      columns.push_back(col);
    }
  }
  robot.moment_arms = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    robot.moment_arms.col(static_cast<Eigen::Index>(i)) = columns[i];
  }
  for (const auto& p : robot.problems()) rd.error(path, p);
  return robot;
}

ScenarioScript read_scenario(Reader& rd, const json& j, const std::string& path) {
  ScenarioScript s;
  if (!rd.object(j, path)) return s;
  rd.only_keys(j, path, {"name", "duration", "initial_posture", "events", "seed", "jitter",
                         "metrics", "reflex_enabled", "feedback_enabled"});
  rd.get(j, "name", path, s.name);
  rd.get(j, "duration", path, s.duration, true);
  rd.vector(j, "initial_posture", path, s.initial_posture, true);
  rd.get(j, "seed", path, s.seed);
  rd.get(j, "jitter", path, s.jitter);
  rd.get(j, "reflex_enabled", path, s.reflex_enabled);
  rd.get(j, "feedback_enabled", path, s.feedback_enabled);
  if (j.contains("events")) {
    if (!j["events"].is_array()) {
      rd.error(path + ".events", "expected an array");
    } else {
      for (std::size_t i = 0; i < j["events"].size(); ++i) {
        const json& ej = j["events"][i];
        const std::string p = path + ".events[" + std::to_string(i) + "]";
        if (!rd.object(ej, p)) continue;
        ScenarioEvent ev;
        rd.get(ej, "time", p, ev.time, true);
        if (ej.contains("impulse")) {
          ImpulseEvent imp;
          rd.get(ej["impulse"], "joint", p + ".impulse", imp.joint, true);
          rd.get(ej["impulse"], "d_omega", p + ".impulse", imp.d_omega, true);
          ev.kind = imp;
        } else if (ej.contains("payload")) {
          PayloadEvent pl;
          rd.get(ej["payload"], "mass", p + ".payload", pl.mass, true);
          ev.kind = pl;
        } else if (ej.contains("ref_trajectory")) {
          RefTrajectoryEvent tr;
          const json& tj = ej["ref_trajectory"];
          rd.get(tj, "times", p + ".ref_trajectory", tr.times, true);
          std::vector<std::vector<double>> lengths;
          rd.get(tj, "lengths", p + ".ref_trajectory", lengths, true);
          for (auto& l : lengths) {
            tr.lengths.push_back(
                Eigen::Map<Eigen::VectorXd>(l.data(), static_cast<Eigen::Index>(l.size())));
          }
          ev.kind = tr;
        } else {
          rd.error(p, "expected one of impulse, payload, ref_trajectory");
          continue;
        }
        s.events.push_back(std::move(ev));
      }
    }
  }
  if (j.contains("metrics")) {
    const json& mj = j["metrics"];
    const std::string p = path + ".metrics";
    if (rd.object(mj, p)) {
      auto& m = s.metrics;
      rd.get(mj, "joint", p, m.joint);
      auto opt = [&](const char* key, std::optional<double>& out) {
        double v = 0.0;
        if (mj.contains(key)) {
          rd.get(mj, key, p, v);
          out = v;
        }
      };
      opt("t_before", m.t_before);
      opt("t_after", m.t_after);
      opt("t_impact", m.t_impact);
      opt("theta_ref", m.theta_ref);
      opt("theta_thre", m.theta_thre);
      rd.get(mj, "drift_window", p, m.drift_window);
      rd.get(mj, "window_final", p, m.window_final);
      std::string side = "below";
      rd.get(mj, "side", p, side);
      if (side == "below") {
        m.side = ThresholdSide::Below;
      } else if (side == "above") {
        m.side = ThresholdSide::Above;
      } else {
        rd.error(p + ".side", "expected \"below\" or \"above\"");
      }
    }
  }
  return s;
}

ScenarioDefaults read_scenario_defaults(Reader& rd, const json& j, const std::string& path) {
  ScenarioDefaults d;
  json current = {
      {"e1_posture", d.e1_posture},           {"e1_first_impact", d.e1_first_impact},
      {"e1_impact_interval", d.e1_impact_interval}, {"e1_impulse", d.e1_impulse},
      {"e1_shoulder", d.e1_shoulder},         {"e2_posture", d.e2_posture},
      {"e2_first_impact", d.e2_first_impact}, {"e2_impact_interval", d.e2_impact_interval},
      {"e2_impulse", d.e2_impulse},           {"e2_settle", d.e2_settle},
      {"e3_posture", d.e3_posture},           {"e3_drop_time", d.e3_drop_time},
      {"e3_payload", d.e3_payload},           {"e3_drop_height", d.e3_drop_height},
      {"e3_theta_thre", d.e3_theta_thre},     {"e3_tail", d.e3_tail},
      {"e4_start_posture", d.e4_start_posture}, {"e4_end_posture", d.e4_end_posture},
      {"e4_ramp_start", d.e4_ramp_start},     {"e4_ramp_duration", d.e4_ramp_duration},
      {"e4_payload", d.e4_payload},           {"e4_payload_time", d.e4_payload_time},
      {"e4_tail", d.e4_tail},
      {"e4_shoulder", d.e4_shoulder},
  };
  if (!rd.object(j, path)) return d;
  for (const auto& [key, value] : j.items()) {
    if (!current.contains(key)) {
      rd.error(path + "." + key, "unknown field");
    } else if (!value.is_number()) {
      rd.error(path + "." + key, "wrong type (expected number)");
    } else {
      current[key] = value;
    }
  }
  auto set = [&](const char* key, double& field) { field = current[key].get<double>(); };
  set("e1_posture", d.e1_posture);
  set("e1_first_impact", d.e1_first_impact);
  set("e1_impact_interval", d.e1_impact_interval);
  set("e1_impulse", d.e1_impulse);
  set("e1_shoulder", d.e1_shoulder);
  set("e2_posture", d.e2_posture);
  set("e2_first_impact", d.e2_first_impact);
  set("e2_impact_interval", d.e2_impact_interval);
  set("e2_impulse", d.e2_impulse);
  set("e2_settle", d.e2_settle);
  set("e3_posture", d.e3_posture);
  set("e3_drop_time", d.e3_drop_time);
  set("e3_payload", d.e3_payload);
  set("e3_drop_height", d.e3_drop_height);
  set("e3_theta_thre", d.e3_theta_thre);
  set("e3_tail", d.e3_tail);
  set("e4_start_posture", d.e4_start_posture);
  set("e4_end_posture", d.e4_end_posture);
  set("e4_ramp_start", d.e4_ramp_start);
  set("e4_ramp_duration", d.e4_ramp_duration);
  set("e4_payload", d.e4_payload);
  set("e4_payload_time", d.e4_payload_time);
  set("e4_tail", d.e4_tail);
  set("e4_shoulder", d.e4_shoulder);
  return d;
}

std::vector<SweepSet> read_sweep_sets(Reader& rd, const json& arr, const std::string& path) {
  std::vector<SweepSet> sets;
  if (!arr.is_array() || arr.empty()) {
    rd.error(path, "expected a non-empty array of parameter sets");
    return sets;
  }
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    SweepSet s;
    if (!rd.object(arr[i], p)) continue;
    rd.only_keys(arr[i], p, {"label", "reflex", "dl_stretch", "dt_loose"});
    rd.get(arr[i], "label", p, s.label);
    rd.get(arr[i], "reflex", p, s.reflex_on);
    rd.get(arr[i], "dl_stretch", p, s.dl_stretch);
    rd.get(arr[i], "dt_loose", p, s.dt_loose);
    if (s.label.empty()) s.label = "set" + std::to_string(i);
    if (!(s.dl_stretch > 0.0)) rd.error(p + ".dl_stretch", "ReflexParams.dl_stretch must be positive");
    if (!(s.dt_loose > 0.0)) rd.error(p + ".dt_loose", "ReflexParams.dt_loose must be positive");
    sets.push_back(s);
  }
  return sets;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open file"});
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
}

ExperimentConfig read_experiment(Reader& rd, const json& j, const fs::path& base_dir) {
  ExperimentConfig cfg;
  rd.only_keys(j, "$", {"schema_version", "kind", "robot", "scenario", "scenario_defaults",
                        "reflex", "feedback", "timing", "sweep", "output_dir"});

  cfg.robot = default_robot();
  if (j.contains("robot")) {
    const json& rj = j["robot"];
    if (rj.is_string()) {
      const fs::path rp = base_dir / rj.get<std::string>();
      if (!fs::exists(rp)) {
        rd.error("$.robot", "file not found: " + rp.string());
      } else {
        const json file = read_json_file(rp);
        check_header(rd, file, "robot");
        cfg.robot = read_robot(rd, file, "robot");
      }
    } else {
      cfg.robot = read_robot(rd, rj, "$.robot");
    }
  }
  if (j.contains("scenario_defaults")) {
    cfg.scenario_defaults = read_scenario_defaults(rd, j["scenario_defaults"], "$.scenario_defaults");
  }

  const bool robot_ok = cfg.robot.problems().empty();
  std::string key = "custom";
  if (!j.contains("scenario")) {
    rd.error("$.scenario", "missing required field");
  } else if (j["scenario"].is_string()) {
    key = j["scenario"].get<std::string>();
    try {
      scenario_name_for(key);
      if (robot_ok) cfg = builtin_experiment(key, cfg.robot, cfg.scenario_defaults);
    } catch (const std::invalid_argument& e) {
      rd.error("$.scenario", e.what());
    }
  } else {
    cfg.scenario = read_scenario(rd, j["scenario"], "$.scenario");
    if (cfg.scenario.name.empty()) cfg.scenario.name = "custom";
  }
  cfg.key = key;
  if (robot_ok) cfg.reflex = default_reflex(cfg.robot);

  if (j.contains("reflex")) {
    const json& r = j["reflex"];
    if (rd.object(r, "$.reflex")) {
      rd.only_keys(r, "$.reflex", {"enabled", "c_stretch", "dl_stretch", "dt_loose", "groups"});
      rd.get(r, "enabled", "$.reflex", cfg.scenario.reflex_enabled);
      rd.get(r, "c_stretch", "$.reflex", cfg.reflex.c_stretch);
      rd.get(r, "dl_stretch", "$.reflex", cfg.reflex.dl_stretch);
      rd.get(r, "dt_loose", "$.reflex", cfg.reflex.dt_loose);
      rd.get(r, "groups", "$.reflex", cfg.reflex.groups);
    }
  }
  for (const auto& p : cfg.reflex.problems(cfg.robot.n_muscles())) rd.error("$.reflex", p);

  if (j.contains("feedback")) {
    const json& f = j["feedback"];
    if (rd.object(f, "$.feedback")) {
      rd.only_keys(f, "$.feedback", {"enabled", "alpha", "rate", "theta_ref"});
      FeedbackParams fb = cfg.feedback.value_or(FeedbackParams{});
      if (fb.theta_ref.size() == 0) fb.theta_ref = cfg.scenario.initial_posture;
      rd.get(f, "enabled", "$.feedback", cfg.scenario.feedback_enabled);
      rd.get(f, "alpha", "$.feedback", fb.alpha);
      rd.get(f, "rate", "$.feedback", fb.rate);
      rd.vector(f, "theta_ref", "$.feedback", fb.theta_ref);
      cfg.feedback = fb;
    }
  }
  if (cfg.scenario.feedback_enabled) {
    if (!cfg.feedback) {
      FeedbackParams fb;
      fb.theta_ref = cfg.scenario.initial_posture;
      cfg.feedback = fb;
    }
    for (const auto& p : cfg.feedback->problems(cfg.robot.n_joints())) rd.error("$.feedback", p);
  }

  if (j.contains("timing")) {
    const json& t = j["timing"];
    if (rd.object(t, "$.timing")) {
      rd.only_keys(t, "$.timing", {"physics_dt", "reflex_rate"});
      rd.get(t, "physics_dt", "$.timing", cfg.timing.physics_dt);
      rd.get(t, "reflex_rate", "$.timing", cfg.timing.reflex_rate);
      if (!(cfg.timing.physics_dt > 0.0 && cfg.timing.physics_dt <= 0.005)) {
        rd.error("$.timing.physics_dt", "must lie in (0, 0.005]");
      }
      if (!(cfg.timing.reflex_rate > 0.0)) rd.error("$.timing.reflex_rate", "must be positive");
    }
  }

  if (j.contains("sweep")) {
    const json& sw = j["sweep"];
    if (sw.is_string()) {
      const std::string name = sw.get<std::string>();
      if (name == "paper") {
        try {
          cfg.sweep = standard_sweep(key);
        } catch (const std::invalid_argument& e) {
          rd.error("$.sweep", e.what());
        }
      } else {
        const fs::path sp = base_dir / name;
        if (!fs::exists(sp)) {
          rd.error("$.sweep", "not \"paper\" and no such file: " + sp.string());
        } else {
          cfg.sweep = sweep_from_json(read_json_file(sp));
        }
      }
    } else {
      cfg.sweep = read_sweep_sets(rd, sw, "$.sweep");
    }
  }

  if (j.contains("output_dir")) rd.get(j, "output_dir", "$", cfg.output_dir);

  if (robot_ok) {
    for (const auto& p :
         cfg.scenario.problems(cfg.robot.n_joints(), cfg.robot.n_muscles())) {
      rd.error("$.scenario", p);
    }
  }
  return cfg;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_lines(errors)), errors_(std::move(errors)) {}

ArmModel default_robot() {
  ArmModel robot;
  robot.gravity = 9.81;

  JointParams shoulder;
  shoulder.name = "S-p";
  shoulder.inertia = 0.4;
  shoulder.damping = 2.0;
  shoulder.theta_min = -3.0;
  shoulder.theta_max = 1.0;
  shoulder.limit_stiffness = 500.0;
  shoulder.limit_damping = 5.0;
  shoulder.mu_static = 4.0;
  shoulder.mu_kinetic = 2.0;
  shoulder.stiction_band = 1e-3;
  shoulder.link_mass = 2.0;
  shoulder.link_length = 0.28;
  shoulder.link_com = 0.14;

  JointParams elbow;
  elbow.name = "E-p";
  elbow.inertia = 0.21;
  elbow.damping = 11.0;
  elbow.theta_min = -2.4;
  elbow.theta_max = 0.0;
  elbow.limit_stiffness = 500.0;
  elbow.limit_damping = 5.0;
  elbow.mu_static = 6.0;
  elbow.mu_kinetic = 4.5;
  elbow.stiction_band = 1e-3;
  elbow.link_mass = 1.9;
  elbow.link_length = 0.25;
  elbow.link_com = 0.14;

  robot.joints = {shoulder, elbow};

  auto muscle = [](const char* name, double l0, double preload) {
    MuscleParams mp;
    mp.name = name;
    mp.k = 0.3;
    mp.l0 = l0;
    mp.f_max = 400.0;
    mp.motor_vmax = 200.0;
    mp.servo_gain = 20.0;
    mp.preload = preload;
    return mp;
  };
  robot.muscles = {muscle("S-p flexor", 320.0, 13.0), muscle("S-p extensor", 320.0, 13.0),
                   muscle("E-p flexor", 300.0, 14.5), muscle("E-p extensor", 300.0, 14.5)};
  robot.moment_arms.resize(2, 4);
  robot.moment_arms << -50.0, 50.0, 0.0, 0.0,
                        0.0, 0.0, -60.0, 60.0;
  return robot;
}

ReflexParams default_reflex(const ArmModel& robot) {
  ReflexParams p;
  p.groups = groups_per_joint(robot.moment_arms);
  return p;
}

json robot_to_json(const ArmModel& robot) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "robot";
  j["gravity"] = robot.gravity;
  j["joints"] = json::array();
  for (const auto& jp : robot.joints) {
    j["joints"].push_back({{"name", jp.name},
                           {"inertia", jp.inertia},
                           {"damping", jp.damping},
                           {"theta_min", jp.theta_min},
                           {"theta_max", jp.theta_max},
                           {"limit_stiffness", jp.limit_stiffness},
                           {"limit_damping", jp.limit_damping},
                           {"mu_static", jp.mu_static},
                           {"mu_kinetic", jp.mu_kinetic},
                           {"stiction_band", jp.stiction_band},
                           {"link_mass", jp.link_mass},
                           {"link_length", jp.link_length},
                           {"link_com", jp.link_com},
                           {"gravity_plane", jp.gravity_plane}});
  }
  j["muscles"] = json::array();
  for (int i = 0; i < robot.n_muscles(); ++i) {
    const auto& mp = robot.muscles[i];
    std::vector<double> col(robot.n_joints());
    for (int r = 0; r < robot.n_joints(); ++r) col[r] = robot.moment_arms(r, i);
    j["muscles"].push_back({{"name", mp.name},
                            {"k", mp.k},
                            {"l0", mp.l0},
                            {"f_max", mp.f_max},
                            {"motor_vmax", mp.motor_vmax},
                            {"servo_gain", mp.servo_gain},
                            {"preload", mp.preload},
                            {"moment_arms", col}});
  }
  return j;
}

ArmModel robot_from_json(const json& j) {
  std::vector<std::string> errors;
  Reader rd(errors);
  check_header(rd, j, "robot");
  ArmModel robot = read_robot(rd, j, "$");
  if (!errors.empty()) throw ConfigError(errors);
  return robot;
}

ArmModel load_robot(const fs::path& path) { return robot_from_json(read_json_file(path)); }

ExperimentConfig experiment_from_json(const json& j, const fs::path& base_dir) {
  std::vector<std::string> errors;
  Reader rd(errors);
  check_header(rd, j, "experiment");
  ExperimentConfig cfg = read_experiment(rd, j, base_dir);
  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

ExperimentConfig load_experiment(const fs::path& path) {
  return experiment_from_json(read_json_file(path), path.parent_path());
}

std::vector<std::string> validate_config_json(const json& j, const fs::path& base_dir) {
  std::vector<std::string> errors;
  Reader rd(errors);
  if (!rd.object(j, "$")) return errors;
  const std::string kind = j.value("kind", "");
  if (kind == "robot") {
    check_header(rd, j, "robot");
    read_robot(rd, j, "$");
  } else if (kind == "experiment") {
    check_header(rd, j, "experiment");
    try {
      read_experiment(rd, j, base_dir);
    } catch (const ConfigError& e) {
      errors.insert(errors.end(), e.errors().begin(), e.errors().end());
    }
  } else if (kind == "sweep") {
    check_header(rd, j, "sweep");
    read_sweep_sets(rd, j.value("sets", json::array()), "$.sets");
  } else {
    rd.error("$.kind", "expected \"robot\", \"experiment\" or \"sweep\"");
  }
  return errors;
}

std::vector<std::string> validate_config(const fs::path& path) {
  try {
    return validate_config_json(read_json_file(path), path.parent_path());
  } catch (const ConfigError& e) {
    return e.errors();
  }
}

std::vector<SweepSet> sweep_from_json(const json& j) {
  std::vector<std::string> errors;
  Reader rd(errors);
  std::vector<SweepSet> sets;
  if (j.is_array()) {
    sets = read_sweep_sets(rd, j, "$");
  } else {
    check_header(rd, j, "sweep");
    sets = read_sweep_sets(rd, j.value("sets", json::array()), "$.sets");
  }
  if (!errors.empty()) throw ConfigError(errors);
  return sets;
}

json scenario_to_json(const ScenarioScript& s) {
  json j;
  j["name"] = s.name;
  j["duration"] = s.duration;
  j["initial_posture"] = std::vector<double>(s.initial_posture.data(),
                                             s.initial_posture.data() + s.initial_posture.size());
  j["seed"] = s.seed;
  j["jitter"] = s.jitter;
  j["reflex_enabled"] = s.reflex_enabled;
  j["feedback_enabled"] = s.feedback_enabled;
  j["events"] = json::array();
  for (const auto& ev : s.events) {
    json e{{"time", ev.time}};
    if (const auto* imp = std::get_if<ImpulseEvent>(&ev.kind)) {
      e["impulse"] = {{"joint", imp->joint}, {"d_omega", imp->d_omega}};
    } else if (const auto* pl = std::get_if<PayloadEvent>(&ev.kind)) {
      e["payload"] = {{"mass", pl->mass}};
    } else if (const auto* tr = std::get_if<RefTrajectoryEvent>(&ev.kind)) {
      json lengths = json::array();
      for (const auto& l : tr->lengths) {
        lengths.push_back(std::vector<double>(l.data(), l.data() + l.size()));
      }
      e["ref_trajectory"] = {{"times", tr->times}, {"lengths", lengths}};
    }
    j["events"].push_back(e);
  }
  json m{{"joint", s.metrics.joint},
         {"side", s.metrics.side == ThresholdSide::Below ? "below" : "above"},
         {"drift_window", s.metrics.drift_window},
         {"window_final", s.metrics.window_final}};
  if (s.metrics.t_before) m["t_before"] = *s.metrics.t_before;
  if (s.metrics.t_after) m["t_after"] = *s.metrics.t_after;
  if (s.metrics.t_impact) m["t_impact"] = *s.metrics.t_impact;
  if (s.metrics.theta_ref) m["theta_ref"] = *s.metrics.theta_ref;
  if (s.metrics.theta_thre) m["theta_thre"] = *s.metrics.theta_thre;
  j["metrics"] = m;
  return j;
}

ScenarioScript scenario_from_json(const json& j) {
  std::vector<std::string> errors;
  Reader rd(errors);
  ScenarioScript s = read_scenario(rd, j, "$");
  if (!errors.empty()) throw ConfigError(errors);
  return s;
}

}  // namespace reflex_sim
