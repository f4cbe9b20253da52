// reflex-sim: run the built-in stretch reflex experiments, parameter sweeps
// and acceptance checks; validate config files; recompute metrics from logs.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "reflex_sim/acceptance.hpp"
#include "reflex_sim/config.hpp"
#include "reflex_sim/experiments.hpp"
#include "reflex_sim/telemetry_io.hpp"

namespace fs = std::filesystem;
using namespace reflex_sim;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfigError = 2, kDivergence = 3, kCheckFailed = 4 };

std::optional<bool> parse_switch(const std::string& v) {
  if (v.empty()) return std::nullopt;
  return v == "on";
}

void write_run(const fs::path& dir, const RunResult& r, const ScenarioScript& scenario) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "log.csv");
    write_csv(out, r.log);
  }
  std::ofstream out(dir / "metrics.txt");
  out << format_metrics(r.report, scenario.metrics,
                        {{"scenario", scenario.name},
                         {"label", r.set.label},
                         {"reflex", r.set.reflex_on ? "on" : "off"},
                         {"dl_stretch", format_double(r.set.dl_stretch)},
                         {"dt_loose", format_double(r.set.dt_loose)}});
}

std::string opt_str(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

void write_comparison(const fs::path& dir, const std::vector<RunResult>& runs) {
  std::ofstream out(dir / "comparison.csv");
  out << "label,reflex,dl_stretch,dt_loose,drift,max_deviation,conv_time,peak_tension,"
         "steady_tension,limit_contact,reflex_event_count\n";
  for (const auto& r : runs) {
    std::string conv;
    if (r.report.conv_time) {
      conv = r.report.conv_time->converged ? format_double(r.report.conv_time->value)
                                           : "non-converged";
    }
    out << r.set.label << ',' << (r.set.reflex_on ? "on" : "off") << ','
        << format_double(r.set.dl_stretch) << ',' << format_double(r.set.dt_loose) << ','
        << opt_str(r.report.drift) << ',' << opt_str(r.report.max_deviation) << ',' << conv
        << ',' << format_double(r.report.peak_tension) << ','
        << format_double(r.report.steady_tension) << ','
        << format_double(r.report.limit_contact) << ',' << r.report.reflex_event_count << '\n';
  }
}

void print_summary(const RunResult& r) {
  std::cout << r.set.label << ": reflex " << (r.set.reflex_on ? "on" : "off");
  if (r.report.drift) std::cout << ", drift " << *r.report.drift;
  if (r.report.max_deviation) std::cout << ", max_dev " << *r.report.max_deviation;
  if (r.report.conv_time) {
    std::cout << ", conv "
              << (r.report.conv_time->converged ? std::to_string(r.report.conv_time->value)
                                                : std::string("non-converged"));
  }
  std::cout << ", peak " << r.report.peak_tension << " N, steady " << r.report.steady_tension
            << " N, limit " << r.report.limit_contact << " N m, events "
            << r.report.reflex_event_count << '\n';
}

struct RunOptions {
  std::string name;
  std::string reflex;
  std::string feedback;
  std::string sweep;
  std::string out;
  std::string config;
  std::string robot;
  std::optional<std::uint64_t> seed;
  bool check = false;
};

int cmd_run(const RunOptions& o) {
  ExperimentConfig cfg;
  if (!o.config.empty()) {
    cfg = load_experiment(o.config);
    if (o.name != "custom" && o.name != cfg.key) {
      std::cerr << "config describes experiment '" << cfg.key << "', not '" << o.name << "'\n";
      return kUsage;
    }
  } else if (o.name == "custom") {
    std::cerr << "run custom needs --config FILE\n";
    return kUsage;
  } else {
    const ArmModel robot = o.robot.empty() ? default_robot() : load_robot(o.robot);
    cfg = builtin_experiment(o.name, robot);
  }
  if (auto v = parse_switch(o.reflex)) cfg.scenario.reflex_enabled = *v;
  if (auto v = parse_switch(o.feedback)) {
    cfg.scenario.feedback_enabled = *v;
    if (*v && !cfg.feedback) {
      FeedbackParams fb;
      fb.theta_ref = cfg.scenario.initial_posture;
      cfg.feedback = fb;
    }
  }
  if (o.seed) cfg.scenario.seed = *o.seed;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.sweep.empty()) {
    cfg.sweep = o.sweep == "paper" ? standard_sweep(cfg.key) : sweep_from_json([&] {
      std::ifstream in(o.sweep);
      if (!in) throw ConfigError({o.sweep + ": cannot open sweep file"});
      return nlohmann::json::parse(in);
    }());
  }

  const int threads = sweep_threads_from_env();
  const fs::path out_dir = cfg.output_dir;
  if (cfg.sweep.empty()) {
    const SweepSet single{"run", cfg.scenario.reflex_enabled, cfg.reflex.dl_stretch,
                          cfg.reflex.dt_loose};
    const RunResult r = run_one(cfg, single);
    write_run(out_dir, r, cfg.scenario);
    print_summary(r);
  } else {
    const auto runs = run_sweep(cfg, cfg.sweep, threads);
    for (const auto& r : runs) {
      write_run(out_dir / r.set.label, r, cfg.scenario);
      print_summary(r);
    }
    write_comparison(out_dir, runs);
  }
  std::cout << "wrote " << out_dir.string() << '\n';

  if (o.check) {
    if (cfg.key == "custom") {
      std::cerr << "--check applies to e1..e4 only\n";
      return kUsage;
    }
    const CriterionResult c = check_experiment(cfg.key, cfg, threads);
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.title << ": " << c.detail
              << '\n';
    if (!c.passed) return kCheckFailed;
  }
  return kOk;
}

int cmd_validate(const std::string& path) {
  const auto errors = validate_config(path);
  if (errors.empty()) {
    std::cout << path << ": ok\n";
    return kOk;
  }
  for (const auto& e : errors) std::cerr << path << ": " << e << '\n';
  return kConfigError;
}

int cmd_metrics(const std::string& csv_path, std::string context_path) {
  std::ifstream in(csv_path);
  if (!in) {
    std::cerr << csv_path << ": cannot open\n";
    return kUsage;
  }
  const TelemetryLog log = read_csv(in);
  MetricsContext ctx;
  if (context_path.empty()) {
    const fs::path sibling = fs::path(csv_path).parent_path() / "metrics.txt";
    if (fs::exists(sibling)) context_path = sibling.string();
  }
  if (!context_path.empty()) {
    std::ifstream kv_in(context_path);
    ctx = context_from_key_values(parse_key_values(kv_in));
  }
  std::cout << format_metrics(compute_report(log, ctx), ctx);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tendon-driven arm simulator with stretch reflex experiments"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "Run a built-in experiment (e1..e4) or a custom config");
  run_cmd->add_option("experiment", ro.name, "e1, e2, e3, e4 or custom")
      ->required()
      ->check(CLI::IsMember({"e1", "e2", "e3", "e4", "custom"}));
  run_cmd->add_option("--reflex", ro.reflex, "Override reflex on/off")
      ->check(CLI::IsMember({"on", "off"}));
  run_cmd->add_option("--feedback", ro.feedback, "Override feedback on/off")
      ->check(CLI::IsMember({"on", "off"}));
  run_cmd->add_option("--sweep", ro.sweep, "\"paper\" or a sweep JSON file");
  run_cmd->add_flag("--check", ro.check, "Evaluate the experiment's acceptance criterion");
  run_cmd->add_option("--out", ro.out, "Output directory");
  run_cmd->add_option("--seed", ro.seed, "Seed for event jitter");
  run_cmd->add_option("--config", ro.config, "Experiment config file");
  run_cmd->add_option("--robot", ro.robot, "Robot config file (built-in experiments)");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a config file without running it");
  validate_cmd->add_option("config", validate_path)->required();

  std::string csv_path, context_path;
  auto* metrics_cmd = app.add_subcommand("metrics", "Recompute the metrics summary of a CSV log");
  metrics_cmd->add_option("log", csv_path)->required();
  metrics_cmd->add_option("--context", context_path,
                          "key = value file with the analysis context (default: sibling metrics.txt)");

  auto* dump_cmd = app.add_subcommand("dump-robot", "Print the built-in robot config as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(ro);
    if (*validate_cmd) return cmd_validate(validate_path);
    if (*metrics_cmd) return cmd_metrics(csv_path, context_path);
    if (*dump_cmd) {
      std::cout << robot_to_json(default_robot()).dump(2) << '\n';
      return kOk;
    }
  } catch (const ConfigError& e) {
    for (const auto& msg : e.errors()) std::cerr << "config error: " << msg << '\n';
    return kConfigError;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
