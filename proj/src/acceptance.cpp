#include "reflex_sim/acceptance.hpp"

#include <algorithm>
#include <sstream>

#include "reflex_sim/telemetry_io.hpp"

namespace reflex_sim {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

std::vector<double> limit_contact_per_impact(const TelemetryLog& log, const ScenarioScript& s) {
  std::vector<double> times;
  for (const auto& ev : s.events) {
    if (std::holds_alternative<ImpulseEvent>(ev.kind)) times.push_back(ev.time);
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double end = i + 1 < times.size() ? times[i + 1] : log.t_end() + log.dt;
    out.push_back(limit_contact(log, times[i], end));
  }
  return out;
}

ArmModel without_friction(ArmModel robot) {
  for (auto& j : robot.joints) {
    j.mu_static = 0.0;
    j.mu_kinetic = 0.0;
  }
  return robot;
}

CriterionResult evaluate_e1(const std::vector<RunResult>& runs, const ExperimentConfig& cfg) {
  CriterionResult r{1, "E1 protective behavior", false, ""};
  const auto off = limit_contact_per_impact(runs.at(0).log, cfg.scenario);
  const auto on = limit_contact_per_impact(runs.at(1).log, cfg.scenario);
  const auto hits_off = std::count_if(off.begin(), off.end(), [](double v) { return v > 0.0; });
  const auto hits_on = std::count_if(on.begin(), on.end(), [](double v) { return v > 0.0; });
  r.passed = off.size() == 7 && hits_off >= 3 && hits_on == 0;
  r.detail = "impacts reaching the limit: off " + std::to_string(hits_off) + "/" +
             std::to_string(off.size()) + " (need >= 3), on " + std::to_string(hits_on) + "/" +
             std::to_string(on.size()) + " (need 0); max contact off " +
             fmt(*std::max_element(off.begin(), off.end())) + " N m";
  return r;
}

CriterionResult evaluate_e2(const std::vector<RunResult>& runs) {
  CriterionResult r{2, "E2 postural drift", true, ""};
  const double off = runs.at(0).report.drift.value();
  r.detail = "drift off " + fmt(off);
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const double on = runs[i].report.drift.value();
    const bool ok = on <= 0.5 * off;
    r.passed = r.passed && ok;
    r.detail += "; " + runs[i].set.label + " " + fmt(on) + " (ratio " + fmt(on / off) + ")";
  }
  r.detail += "; bound ratio <= 0.5";
  return r;
}

CriterionResult evaluate_e3(const std::vector<RunResult>& runs) {
  CriterionResult r{3, "E3 convergence ordering", false, ""};
  auto conv = [&](std::size_t i) { return runs.at(i).report.conv_time.value().as_number(); };
  auto dev = [&](std::size_t i) { return runs.at(i).report.max_deviation.value(); };
  const double off = conv(0);
  const double short_loose = conv(1);
  const double long_loose = conv(3);
  bool dev_ok = true;
  for (std::size_t i = 1; i < runs.size(); ++i) dev_ok = dev_ok && dev(i) <= dev(0);
  r.passed = long_loose < off && short_loose > off && dev_ok;
  std::ostringstream os;
  os << "conv off " << fmt(off) << " s, dt1.0 " << fmt(short_loose) << " s, dt3.0 "
     << fmt(conv(2)) << " s, dt5.0 " << fmt(long_loose) << " s; max dev off " << fmt(dev(0));
  for (std::size_t i = 1; i < runs.size(); ++i) os << ", " << runs[i].set.label << " " << fmt(dev(i));
  r.detail = os.str();
  return r;
}

CriterionResult evaluate_e4(const std::vector<RunResult>& runs,
                            const std::vector<RunResult>& frictionless) {
  CriterionResult r{4, "E4 lifting tensions", true, ""};
  const auto& off = runs.at(0).report;
  const auto& off0 = frictionless.at(0).report;
  std::ostringstream os;
  os << "off peak " << fmt(off.peak_tension) << " steady " << fmt(off.steady_tension)
     << "; frictionless off steady " << fmt(off0.steady_tension);
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const auto& on = runs[i].report;
    const auto& on0 = frictionless.at(i).report;
    const double gap = std::abs(on0.steady_tension - off0.steady_tension) / off0.steady_tension;
    const bool ok = on.peak_tension >= off.peak_tension &&
                    on.steady_tension <= 0.8 * off.steady_tension && gap < 0.05;
    r.passed = r.passed && ok;
    os << "; " << runs[i].set.label << " peak " << fmt(on.peak_tension) << " steady "
       << fmt(on.steady_tension) << " (ratio " << fmt(on.steady_tension / off.steady_tension)
       << "), frictionless gap " << fmt(100.0 * gap) << "%";
  }
  r.detail = os.str();
  return r;
}

CriterionResult check_experiment(const std::string& key, const ExperimentConfig& cfg,
                                 int threads) {
  const auto sets = standard_sweep(key);
  const auto runs = run_sweep(cfg, sets, threads);
  if (key == "e1") return evaluate_e1(runs, cfg);
  if (key == "e2") return evaluate_e2(runs);
  if (key == "e3") return evaluate_e3(runs);
  ExperimentConfig smooth = cfg;
  smooth.robot = without_friction(cfg.robot);
  return evaluate_e4(runs, run_sweep(smooth, sets, threads));
}

CriterionResult check_determinism(const ExperimentConfig& cfg, int threads) {
  CriterionResult r{7, "Determinism (" + cfg.key + ")", true, ""};
  const auto sets = standard_sweep(cfg.key);
  const auto first = run_sweep(cfg, sets, threads);
  const auto second = run_sweep(cfg, sets, threads);
  std::size_t bytes = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::string a = to_csv(first[i].log);
    const std::string b = to_csv(second[i].log);
    bytes += a.size();
    if (a != b) {
      r.passed = false;
      r.detail += "mismatch in " + sets[i].label + "; ";
    }
  }
  r.detail += std::to_string(sets.size()) + " runs, " + std::to_string(bytes) + " CSV bytes compared";
  return r;
}

}  // namespace reflex_sim
