#include "reflex_sim/telemetry_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace reflex_sim {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("bad number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> csv_header(int n_joints, int n_muscles) {
  std::vector<std::string> h{"t"};
  for (int j = 0; j < n_joints; ++j) {
    for (const char* c : {"theta_", "omega_", "limit_force_"}) h.push_back(c + std::to_string(j));
  }
  for (int i = 0; i < n_muscles; ++i) {
    for (const char* c : {"l_motor_", "l_ref_cmd_", "l_ref_eff_", "f_", "df_", "offset_",
                          "flags_", "fired_"}) {
      h.push_back(c + std::to_string(i));
    }
  }
  for (const char* c : {"payload", "reflex_tick", "feedback_tick", "script_events"}) h.push_back(c);
  return h;
}

void write_csv(std::ostream& out, const TelemetryLog& log) {
  const int n = log.n_joints();
  const int m = log.n_muscles();
  const auto header = csv_header(n, m);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  std::string row;
  for (const auto& r : log.ticks) {
    row.clear();
    row += format_double(r.t);
    auto put = [&row](double v) {
      row += ',';
      row += format_double(v);
    };
    for (int j = 0; j < n; ++j) {
      put(r.theta[j]);
      put(r.omega[j]);
      put(r.limit_force[j]);
    }
    for (int i = 0; i < m; ++i) {
      put(r.l_motor[i]);
      put(r.l_ref_cmd[i]);
      put(r.l_ref_eff[i]);
      put(r.tension[i]);
      put(r.dtension[i]);
      put(r.offset[i]);
      row += ',' + std::to_string(r.flags[i]);
      row += ',' + std::to_string(r.fired[i]);
    }
    put(r.payload);
    row += r.reflex_tick ? ",1" : ",0";
    row += r.feedback_tick ? ",1" : ",0";
    row += ',' + std::to_string(r.script_events);
    out << row << '\n';
  }
}

std::string to_csv(const TelemetryLog& log) {
  std::ostringstream os;
  write_csv(os, log);
  return os.str();
}

TelemetryLog read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty input");
  const auto header = split(trim(line), ',');
  int n = 0, m = 0;
  for (const auto& h : header) {
    if (h.rfind("theta_", 0) == 0) ++n;
    if (h.rfind("l_motor_", 0) == 0) ++m;
  }
  if (header != csv_header(n, m)) throw std::runtime_error("read_csv: unexpected header");

  TelemetryLog log;
  for (int j = 0; j < n; ++j) log.joint_names.push_back(std::to_string(j));
  for (int i = 0; i < m; ++i) log.muscle_names.push_back(std::to_string(i));
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw std::runtime_error("read_csv: wrong column count on line " + std::to_string(line_no));
    }
    std::size_t c = 0;
    auto next = [&] { return parse_double(cells[c++]); };
    TickRecord r;
    r.t = next();
    r.theta.resize(n);
    r.omega.resize(n);
    r.limit_force.resize(n);
    for (int j = 0; j < n; ++j) {
      r.theta[j] = next();
      r.omega[j] = next();
      r.limit_force[j] = next();
    }
    for (auto* v : {&r.l_motor, &r.l_ref_cmd, &r.l_ref_eff, &r.tension, &r.dtension, &r.offset}) {
      v->resize(m);
    }
    r.flags.resize(m);
    r.fired.resize(m);
    for (int i = 0; i < m; ++i) {
      r.l_motor[i] = next();
      r.l_ref_cmd[i] = next();
      r.l_ref_eff[i] = next();
      r.tension[i] = next();
      r.dtension[i] = next();
      r.offset[i] = next();
      r.flags[i] = static_cast<std::uint8_t>(next());
      r.fired[i] = static_cast<std::uint8_t>(next());
      if (r.fired[i]) log.reflex_events.push_back({i, r.t});
    }
    r.payload = next();
    r.reflex_tick = next() != 0.0;
    r.feedback_tick = next() != 0.0;
    r.script_events = static_cast<int>(next());
    log.ticks.push_back(std::move(r));
  }
  if (log.ticks.size() >= 2) {
    log.dt = (log.ticks.back().t - log.ticks.front().t) /
             static_cast<double>(log.ticks.size() - 1);
  }
  return log;
}

std::string format_metrics(const MetricsReport& report, const MetricsContext& ctx,
                           const KeyValues& extra) {
  std::ostringstream os;
  for (const auto& [k, v] : extra) os << k << " = " << v << '\n';
  os << "joint = " << ctx.joint << '\n';
  auto opt = [&os](const char* key, const std::optional<double>& v) {
    if (v) os << key << " = " << format_double(*v) << '\n';
  };
  opt("t_before", ctx.t_before);
  opt("t_after", ctx.t_after);
  opt("t_impact", ctx.t_impact);
  opt("theta_ref", ctx.theta_ref);
  opt("theta_thre", ctx.theta_thre);
  os << "side = " << (ctx.side == ThresholdSide::Below ? "below" : "above") << '\n';
  os << "drift_window = " << format_double(ctx.drift_window) << '\n';
  os << "window_final = " << format_double(ctx.window_final) << '\n';

  opt("drift", report.drift);
  opt("max_deviation", report.max_deviation);
  if (report.conv_time) {
    os << "conv_time = "
       << (report.conv_time->converged ? format_double(report.conv_time->value)
                                       : std::string("non-converged"))
       << '\n';
  }
  os << "peak_tension = " << format_double(report.peak_tension) << '\n';
  for (std::size_t i = 0; i < report.peak_tension_per_muscle.size(); ++i) {
    os << "peak_tension_" << i << " = " << format_double(report.peak_tension_per_muscle[i])
       << '\n';
  }
  os << "steady_tension = " << format_double(report.steady_tension) << '\n';
  os << "limit_contact = " << format_double(report.limit_contact) << '\n';
  os << "reflex_event_count = " << report.reflex_event_count << '\n';
  return os.str();
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line).empty() || trim(line)[0] == '#') continue;
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

MetricsContext context_from_key_values(const KeyValues& kv) {
  MetricsContext ctx;
  auto num = [&kv](const char* key) -> std::optional<double> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return parse_double(it->second);
  };
  if (auto v = num("joint")) ctx.joint = static_cast<int>(*v);
  ctx.t_before = num("t_before");
  ctx.t_after = num("t_after");
  ctx.t_impact = num("t_impact");
  ctx.theta_ref = num("theta_ref");
  ctx.theta_thre = num("theta_thre");
  if (auto it = kv.find("side"); it != kv.end() && it->second == "above") {
    ctx.side = ThresholdSide::Above;
  }
  if (auto v = num("drift_window")) ctx.drift_window = *v;
  if (auto v = num("window_final")) ctx.window_final = *v;
  return ctx;
}

}  // namespace reflex_sim
