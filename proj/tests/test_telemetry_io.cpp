#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "reflex_sim/experiments.hpp"
#include "reflex_sim/telemetry_io.hpp"

using namespace reflex_sim;

TEST_SUITE("telemetry_io") {

TEST_CASE("header layout") {
  const auto h = csv_header(1, 1);
  const std::vector<std::string> expect = {
      "t", "theta_0", "omega_0", "limit_force_0",
      "l_motor_0", "l_ref_cmd_0", "l_ref_eff_0", "f_0", "df_0", "offset_0", "flags_0", "fired_0",
      "payload", "reflex_tick", "feedback_tick", "script_events"};
  CHECK(h == expect);
  CHECK(csv_header(2, 4).size() == 1 + 3 * 2 + 8 * 4 + 4);
}

TEST_CASE("shortest round-trip doubles") {
  for (double v : {0.1, -1.57, 1e-300, 400.0, 1.0 / 3.0, std::nextafter(1.0, 2.0)}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("CSV round trip is lossless and metrics recompute exactly") {
  const ExperimentConfig cfg = builtin_experiment("e3");
  RunResult r = run_one(cfg, SweepSet{"on", true, 10.0, 1.0});
  const std::string csv = to_csv(r.log);
  std::istringstream in(csv);
  const TelemetryLog back = read_csv(in);

  REQUIRE(back.ticks.size() == r.log.ticks.size());
  CHECK(to_csv(back) == csv);
  CHECK(back.reflex_events == r.log.reflex_events);
  for (std::size_t k = 0; k < back.ticks.size(); k += 997) {
    CHECK(back.ticks[k].theta == r.log.ticks[k].theta);
    CHECK(back.ticks[k].tension == r.log.ticks[k].tension);
    CHECK(back.ticks[k].flags == r.log.ticks[k].flags);
  }

  const std::string stored = format_metrics(r.report, cfg.scenario.metrics);
  std::istringstream kv_in(stored);
  const MetricsContext ctx = context_from_key_values(parse_key_values(kv_in));
  CHECK(format_metrics(compute_report(back, ctx), ctx) == stored);
}

TEST_CASE("key-value parsing") {
  std::istringstream in("# comment\na = 1\n  b=two words  \n\nc = -0.5\n");
  const KeyValues kv = parse_key_values(in);
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "two words");
  CHECK(kv.at("c") == "-0.5");
  CHECK(kv.size() == 3);
}

TEST_CASE("malformed CSV is rejected") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), std::runtime_error);
  std::istringstream bad_header("t,foo\n0,1\n");
  CHECK_THROWS_AS(read_csv(bad_header), std::runtime_error);

  std::string header;
  for (const auto& h : csv_header(1, 1)) header += (header.empty() ? "" : ",") + h;
  std::istringstream short_row(header + "\n0,1,2\n");
  CHECK_THROWS_AS(read_csv(short_row), std::runtime_error);
  std::istringstream junk(header + "\n0,x,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
  CHECK_THROWS_AS(read_csv(junk), std::runtime_error);
}

}
