#include "reflex_sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace reflex_sim {

Eigen::VectorXd RefTrajectoryEvent::sample(double t_rel) const {
  if (t_rel <= times.front()) return lengths.front();
  if (t_rel >= times.back()) return lengths.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t_rel);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double s = (t_rel - times[lo]) / (times[hi] - times[lo]);
  return lengths[lo] + s * (lengths[hi] - lengths[lo]);
}

std::string event_kind_name(const EventKind& kind) {
  struct Visitor {
    std::string operator()(const ImpulseEvent&) const { return "impulse"; }
    std::string operator()(const PayloadEvent&) const { return "payload"; }
    std::string operator()(const RefTrajectoryEvent&) const { return "ref_trajectory"; }
  };
  return std::visit(Visitor{}, kind);
}

std::vector<std::string> ScenarioScript::problems(int n_joints, int n_muscles) const {
  std::vector<std::string> out;
  auto fail = [&](const std::string& field, const std::string& why) {
    out.push_back("ScenarioScript." + field + ": " + why);
  };
  if (!(std::isfinite(duration) && duration > 0.0)) fail("duration", "must be positive");
  if (initial_posture.size() != n_joints) fail("initial_posture", "needs one angle per joint");
  if (!initial_posture.allFinite()) fail("initial_posture", "non-finite");
  if (!(jitter >= 0.0)) fail("jitter", "must be non-negative");
  double prev = 0.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    const std::string field = "events[" + std::to_string(i) + "]";
    if (!(ev.time >= 0.0 && ev.time <= duration)) fail(field + ".time", "outside [0, duration]");
    if (ev.time < prev) fail(field + ".time", "events must be sorted by time");
    prev = ev.time;
    if (const auto* imp = std::get_if<ImpulseEvent>(&ev.kind)) {
      if (imp->joint < 0 || imp->joint >= n_joints) fail(field + ".joint", "out of range");
      if (!std::isfinite(imp->d_omega)) fail(field + ".d_omega", "non-finite");
    } else if (const auto* pl = std::get_if<PayloadEvent>(&ev.kind)) {
      if (!(pl->mass >= 0.0 && std::isfinite(pl->mass))) fail(field + ".mass", "must be >= 0");
    } else if (const auto* tr = std::get_if<RefTrajectoryEvent>(&ev.kind)) {
      if (tr->times.empty() || tr->times.size() != tr->lengths.size()) {
        fail(field + ".knots", "need matching, non-empty times and lengths");
        continue;
      }
      for (std::size_t k = 0; k < tr->times.size(); ++k) {
        if (k > 0 && !(tr->times[k] > tr->times[k - 1])) {
          fail(field + ".times", "must increase strictly");
        }
        if (tr->lengths[k].size() != n_muscles || !tr->lengths[k].allFinite()) {
          fail(field + ".lengths", "need one finite length per muscle");
        }
      }
    }
  }
  if (feedback_enabled &&
      std::any_of(events.begin(), events.end(), [](const ScenarioEvent& e) {
        return std::holds_alternative<RefTrajectoryEvent>(e.kind);
      })) {
    fail("events", "reference trajectories cannot be combined with feedback");
  }
  if (metrics.joint < 0 || metrics.joint >= n_joints) fail("metrics.joint", "out of range");
  return out;
}

void ScenarioScript::validate(int n_joints, int n_muscles) const {
  if (const auto p = problems(n_joints, n_muscles); !p.empty()) {
    throw std::invalid_argument(p.front());
  }
}

namespace {

long ticks_per(double period, double dt, const char* what) {
  const double ratio = period / dt;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-6) {
    throw std::invalid_argument(std::string(what) + " period must be a multiple of physics_dt");
  }
  return n;
}

std::vector<ScenarioEvent> schedule(const ScenarioScript& s) {
  std::vector<ScenarioEvent> events = s.events;
  if (s.jitter > 0.0) {
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> u(-s.jitter, s.jitter);
    for (auto& ev : events) ev.time = std::clamp(ev.time + u(rng), 0.0, s.duration);
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });
  }
  return events;
}

}  // namespace

TelemetryLog run(const ScenarioScript& scenario, const ArmModel& robot,
                 const ReflexParams& reflex, const std::optional<FeedbackParams>& fb,
                 const SimTiming& timing) {
  robot.validate();
  const int n = robot.n_joints();
  const int m = robot.n_muscles();
  scenario.validate(n, m);
  if (scenario.reflex_enabled) reflex.validate(m);
  if (scenario.feedback_enabled) {
    if (!fb) throw std::invalid_argument("run: feedback enabled but no FeedbackParams given");
    fb->validate(n);
  }
  if (!(timing.physics_dt > 0.0 && timing.physics_dt <= 0.005)) {
    throw std::invalid_argument("SimTiming.physics_dt must lie in (0, 5 ms]");
  }
  const double dt = timing.physics_dt;
  const long reflex_every = ticks_per(1.0 / timing.reflex_rate, dt, "reflex");
  const long feedback_every =
      scenario.feedback_enabled ? ticks_per(1.0 / fb->rate, dt, "feedback") : 0;
  const long n_ticks = std::lround(scenario.duration / dt);
  const double reflex_dt = static_cast<double>(reflex_every) * dt;

  TelemetryLog log;
  log.scenario = scenario.name;
  log.dt = dt;
  for (const auto& j : robot.joints) log.joint_names.push_back(j.name);
  for (const auto& mp : robot.muscles) log.muscle_names.push_back(mp.name);
  log.ticks.reserve(static_cast<std::size_t>(n_ticks));

  const std::vector<ScenarioEvent> events = schedule(scenario);
  std::size_t next_event = 0;

  ArmState arm = ArmState::at_rest(scenario.initial_posture);
  FeedbackState fb_state;
  Eigen::VectorXd l_ref_cmd;
  if (scenario.feedback_enabled) {
    fb_state = FeedbackState::initial(*fb);
    l_ref_cmd = refs_from_virtual(fb_state.theta_virtual, robot);
  } else {
    l_ref_cmd = hold_posture_refs(scenario.initial_posture, robot);
  }
  const RefTrajectoryEvent* trajectory = nullptr;
  double trajectory_start = 0.0;

  std::vector<MuscleUnit> units;
  units.reserve(m);
  for (int i = 0; i < m; ++i) units.push_back(make_muscle(robot.muscles[i], l_ref_cmd[i]));
  {
    const Eigen::VectorXd path = muscle_path_lengths(arm.theta, robot);
    for (int i = 0; i < m; ++i) units[i] = rotate_tension(update_tension(units[i], path[i]));
  }

  ReflexState reflex_state;
  if (scenario.reflex_enabled) reflex_state = ReflexState::initial(reflex, m);
  std::vector<double> offsets(m, 0.0);
  Eigen::VectorXd dtension = Eigen::VectorXd::Zero(m);
  const Eigen::VectorXd no_ext = Eigen::VectorXd::Zero(n);

  for (long k = 0; k < n_ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    TickRecord rec;
    rec.t = t;

    while (next_event < events.size() && events[next_event].time <= t + 1e-9) {
      const ScenarioEvent& ev = events[next_event];
      if (const auto* imp = std::get_if<ImpulseEvent>(&ev.kind)) {
        arm = apply_impulse(std::move(arm), imp->joint, imp->d_omega);
      } else if (const auto* pl = std::get_if<PayloadEvent>(&ev.kind)) {
        arm.payload_mass = pl->mass;
      } else if (const auto* tr = std::get_if<RefTrajectoryEvent>(&ev.kind)) {
        trajectory = tr;
        trajectory_start = ev.time;
      }
      log.script_events.push_back(
          {static_cast<int>(next_event), k, ev.time, event_kind_name(ev.kind)});
      ++rec.script_events;
      ++next_event;
    }

    if (scenario.feedback_enabled && k % feedback_every == 0) {
      fb_state = feedback_update(std::move(fb_state), arm.theta, *fb);
      l_ref_cmd = refs_from_virtual(fb_state.theta_virtual, robot);
      rec.feedback_tick = true;
    }
    if (trajectory != nullptr) l_ref_cmd = trajectory->sample(t - trajectory_start);

    const Eigen::VectorXd path = muscle_path_lengths(arm.theta, robot);
    for (int i = 0; i < m; ++i) units[i] = update_tension(units[i], path[i]);

    rec.fired.assign(m, 0);
    if (k % reflex_every == 0) {
      rec.reflex_tick = true;
      std::vector<double> prev(m), now(m);
      for (int i = 0; i < m; ++i) {
        prev[i] = units[i].tension_prev;
        now[i] = units[i].tension;
        dtension[i] = now[i] - prev[i];
      }
      if (scenario.reflex_enabled) {
        ReflexUpdate up = update(std::move(reflex_state), prev, now, t, reflex_dt, reflex);
        reflex_state = std::move(up.state);
        offsets = std::move(up.offsets);
        for (const auto& ev : up.events) {
          rec.fired[ev.muscle] = 1;
          log.reflex_events.push_back(ev);
        }
      }
      for (auto& u : units) u = rotate_tension(u);
    }

    const Eigen::VectorXd l_ref_eff = effective_ref(l_ref_cmd, offsets);
    Eigen::VectorXd tensions(m);
    for (int i = 0; i < m; ++i) tensions[i] = units[i].tension;

    rec.theta = arm.theta;
    rec.omega = arm.omega;
    rec.limit_force = limit_torques(arm, robot).cwiseAbs();
    rec.l_motor.resize(m);
    for (int i = 0; i < m; ++i) rec.l_motor[i] = units[i].l_motor;
    rec.l_ref_cmd = l_ref_cmd;
    rec.l_ref_eff = l_ref_eff;
    rec.tension = tensions;
    rec.dtension = dtension;
    rec.offset = Eigen::Map<const Eigen::VectorXd>(offsets.data(), m);
    rec.payload = arm.payload_mass;

    for (int i = 0; i < m; ++i) units[i] = step_motor(units[i], l_ref_eff[i], dt);
    rec.flags.resize(m);
    for (int i = 0; i < m; ++i) rec.flags[i] = units[i].flags;

    arm = step_dynamics(std::move(arm), joint_torques(tensions, robot), no_ext, dt, robot, k);
    log.ticks.push_back(std::move(rec));
  }
  return log;
}

double drop_impulse(const ArmModel& robot, int joint, const Eigen::VectorXd& posture,
                    double mass, double height) {
  ArmState probe = ArmState::at_rest(posture);
  probe.payload_mass = 1.0;
  // Gravity torque of a unit payload alone gives -g * horizontal lever arm.
  ArmModel unit_arm = robot;
  for (auto& j : unit_arm.joints) j.link_mass = 0.0;
  unit_arm.gravity = 1.0;
  const double lever = -gravity_torques(probe, unit_arm)[joint];
  probe.payload_mass = mass;
  const double inertia = effective_inertia(probe, robot)[joint];
  const double v = std::sqrt(2.0 * 9.81 * height);
  return -mass * v * lever / inertia;
}

std::map<std::string, ScenarioScript> builtin_scenarios(const ArmModel& robot,
                                                        const ScenarioDefaults& d) {
  const int n = robot.n_joints();
  const int elbow = n - 1;
  std::map<std::string, ScenarioScript> out;
  auto posture = [n, elbow](double shoulder, double elbow_angle) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    if (n > 1) p[0] = shoulder;
    p[elbow] = elbow_angle;
    return p;
  };

  {
    ScenarioScript s;
    s.name = "E1_protective";
    s.initial_posture = posture(d.e1_shoulder, d.e1_posture);
    for (int i = 0; i < 7; ++i) {
      s.events.push_back({d.e1_first_impact + i * d.e1_impact_interval,
                          ImpulseEvent{elbow, d.e1_impulse}});
    }
    s.duration = d.e1_first_impact + 7 * d.e1_impact_interval;
    s.metrics.joint = elbow;
    s.metrics.theta_ref = d.e1_posture;
    out[s.name] = s;
  }
  {
    ScenarioScript s;
    s.name = "E2_postural";
    s.initial_posture = posture(0.0, d.e2_posture);
    for (int i = 0; i < 7; ++i) {
      s.events.push_back({d.e2_first_impact + i * d.e2_impact_interval,
                          ImpulseEvent{elbow, d.e2_impulse}});
    }
    const double last = s.events.back().time;
    s.metrics.joint = elbow;
    s.metrics.theta_ref = d.e2_posture;
    s.metrics.t_before = d.e2_first_impact - s.metrics.drift_window;
    s.metrics.t_after = last + d.e2_settle;
    s.duration = *s.metrics.t_after + s.metrics.drift_window + 0.1;
    out[s.name] = s;
  }
  {
    ScenarioScript s;
    s.name = "E3_feedback";
    s.initial_posture = posture(0.0, d.e3_posture);
    s.feedback_enabled = true;
    s.events.push_back({d.e3_drop_time, PayloadEvent{d.e3_payload}});
    s.events.push_back(
        {d.e3_drop_time, ImpulseEvent{elbow, drop_impulse(robot, elbow, s.initial_posture,
                                                          d.e3_payload, d.e3_drop_height)}});
    s.duration = d.e3_drop_time + d.e3_tail;
    s.metrics.joint = elbow;
    s.metrics.theta_ref = d.e3_posture;
    s.metrics.t_impact = d.e3_drop_time;
    s.metrics.theta_thre = d.e3_theta_thre;
    s.metrics.side = ThresholdSide::Below;
    out[s.name] = s;
  }
  {
    ScenarioScript s;
    s.name = "E4_lifting";
    s.initial_posture = posture(d.e4_shoulder, d.e4_start_posture);
    s.events.push_back({d.e4_payload_time, PayloadEvent{d.e4_payload}});
    RefTrajectoryEvent ramp;
    ramp.times = {0.0, d.e4_ramp_duration};
    ramp.lengths = {hold_posture_refs(posture(d.e4_shoulder, d.e4_start_posture), robot),
                    hold_posture_refs(posture(d.e4_shoulder, d.e4_end_posture), robot)};
    s.events.push_back({d.e4_ramp_start, ramp});
    s.duration = d.e4_ramp_start + d.e4_ramp_duration + d.e4_tail;
    s.metrics.joint = elbow;
    s.metrics.theta_ref = d.e4_end_posture;
    s.metrics.window_final = 1.0;
    out[s.name] = s;
  }
  return out;
}

}  // namespace reflex_sim
