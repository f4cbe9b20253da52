#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace reflex_sim {

/// The three stretch reflex parameters plus the inhibition grouping.
struct ReflexParams {
  double c_stretch = 15.0;   // trigger threshold on the per-tick tension rise (N)
  double dl_stretch = 10.0;  // reference contraction (mm)
  double dt_loose = 0.5;     // loosening duration (s)
  std::vector<std::vector<int>> groups;

  /// Groups must partition {0..m-1}.
  std::vector<std::string> problems(int n_muscles) const;
  void validate(int n_muscles) const;
};

/// One group per joint, containing every muscle with a nonzero moment arm
/// about it; a muscle spanning several joints goes to its first.
std::vector<std::vector<int>> groups_per_joint(const Eigen::MatrixXd& moment_arms);

enum class ReflexPhase { Idle, Loosening };

struct MuscleReflex {
  ReflexPhase phase = ReflexPhase::Idle;
  double offset = 0.0;   // mm, subtracted from the commanded reference
  double t_fired = 0.0;  // s
};

struct ReflexState {
  std::vector<MuscleReflex> muscles;
  std::vector<double> inhibited_until;  // per group (s)
  std::vector<int> group_of;            // muscle -> group
  std::optional<double> last_t;

  static ReflexState initial(const ReflexParams& params, int n_muscles);
};

struct ReflexEvent {
  int muscle = 0;
  double t = 0.0;
  bool operator==(const ReflexEvent&) const = default;
};

struct ReflexUpdate {
  ReflexState state;
  std::vector<double> offsets;
  std::vector<ReflexEvent> events;
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// True iff f_now - f_prev > c_stretch.
bool detect(double f_prev, double f_now, const ReflexParams& params);

/// One control tick of the reflex state machine.
///
/// Every decision reads the pre-tick state, so muscles that cross the
/// threshold on the same tick all fire even when they share a group. A firing
/// muscle contracts by dl_stretch at once and inhibits new triggers in its
/// group over [t, t + dt_loose). Loosening ramps the offset linearly to zero;
/// a muscle whose ramp ends on this tick is Idle again and may re-fire here.
///
/// dt_tick only sets the tolerance for comparing tick times. Throws
/// ContractViolation if t does not increase.
ReflexUpdate update(ReflexState state, std::span<const double> tensions_prev,
                    std::span<const double> tensions_now, double t, double dt_tick,
                    const ReflexParams& params);

/// l_ref_commanded - offsets, elementwise.
Eigen::VectorXd effective_ref(const Eigen::VectorXd& l_ref_commanded,
                              std::span<const double> offsets);

}  // namespace reflex_sim
