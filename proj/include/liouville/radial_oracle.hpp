#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "liouville/weights.hpp"

namespace liouville {

/// r^{-m-2} (m(N-2-m) + m r b(r) - r^2 c(r)): the operator applied to r^{-m}.
double residual_at(const ProblemSpec& spec, double m, double r);

/// True iff the bracket of residual_at is >= -1e-12 (relative to its terms) at
/// `samples` log-spaced radii of [R1, R_end].
bool verify_power_supersolution(const ProblemSpec& spec, double m, double R1, double R_end,
                                int samples = 10000);

struct TrajectoryPoint {
  double r = 0.0;
  double u = 0.0;
  double du = 0.0;
};

enum class ShootStatus { Completed, ZeroFound, StepUnderflow, StepLimit, NonFinite };

struct ShootingResult {
  std::optional<double> first_zero;
  double final_radius = 0.0;
  double min_value = 0.0;
  double max_abs_slope = 0.0;
  std::vector<TrajectoryPoint> trajectory;
  ShootStatus status = ShootStatus::Completed;
  std::size_t steps = 0;

  bool failed() const {
    return status == ShootStatus::StepUnderflow || status == ShootStatus::StepLimit ||
           status == ShootStatus::NonFinite;
  }
};

struct StepControl {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  /// Bisection width, in ln r, for sign changes of u and u'.
  double zero_tol = 1e-11;
  double max_step = 0.25;
  std::size_t max_steps = 2'000'000;
  bool record_trajectory = true;
};

/// Integrates the radial equation
///   u'' = -((N-1)/r) u' + b(r)|u'| - c(r) u,   u(R0) = u0, u'(R0) = slope0
/// with Dormand-Prince 5(4) steps in s = ln r, splitting steps at sign changes
/// of u' and stopping at the first zero of u.
ShootingResult shoot_first_zero(const ProblemSpec& spec, double u0, double slope0, double R_max,
                                const StepControl& control = {});

enum class OscillationClass { AllOscillate, PositiveSolutionFound, Inconclusive };

const char* to_string(OscillationClass c);

struct OscillationScan {
  OscillationClass classification = OscillationClass::Inconclusive;
  double slope_bracket = 0.0;  ///< K: slopes span [-K, 0]
  std::vector<double> slopes;
  std::vector<std::optional<double>> first_zeros;
  std::vector<ShootStatus> statuses;
};

/// Shoots from u(R0) = 1 with `slope_count` slopes in [-K, 0] (0 and a
/// log-spaced set down to -K). Heuristic evidence only.
OscillationScan oscillation_scan(const ProblemSpec& spec, int slope_count, double R_max,
                                 std::size_t max_steps_per_shot = 200'000);

/// "r,u,du" rows.
std::string trajectory_csv(const ShootingResult& result);

}  // namespace liouville
