#include "liouville/radial_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

double residual_at(const ProblemSpec& spec, double m, double r) {
  const int N = spec.dimension();
  const double bracket = m * (N - 2 - m) + m * r * spec.b()(r) - r * r * spec.c()(r);
  return std::pow(r, -m - 2.0) * bracket;
}

bool verify_power_supersolution(const ProblemSpec& spec, double m, double R1, double R_end, int samples) {
  if (!(R1 < R_end)) throw ArgumentError("verify_power_supersolution needs R1 < R_end");
  const int N = spec.dimension();
  for (double r : log_spaced(R1, R_end, std::max(samples, 2))) {
    const double t1 = m * (N - 2 - m);
    const double t2 = m * r * spec.b()(r);
    const double t3 = r * r * spec.c()(r);
    const double bracket = t1 + t2 - t3;
    if (!std::isfinite(bracket)) return false;
    if (bracket < -1e-12 * (1.0 + std::abs(t1) + std::abs(t2) + std::abs(t3))) return false;
  }
  return true;
}

// ---------------------------------------------------------------- Dormand-Prince 5(4)

namespace {

using State = std::array<double, 2>;  // (u, p = r u')

struct RadialRhs {
  const ProblemSpec& spec;
  State operator()(double s, const State& y) const {
    const double r = std::exp(s);
    const double rb = r * spec.b()(r);
    const double r2c = r * r * spec.c()(r);
    return {y[1], -(spec.dimension() - 2) * y[1] + rb * std::abs(y[1]) - r2c * y[0]};
  }
};

struct StepResult {
  State y;
  double err;  // weighted error norm, accept when <= 1
};

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

StepResult dp_step(const RadialRhs& f, double s, const State& y, double h, const StepControl& ctl) {
  auto axpy = [](const State& base, std::initializer_list<std::pair<double, const State*>> terms, double h_) {
    State out = base;
    for (const auto& [c, k] : terms) {
      out[0] += h_ * c * (*k)[0];
      out[1] += h_ * c * (*k)[1];
    }
    return out;
  };
  const State k1 = f(s, y);
  const State k2 = f(s + h / 5, axpy(y, {{a21, &k1}}, h));
  const State k3 = f(s + 3 * h / 10, axpy(y, {{a31, &k1}, {a32, &k2}}, h));
  const State k4 = f(s + 4 * h / 5, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
  const State k5 = f(s + 8 * h / 9, axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
  const State k6 = f(s + h, axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
  const State y1 = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
  const State k7 = f(s + h, y1);
  // The equation is positively homogeneous in (u, p): measure errors
  // against the size of the whole state.
  const double scale = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[0]) + std::abs(y[1]),
                                                            std::abs(y1[0]) + std::abs(y1[1]));
  double err = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    err = std::max(err, std::abs(e) / scale);
  }
  if (!std::isfinite(y1[0]) || !std::isfinite(y1[1])) err = std::numeric_limits<double>::infinity();
  return {y1, err};
}

// Largest s' in [s, s + h] bracketing the sign change of component `idx`,
// located by re-integrating single steps from (s, y).
double locate_sign_change(const RadialRhs& f, double s, const State& y, double h, int idx,
                          const StepControl& ctl) {
  double lo = 0.0, hi = h;
  const double sign0 = y[idx] > 0 ? 1.0 : -1.0;
  while (hi - lo > ctl.zero_tol) {
    const double mid = 0.5 * (lo + hi);
    const State ym = dp_step(f, s, y, mid, ctl).y;
    if (ym[idx] * sign0 > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

ShootingResult shoot_first_zero(const ProblemSpec& spec, double u0, double slope0, double R_max,
                                const StepControl& ctl) {
  if (!(u0 > 0)) throw ArgumentError("shooting needs u0 > 0");
  if (!(R_max > spec.R0())) throw ArgumentError("shooting needs R_max > R0");
  const RadialRhs f{spec};
  ShootingResult out;
  double s = std::log(spec.R0());
  const double s_end = std::log(R_max);
  State y{u0, slope0 * spec.R0()};
  out.min_value = u0;
  out.max_abs_slope = std::abs(slope0);
  auto record = [&](double s_, const State& y_) {
    const double r = std::exp(s_);
    out.min_value = std::min(out.min_value, y_[0]);
    out.max_abs_slope = std::max(out.max_abs_slope, std::abs(y_[1] / r));
    if (ctl.record_trajectory) out.trajectory.push_back({r, y_[0], y_[1] / r});
  };
  record(s, y);

  double h = std::min(ctl.max_step, 1e-3);
  while (s < s_end) {
    if (out.steps >= ctl.max_steps) {
      out.status = ShootStatus::StepLimit;
      break;
    }
    h = std::min({h, ctl.max_step, s_end - s});
    if (h < 1e-14 * std::max(1.0, std::abs(s))) {
      out.status = ShootStatus::StepUnderflow;
      break;
    }
    StepResult st = dp_step(f, s, y, h, ctl);
    if (!(st.err <= 1.0)) {
      if (!std::isfinite(st.err) && h < 1e-12) {
        out.status = ShootStatus::NonFinite;
        break;
      }
      h *= std::isfinite(st.err) ? std::max(0.2, 0.9 * std::pow(st.err, -0.2)) : 0.1;
      continue;
    }
    ++out.steps;
    double h_taken = h;
    // u' changed sign: end the step on the kink of |u'|.
    if (y[1] != 0.0 && st.y[1] != 0.0 && (y[1] > 0) != (st.y[1] > 0) && st.y[0] > 0) {
      h_taken = locate_sign_change(f, s, y, h, 1, ctl);
      st = dp_step(f, s, y, h_taken, ctl);
      st.y[1] = 0.0;
    }
    if (st.y[0] <= 0.0) {
      const double hz = st.y[0] == 0.0 ? h_taken : locate_sign_change(f, s, y, h_taken, 0, ctl);
      const State yz = dp_step(f, s, y, hz, ctl).y;
      s += hz;
      out.first_zero = std::exp(s);
      record(s, State{0.0, yz[1]});
      out.min_value = std::min(out.min_value, 0.0);
      out.status = ShootStatus::ZeroFound;
      out.final_radius = std::exp(s);
      return out;
    }
    s += h_taken;
    y = st.y;
    record(s, y);
    const double grow = st.err > 0 ? 0.9 * std::pow(st.err, -0.2) : 5.0;
    h = h_taken * std::clamp(grow, 0.2, 5.0);
  }
  out.final_radius = std::exp(s);
  return out;
}

const char* to_string(OscillationClass c) {
  switch (c) {
    case OscillationClass::AllOscillate: return "AllOscillate";
    case OscillationClass::PositiveSolutionFound: return "PositiveSolutionFound";
    case OscillationClass::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

OscillationScan oscillation_scan(const ProblemSpec& spec, int slope_count, double R_max,
                                 std::size_t max_steps_per_shot) {
  if (slope_count < 8) throw ArgumentError("oscillation_scan needs at least 8 slopes");
  const double R0 = spec.R0();
  const double first_decade = r2_times_c(spec).bound(R0, 10.0 * R0, BoundMode::Sup).value;
  OscillationScan out;
  out.slope_bracket = 2.0 * std::max(spec.beta(), std::sqrt(std::max(first_decade, 0.0))) / R0;
  out.slopes.push_back(0.0);
  for (int j = 0; j < slope_count - 1; ++j)
    out.slopes.push_back(-out.slope_bracket * std::pow(10.0, -4.0 * (1.0 - double(j) / (slope_count - 2))));

  StepControl ctl;
  ctl.record_trajectory = false;
  ctl.max_steps = max_steps_per_shot;
  bool all_cross = true, positive = false;
  for (double slope : out.slopes) {
    const ShootingResult res = shoot_first_zero(spec, 1.0, slope, R_max, ctl);
    out.first_zeros.push_back(res.first_zero);
    out.statuses.push_back(res.status);
    if (!res.first_zero) all_cross = false;
    if (res.status == ShootStatus::Completed && res.min_value > 0 && std::isfinite(res.max_abs_slope))
      positive = true;
  }
  if (positive) {
    out.classification = OscillationClass::PositiveSolutionFound;
  } else if (all_cross) {
    out.classification = OscillationClass::AllOscillate;
  } else {
    out.classification = OscillationClass::Inconclusive;
  }
  return out;
}

std::string trajectory_csv(const ShootingResult& result) {
  std::ostringstream os;
  os << "r,u,du\n";
  char buf[96];
  for (const auto& p : result.trajectory) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.r, p.u, p.du);
    os << buf;
  }
  return os.str();
}

}  // namespace liouville
