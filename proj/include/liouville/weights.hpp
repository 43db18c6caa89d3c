#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace liouville {

struct PowerTerm {
  double coeff = 0.0;
  double exponent = 0.0;
};

enum class Monotonicity { Constant, Increasing, Decreasing, Mixed };

/// Finite sum  f(r) = sum_i coeff_i * r^exponent_i  on r > 0.
///
/// Stored in canonical form: exponents strictly increasing, equal exponents
/// merged, zero coefficients dropped. The empty sum is the zero function.
class PowerSum {
 public:
  PowerSum() = default;
  explicit PowerSum(std::vector<PowerTerm> terms);

  static PowerSum monomial(double coeff, double exponent);

  double operator()(double r) const;
  double derivative(double r) const;
  double second_derivative(double r) const;

  /// r^k * f(r)
  PowerSum times_power(double k) const;
  PowerSum scaled(double factor) const;
  /// r -> f(s*r), still a power sum.
  PowerSum dilated(double s) const;

  PowerSum operator+(const PowerSum& other) const;
  PowerSum operator-(const PowerSum& other) const;
  PowerSum operator*(const PowerSum& other) const;

  /// Monotonicity on all of (0, inf) read off the term-wise derivative signs.
  Monotonicity monotonicity() const;
  /// lim_{r -> inf} f(r); +-inf when the dominant exponent is positive.
  double limit_at_infinity() const;

  bool is_zero() const { return terms_.empty(); }
  const std::vector<PowerTerm>& terms() const { return terms_; }

 private:
  std::vector<PowerTerm> terms_;
};

struct PowerLaw {
  double coeff = 0.0;
  double exponent = 0.0;
};

struct SumOfPowerLaws {
  std::vector<PowerTerm> terms;
};

/// Piecewise-linear table on an increasing grid. Beyond the last node the
/// value continues as value_last * (r / r_last)^tail_exponent.
struct Tabulated {
  std::vector<double> grid;
  std::vector<double> values;
  double tail_exponent = 0.0;
};

/// A radial function r -> w(r) used for the coefficients b, c and for
/// auxiliary functions E.
class RadialWeight {
 public:
  using Variant = std::variant<PowerLaw, SumOfPowerLaws, Tabulated>;

  RadialWeight() : RadialWeight(PowerLaw{0.0, 0.0}) {}
  RadialWeight(PowerLaw p);        // NOLINT(google-explicit-constructor)
  RadialWeight(SumOfPowerLaws s);  // NOLINT(google-explicit-constructor)
  RadialWeight(Tabulated t);       // NOLINT(google-explicit-constructor)

  static RadialWeight power(double coeff, double exponent) { return PowerLaw{coeff, exponent}; }
  static RadialWeight zero() { return PowerLaw{0.0, 0.0}; }

  /// Throws DomainError below min_radius().
  double operator()(double r) const;
  double derivative(double r) const;
  double second_derivative(double r) const;

  /// Smallest admissible radius: 0 (exclusive) for power forms, the first
  /// grid node for tables.
  double min_radius() const;

  /// Exact power-sum form, when the weight is a power law or a sum of them.
  std::optional<PowerSum> power_sum() const;

  /// r -> factor * w(s * r): the coefficient transform under x -> s x.
  RadialWeight rescaled(double s, double factor) const;

  const Variant& variant() const { return v_; }

 private:
  Variant v_;
};

double eval(const RadialWeight& w, double r);

enum class BoundMode { Inf, Sup };

struct Bound {
  double value = 0.0;
  /// True when the value is attained at an analytically known point
  /// (monotone power sum, node of a piecewise-linear table).
  bool exact = false;
};

inline constexpr int kDefaultBoundSamples = 1024;

/// A radial function together with whatever structure allows exact bounds.
class RadialFunction {
 public:
  explicit RadialFunction(PowerSum sum);
  /// `breakpoints` are always included in bound scans. With
  /// `piecewise_monotone` the function is monotone between consecutive
  /// breakpoints and beyond the last one, which makes scans exact.
  RadialFunction(std::function<double(double)> fn, std::vector<double> breakpoints,
                 bool piecewise_monotone);

  double operator()(double r) const;
  const std::optional<PowerSum>& power_sum() const { return sum_; }

  Bound bound(double a, double b, BoundMode mode, int samples = kDefaultBoundSamples) const;

 private:
  std::optional<PowerSum> sum_;
  std::function<double(double)> fn_;
  std::vector<double> breakpoints_;
  bool piecewise_monotone_ = false;
};

RadialFunction as_function(const RadialWeight& w);

/// inf or sup of w over [a, b]; exact for monotone power pieces and tables,
/// otherwise a log-spaced scan of `samples` points flagged approximate.
Bound annulus_bound(const RadialWeight& w, double a, double b, BoundMode mode,
                    int samples = kDefaultBoundSamples);

/// Data of  -Δu + b(|x|) |∇u| = c(|x|) u  on  |x| > R0.
class ProblemSpec {
 public:
  ProblemSpec(int dimension, double R0, RadialWeight b, RadialWeight c);

  int dimension() const { return dimension_; }
  double R0() const { return R0_; }
  const RadialWeight& b() const { return b_; }
  const RadialWeight& c() const { return c_; }
  /// (N - 2) / 2
  double beta() const { return 0.5 * (dimension_ - 2); }

  /// (b, c, R0) -> (s b(s .), s^2 c(s .), R0 / s): the scaling symmetry of the equation.
  ProblemSpec rescaled(double s) const;

 private:
  int dimension_;
  double R0_;
  RadialWeight b_;
  RadialWeight c_;
};

RadialFunction r_times_b(const ProblemSpec& spec);
RadialFunction r2_times_c(const ProblemSpec& spec);
/// c - b^2/4
RadialFunction gap(const ProblemSpec& spec);
RadialFunction r2_times_gap(const ProblemSpec& spec);

struct AsymptoticProfile {
  double tau = 0.0;  ///< limsup r b(r), possibly +inf
  double liminf_r_b = 0.0;
  double liminf_r2_c = 0.0;
  double limsup_r2_c = 0.0;
  double liminf_r2_gap = 0.0;
  bool exact = false;
};

/// Symbolic limits for power-sum weights; dyadic-annulus estimates up to
/// R_max otherwise. Throws ArgumentError if R_max < 4 R0.
AsymptoticProfile asymptotic_profile(const ProblemSpec& spec, double R_max);

/// Geometric grid of `count` radii spanning [a, b] inclusive.
std::vector<double> log_spaced(double a, double b, int count);

}  // namespace liouville
