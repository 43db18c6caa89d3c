#include "liouville/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "liouville/errors.hpp"

namespace liouville {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double checked(double value, double r) {
  if (!std::isfinite(value)) throw NumericalError("non-finite weight value", r);
  return value;
}

// Golden-section refinement of an extremum bracketed by [lo, hi] in log r.
double refine_extremum(const std::function<double(double)>& f, double lo, double hi,
                       BoundMode mode, double best) {
  const double sign = mode == BoundMode::Inf ? 1.0 : -1.0;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::log(lo);
  double b = std::log(hi);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = sign * f(std::exp(x1));
  double f2 = sign * f(std::exp(x2));
  for (int it = 0; it < 80 && (b - a) > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = sign * f(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = sign * f(std::exp(x2));
    }
  }
  const double refined = sign * std::min(f1, f2);
  return mode == BoundMode::Inf ? std::min(best, refined) : std::max(best, refined);
}

// Least-squares slope of log|v| against log r.
double loglog_slope(const std::vector<double>& radii, const std::vector<double>& v) {
  const std::size_t n = radii.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(radii[i]);
    const double y = std::log(std::abs(v[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  return den > 0 ? (n * sxy - sx * sy) / den : 0.0;
}

// Tail estimate of a dyadic sequence: the last value, or +-inf when the last
// half grows monotonically in magnitude with log-log slope >= 0.05.
double tail_value(const std::vector<double>& radii, const std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t start = n / 2;
  if (n - start >= 3) {
    std::vector<double> rr(radii.begin() + start, radii.end());
    std::vector<double> vv(v.begin() + start, v.end());
    bool inc = true, dec = true, pos = true, neg = true;
    for (std::size_t i = 0; i < vv.size(); ++i) {
      pos = pos && vv[i] > 0;
      neg = neg && vv[i] < 0;
      if (i > 0) {
        inc = inc && vv[i] > vv[i - 1];
        dec = dec && vv[i] < vv[i - 1];
      }
    }
    if ((inc && pos) || (dec && neg)) {
      if (loglog_slope(rr, vv) >= 0.05) return pos ? kInf : -kInf;
    }
  }
  return v.back();
}

}  // namespace

// ---------------------------------------------------------------- PowerSum

PowerSum::PowerSum(std::vector<PowerTerm> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
  for (const auto& t : terms) {
    if (!std::isfinite(t.coeff) || !std::isfinite(t.exponent))
      throw ArgumentError("power-law term must be finite");
    if (!terms_.empty() && terms_.back().exponent == t.exponent) {
      terms_.back().coeff += t.coeff;
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const PowerTerm& t) { return t.coeff == 0.0; });
}

PowerSum PowerSum::monomial(double coeff, double exponent) {
  return PowerSum({PowerTerm{coeff, exponent}});
}

double PowerSum::operator()(double r) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.coeff * std::pow(r, t.exponent);
  return s;
}

double PowerSum::derivative(double r) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.coeff * t.exponent * std::pow(r, t.exponent - 1.0);
  return s;
}

double PowerSum::second_derivative(double r) const {
  double s = 0.0;
  for (const auto& t : terms_)
    s += t.coeff * t.exponent * (t.exponent - 1.0) * std::pow(r, t.exponent - 2.0);
  return s;
}

PowerSum PowerSum::times_power(double k) const {
  std::vector<PowerTerm> out = terms_;
  for (auto& t : out) t.exponent += k;
  return PowerSum(std::move(out));
}

PowerSum PowerSum::scaled(double factor) const {
  std::vector<PowerTerm> out = terms_;
  for (auto& t : out) t.coeff *= factor;
  return PowerSum(std::move(out));
}

PowerSum PowerSum::dilated(double s) const {
  std::vector<PowerTerm> out = terms_;
  for (auto& t : out) t.coeff *= std::pow(s, t.exponent);
  return PowerSum(std::move(out));
}

PowerSum PowerSum::operator+(const PowerSum& other) const {
  std::vector<PowerTerm> out = terms_;
  out.insert(out.end(), other.terms_.begin(), other.terms_.end());
  return PowerSum(std::move(out));
}

PowerSum PowerSum::operator-(const PowerSum& other) const { return *this + other.scaled(-1.0); }

PowerSum PowerSum::operator*(const PowerSum& other) const {
  std::vector<PowerTerm> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) out.push_back({a.coeff * b.coeff, a.exponent + b.exponent});
  return PowerSum(std::move(out));
}

Monotonicity PowerSum::monotonicity() const {
  bool up = false, down = false;
  for (const auto& t : terms_) {
    const double slope = t.coeff * t.exponent;
    up = up || slope > 0;
    down = down || slope < 0;
  }
  if (up && down) return Monotonicity::Mixed;
  if (up) return Monotonicity::Increasing;
  if (down) return Monotonicity::Decreasing;
  return Monotonicity::Constant;
}

double PowerSum::limit_at_infinity() const {
  if (terms_.empty()) return 0.0;
  const PowerTerm& lead = terms_.back();
  if (lead.exponent > 0) return lead.coeff > 0 ? kInf : -kInf;
  if (lead.exponent == 0) return lead.coeff;
  return 0.0;
}

// ---------------------------------------------------------------- RadialWeight

RadialWeight::RadialWeight(PowerLaw p) : v_(p) {
  if (!std::isfinite(p.coeff) || !std::isfinite(p.exponent))
    throw ArgumentError("power law must have finite coefficient and exponent");
}

RadialWeight::RadialWeight(SumOfPowerLaws s) : v_(s) {
  for (const auto& t : s.terms)
    if (!std::isfinite(t.coeff) || !std::isfinite(t.exponent))
      throw ArgumentError("power-law terms must be finite");
}

RadialWeight::RadialWeight(Tabulated t) : v_(t) {
  if (t.grid.empty() || t.grid.size() != t.values.size())
    throw ArgumentError("table needs equally many (>= 1) radii and values");
  if (t.grid.front() <= 0) throw ArgumentError("table radii must be positive");
  for (std::size_t i = 1; i < t.grid.size(); ++i)
    if (!(t.grid[i] > t.grid[i - 1])) throw ArgumentError("table radii must be strictly increasing");
  for (double v : t.values)
    if (!std::isfinite(v)) throw ArgumentError("table values must be finite");
  if (!std::isfinite(t.tail_exponent)) throw ArgumentError("tail exponent must be finite");
}

double RadialWeight::min_radius() const {
  if (const auto* t = std::get_if<Tabulated>(&v_)) return t->grid.front();
  return 0.0;
}

std::optional<PowerSum> RadialWeight::power_sum() const {
  if (const auto* p = std::get_if<PowerLaw>(&v_)) return PowerSum::monomial(p->coeff, p->exponent);
  if (const auto* s = std::get_if<SumOfPowerLaws>(&v_)) return PowerSum(s->terms);
  return std::nullopt;
}

double RadialWeight::operator()(double r) const {
  if (const auto* t = std::get_if<Tabulated>(&v_)) {
    if (!(r >= t->grid.front())) {
      std::ostringstream os;
      os << "radius " << r << " below table start " << t->grid.front();
      throw DomainError(os.str());
    }
    const auto& g = t->grid;
    if (r >= g.back()) return t->values.back() * std::pow(r / g.back(), t->tail_exponent);
    const auto it = std::upper_bound(g.begin(), g.end(), r);
    const std::size_t k = static_cast<std::size_t>(it - g.begin()) - 1;
    const double w = (r - g[k]) / (g[k + 1] - g[k]);
    return (1.0 - w) * t->values[k] + w * t->values[k + 1];
  }
  if (!(r > 0)) throw DomainError("power-law weights are defined for r > 0");
  return (*power_sum())(r);
}

double RadialWeight::derivative(double r) const {
  if (std::holds_alternative<Tabulated>(v_)) {
    const double h = 1e-5 * r;
    const double lo = std::max(r - h, min_radius());
    return ((*this)(r + h) - (*this)(lo)) / (r + h - lo);
  }
  if (!(r > 0)) throw DomainError("power-law weights are defined for r > 0");
  return power_sum()->derivative(r);
}

double RadialWeight::second_derivative(double r) const {
  if (std::holds_alternative<Tabulated>(v_)) {
    const double h = 1e-3 * r;
    const double mid = std::max(r, min_radius() + h);
    return ((*this)(mid + h) - 2.0 * (*this)(mid) + (*this)(mid - h)) / (h * h);
  }
  if (!(r > 0)) throw DomainError("power-law weights are defined for r > 0");
  return power_sum()->second_derivative(r);
}

RadialWeight RadialWeight::rescaled(double s, double factor) const {
  if (const auto* t = std::get_if<Tabulated>(&v_)) {
    Tabulated out = *t;
    for (auto& g : out.grid) g /= s;
    for (auto& v : out.values) v *= factor;
    return out;
  }
  const PowerSum sum = power_sum()->dilated(s).scaled(factor);
  if (sum.terms().size() == 1) return PowerLaw{sum.terms()[0].coeff, sum.terms()[0].exponent};
  if (sum.is_zero()) return PowerLaw{0.0, 0.0};
  return SumOfPowerLaws{sum.terms()};
}

double eval(const RadialWeight& w, double r) { return w(r); }

// ---------------------------------------------------------------- RadialFunction

RadialFunction::RadialFunction(PowerSum sum) : sum_(std::move(sum)) {
  fn_ = [s = *sum_](double r) { return s(r); };
}

RadialFunction::RadialFunction(std::function<double(double)> fn, std::vector<double> breakpoints,
                               bool piecewise_monotone)
    : fn_(std::move(fn)), breakpoints_(std::move(breakpoints)),
      piecewise_monotone_(piecewise_monotone) {}

double RadialFunction::operator()(double r) const { return fn_(r); }

Bound RadialFunction::bound(double a, double b, BoundMode mode, int samples) const {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    std::ostringstream os;
    os << "empty interval [" << a << ", " << b << "]";
    throw ArgumentError(os.str());
  }
  if (!(a > 0)) throw DomainError("annulus must lie in r > 0");
  auto pick = [mode](double x, double y) { return mode == BoundMode::Inf ? std::min(x, y) : std::max(x, y); };

  if (sum_ && sum_->monotonicity() != Monotonicity::Mixed) {
    const Monotonicity m = sum_->monotonicity();
    const bool left = (m == Monotonicity::Increasing) == (mode == BoundMode::Inf);
    return {checked((*sum_)(left ? a : b), left ? a : b), true};
  }

  std::vector<double> pts;
  if (!piecewise_monotone_) pts = log_spaced(a, b, std::max(samples, 2));
  pts.push_back(a);
  pts.push_back(b);
  for (double x : breakpoints_)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::size_t best_i = 0;
  double best = checked(fn_(pts[0]), pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double v = checked(fn_(pts[i]), pts[i]);
    if (pick(v, best) != best) {
      best = v;
      best_i = i;
    }
  }
  if (piecewise_monotone_) return {best, true};

  // Interior extremum: polish inside the neighbouring sample cells.
  const double lo = pts[best_i == 0 ? 0 : best_i - 1];
  const double hi = pts[std::min(best_i + 1, pts.size() - 1)];
  if (hi > lo) best = refine_extremum(fn_, lo, hi, mode, best);
  return {best, false};
}

RadialFunction as_function(const RadialWeight& w) {
  if (auto s = w.power_sum()) return RadialFunction(std::move(*s));
  const auto& t = std::get<Tabulated>(w.variant());
  return RadialFunction([w](double r) { return w(r); }, t.grid, true);
}

Bound annulus_bound(const RadialWeight& w, double a, double b, BoundMode mode, int samples) {
  if (!(a < b)) throw ArgumentError("annulus_bound: empty interval");
  if (a < w.min_radius()) throw DomainError("annulus_bound: interval starts below the weight's domain");
  return as_function(w).bound(a, b, mode, samples);
}

// ---------------------------------------------------------------- ProblemSpec

namespace {

std::vector<double> table_nodes(const RadialWeight& w) {
  if (const auto* t = std::get_if<Tabulated>(&w.variant())) return t->grid;
  return {};
}

std::vector<double> merged_nodes(const ProblemSpec& spec) {
  auto a = table_nodes(spec.b());
  auto b = table_nodes(spec.c());
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace

ProblemSpec::ProblemSpec(int dimension, double R0, RadialWeight b, RadialWeight c)
    : dimension_(dimension), R0_(R0), b_(std::move(b)), c_(std::move(c)) {
  if (dimension_ < 3) throw ArgumentError("dimension must be at least 3");
  if (!(R0_ > 0) || !std::isfinite(R0_)) throw ArgumentError("R0 must be positive and finite");
  if (b_.min_radius() > R0_ || c_.min_radius() > R0_)
    throw ArgumentError("tabulated weights must cover r >= R0");

  // b >= 0: the gradient coefficient enters through its absolute value.
  if (const auto* p = std::get_if<PowerLaw>(&b_.variant())) {
    if (p->coeff < 0) throw ArgumentError("b must be nonnegative");
  } else if (const auto* t = std::get_if<Tabulated>(&b_.variant())) {
    for (double v : t->values)
      if (v < 0) throw ArgumentError("b must be nonnegative");
  } else {
    const PowerSum s = *b_.power_sum();
    if (s.limit_at_infinity() < 0) throw ArgumentError("b must be nonnegative");
    for (double r : log_spaced(R0_, R0_ * std::pow(2.0, 60), 600)) {
      double scale = 0.0;
      for (const auto& t : s.terms()) scale += std::abs(t.coeff) * std::pow(r, t.exponent);
      if (s(r) < -1e-12 * scale)
        throw ArgumentError("b must be nonnegative (negative at r=" + std::to_string(r) + ")");
    }
  }
}

ProblemSpec ProblemSpec::rescaled(double s) const {
  return ProblemSpec(dimension_, R0_ / s, b_.rescaled(s, s), c_.rescaled(s, s * s));
}

RadialFunction r_times_b(const ProblemSpec& spec) {
  if (auto s = spec.b().power_sum()) return RadialFunction(s->times_power(1.0));
  return RadialFunction([b = spec.b()](double r) { return r * b(r); }, table_nodes(spec.b()), false);
}

RadialFunction r2_times_c(const ProblemSpec& spec) {
  if (auto s = spec.c().power_sum()) return RadialFunction(s->times_power(2.0));
  return RadialFunction([c = spec.c()](double r) { return r * r * c(r); }, table_nodes(spec.c()), false);
}

RadialFunction gap(const ProblemSpec& spec) {
  const auto bs = spec.b().power_sum();
  const auto cs = spec.c().power_sum();
  if (bs && cs) return RadialFunction(*cs - (*bs * *bs).scaled(0.25));
  return RadialFunction(
      [b = spec.b(), c = spec.c()](double r) {
        const double bv = b(r);
        return c(r) - 0.25 * bv * bv;
      },
      merged_nodes(spec), false);
}

RadialFunction r2_times_gap(const ProblemSpec& spec) {
  const RadialFunction g = gap(spec);
  if (g.power_sum()) return RadialFunction(g.power_sum()->times_power(2.0));
  return RadialFunction([g](double r) { return r * r * g(r); }, merged_nodes(spec), false);
}

AsymptoticProfile asymptotic_profile(const ProblemSpec& spec, double R_max) {
  if (!(R_max >= 4.0 * spec.R0())) throw ArgumentError("asymptotic_profile: R_max must be >= 4 R0");
  AsymptoticProfile p;
  const auto bs = spec.b().power_sum();
  const auto cs = spec.c().power_sum();
  if (bs && cs) {
    p.tau = bs->times_power(1.0).limit_at_infinity();
    p.liminf_r_b = p.tau;
    p.liminf_r2_c = cs->times_power(2.0).limit_at_infinity();
    p.limsup_r2_c = p.liminf_r2_c;
    p.liminf_r2_gap = r2_times_gap(spec).power_sum()->limit_at_infinity();
    p.exact = true;
    return p;
  }

  const RadialFunction rb = r_times_b(spec);
  const RadialFunction r2c = r2_times_c(spec);
  const RadialFunction r2g = r2_times_gap(spec);
  std::vector<double> radii, rb_sup, rb_inf, c_inf, c_sup, g_inf;
  for (double lo = spec.R0(); 2.0 * lo <= R_max * (1 + 1e-12); lo *= 2.0) {
    const double hi = 2.0 * lo;
    radii.push_back(lo);
    rb_sup.push_back(rb.bound(lo, hi, BoundMode::Sup).value);
    rb_inf.push_back(rb.bound(lo, hi, BoundMode::Inf).value);
    c_inf.push_back(r2c.bound(lo, hi, BoundMode::Inf).value);
    c_sup.push_back(r2c.bound(lo, hi, BoundMode::Sup).value);
    g_inf.push_back(r2g.bound(lo, hi, BoundMode::Inf).value);
  }
  p.tau = std::max(0.0, tail_value(radii, rb_sup));
  p.liminf_r_b = std::max(0.0, tail_value(radii, rb_inf));
  p.liminf_r2_c = tail_value(radii, c_inf);
  p.limsup_r2_c = std::max(p.liminf_r2_c, tail_value(radii, c_sup));
  p.liminf_r2_gap = tail_value(radii, g_inf);
  p.exact = false;
  return p;
}

std::vector<double> log_spaced(double a, double b, int count) {
  std::vector<double> out;
  if (count <= 0) return out;
  if (count == 1) return {a};
  out.reserve(static_cast<std::size_t>(count));
  const double la = std::log(a);
  const double lb = std::log(b);
  for (int i = 0; i < count; ++i) out.push_back(std::exp(la + (lb - la) * i / (count - 1)));
  out.front() = a;
  out.back() = b;
  return out;
}

}  // namespace liouville
