#include "liouville/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

namespace {

// Kronrod 15-point abscissae (positive half, descending) and weights; Gauss
// 7-point weights sit on the odd Kronrod nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  auto sample = [&f](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw NumericalError("non-finite integrand", x);
    return v;
  };
  const double fc = sample(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = sample(c - dx) + sample(c + dx);
    k += kWgk[j] * s;
    if (j % 2 == 1) g += kWg[j / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

double unit_sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

QuadratureResult power_annulus_integral(double alpha, double R, double T, int N,
                                        Normalization normalization) {
  if (!(R > 0) || !(R < T)) {
    std::ostringstream os;
    os << "power_annulus_integral needs 0 < R < T, got R=" << R << " T=" << T;
    throw ArgumentError(os.str());
  }
  const double K = normalization == Normalization::Paper ? 1.0 : unit_sphere_area(N);
  const double p = alpha + N;
  double value;
  if (p == 0.0) {
    value = std::log(T / R);
  } else {
    // T^p - R^p = R^p (exp(p ln(T/R)) - 1), stable for thin shells.
    value = std::pow(R, p) * std::expm1(p * std::log(T / R)) / p;
  }
  return {K * value, 0.0, true};
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
  if (a == b) return {0.0, 0.0, false};
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  int subdivisions = 1;
  while (error > std::max(options.abs_tol, options.rel_tol * std::abs(total)) &&
         subdivisions < options.max_subdivisions) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;
    }
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {total, error, false};
}

QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints,
                                  const QuadratureOptions& options) {
  QuadratureResult out{0.0, 0.0, false};
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const QuadratureResult part = integrate(f, breakpoints[i], breakpoints[i + 1], options);
    out.value += part.value;
    out.abs_error_estimate += part.abs_error_estimate;
  }
  return out;
}

Annulus::Annulus(double inner_, double outer_) : inner(inner_), outer(outer_) {
  if (!(inner > 0) || !(inner < outer) || !std::isfinite(outer))
    throw ArgumentError("annulus needs 0 < inner < outer");
}

// ---------------------------------------------------------------- cutoff

CutoffTestFunction::CutoffTestFunction(double R, double gamma, int N)
    : R_(R), gamma_(gamma), beta_(0.5 * (N - 2)), N_(N) {
  if (!(R > 0) || !std::isfinite(R)) throw ArgumentError("cutoff radius R must be positive");
  if (!(gamma > 1) || !std::isfinite(gamma)) throw ArgumentError("cutoff gamma must exceed 1");
  if (N < 3) throw ArgumentError("dimension must be at least 3");
}

std::array<double, 4> CutoffTestFunction::breakpoints() const {
  return {0.5 * R_, R_, gamma_ * R_, 2.0 * gamma_ * R_};
}

double CutoffTestFunction::psi(double r) const {
  const auto [a, b, c, d] = breakpoints();
  if (r <= a || r >= d) return 0.0;
  if (r >= b && r <= c) return 1.0;
  if (r < b) {
    const double t = (r - a) / (b - a);
    return t * t * (3.0 - 2.0 * t);
  }
  const double t = (r - c) / (d - c);
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

double CutoffTestFunction::dpsi(double r) const {
  const auto [a, b, c, d] = breakpoints();
  if (r <= a || r >= d || (r >= b && r <= c)) return 0.0;
  if (r < b) {
    const double t = (r - a) / (b - a);
    return 6.0 * t * (1.0 - t) / (b - a);
  }
  const double t = (r - c) / (d - c);
  return -6.0 * t * (1.0 - t) / (d - c);
}

CutoffValue cutoff_eval(const CutoffTestFunction& tf, double r) {
  const double psi = tf.psi(r);
  const double dpsi = tf.dpsi(r);
  if (psi == 0.0 && dpsi == 0.0) return {0.0, 0.0};
  const double rb = std::pow(r, -tf.beta());
  return {rb * psi, -tf.beta() * rb / r * psi + rb * dpsi};
}

EnergyAndMasses energy_and_masses(const CutoffTestFunction& tf, std::span<const RadialWeight> weights,
                                  Normalization normalization, const QuadratureOptions& options) {
  const double K = normalization == Normalization::Paper ? 1.0 : unit_sphere_area(tf.dimension());
  const auto bp = tf.breakpoints();
  const int N = tf.dimension();
  EnergyAndMasses out;
  out.energy = integrate_panels(
      [&](double r) {
        const double d = cutoff_eval(tf, r).dphi;
        return d * d * std::pow(r, N - 1);
      },
      bp, options);
  for (const auto& w : weights) {
    out.masses.push_back(integrate_panels(
        [&](double r) {
          const double p = cutoff_eval(tf, r).phi;
          return w(r) * p * p * std::pow(r, N - 1);
        },
        bp, options));
  }
  auto scale = [K](QuadratureResult& q) {
    q.value *= K;
    q.abs_error_estimate *= K;
  };
  scale(out.energy);
  for (auto& m : out.masses) scale(m);
  return out;
}

QuadratureResult shell_energy(const CutoffTestFunction& tf, double from, double to,
                              const QuadratureOptions& options) {
  const int N = tf.dimension();
  return integrate(
      [&](double r) {
        const double d = cutoff_eval(tf, r).dphi;
        return d * d * std::pow(r, N - 1);
      },
      from, to, options);
}

double inner_shell_bound(double beta) { return beta * beta * std::numbers::ln2 + 4.0 * beta + 6.0; }

GradientBoundCheck verify_gradient_bound(const CutoffTestFunction& tf) {
  GradientBoundCheck out;
  out.lhs = energy_and_masses(tf, {}).energy.value;
  const double beta = tf.beta();
  out.rhs = 2.0 * inner_shell_bound(beta) + beta * beta * std::log(tf.gamma());
  out.holds = out.lhs <= out.rhs;
  return out;
}

}  // namespace liouville
