#include "liouville/hardy_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

// ---------------------------------------------------------------- tridiagonal pencils

int negative_count(const TridiagonalPencil& p, double x) {
  const std::size_t n = p.diag.size();
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pivot = p.diag[i] - x * p.mass[i];
    if (i > 0) pivot -= p.off[i - 1] * p.off[i - 1] / d;
    if (pivot == 0.0) pivot = -std::numeric_limits<double>::epsilon() * (std::abs(p.diag[i]) + 1e-300);
    if (pivot < 0) ++count;
    d = pivot;
  }
  return count;
}

double rayleigh_quotient(const TridiagonalPencil& p, std::span<const double> v) {
  double num = 0.0, den = 0.0;
  const std::size_t n = p.diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    num += p.diag[i] * v[i] * v[i];
    if (i + 1 < n) num += 2.0 * p.off[i] * v[i] * v[i + 1];
    den += p.mass[i] * v[i] * v[i];
  }
  return num / den;
}

namespace {

// Bracket [lo, hi] with count(lo) == 0 and count(hi) >= 1.
std::pair<double, double> bisect_smallest(const TridiagonalPencil& p, double rel_tol) {
  const std::size_t n = p.diag.size();
  if (n == 0 || p.off.size() + 1 != n || p.mass.size() != n)
    throw ArgumentError("malformed tridiagonal pencil");
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (p.mass[i] > 0) hi = std::min(hi, p.diag[i] / p.mass[i]);
  if (!std::isfinite(hi)) throw ArgumentError("mass matrix has no positive entry (weight vanishes on the annulus)");
  if (!(hi > 0)) throw ArgumentError("stiffness matrix is not positive definite");
  while (negative_count(p, hi) < 1) hi *= 1.0 + 1e-12;
  double lo = 0.0;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (negative_count(p, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

// Solve (A - σ M) x = rhs for tridiagonal A - σM (Thomas algorithm).
std::vector<double> solve_shifted(const TridiagonalPencil& p, double sigma, std::vector<double> rhs) {
  const std::size_t n = p.diag.size();
  std::vector<double> c(n, 0.0);
  double denom = p.diag[0] - sigma * p.mass[0];
  if (denom == 0.0) denom = 1e-300;
  if (n > 1) c[0] = p.off[0] / denom;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = p.diag[i] - sigma * p.mass[i] - p.off[i - 1] * c[i - 1];
    if (denom == 0.0) denom = 1e-300;
    if (i + 1 < n) c[i] = p.off[i] / denom;
    rhs[i] = (rhs[i] - p.off[i - 1] * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

}  // namespace

double smallest_eigenvalue(const TridiagonalPencil& pencil, double rel_tol) {
  const auto [lo, hi] = bisect_smallest(pencil, rel_tol);
  return 0.5 * (lo + hi);
}

Eigenpair smallest_eigenpair(const TridiagonalPencil& p, double rel_tol) {
  const auto [lo, hi] = bisect_smallest(p, rel_tol);
  const std::size_t n = p.diag.size();
  // Shift at the lower end of the bracket keeps A - σM positive definite.
  std::vector<double> x(n, 1.0);
  for (int it = 0; it < 6; ++it) {
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = p.mass[i] * x[i];
    x = solve_shifted(p, lo, std::move(rhs));
    double norm = 0.0;
    for (double v : x) norm = std::max(norm, std::abs(v));
    if (!(norm > 0) || !std::isfinite(norm)) throw NumericalError("inverse iteration broke down", lo);
    for (double& v : x) v /= norm;
  }
  double mnorm = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mnorm += p.mass[i] * x[i] * x[i];
    sum += x[i];
  }
  const double scale = (sum < 0 ? -1.0 : 1.0) / std::sqrt(std::abs(mnorm));
  for (double& v : x) v *= scale;
  return {0.5 * (lo + hi), std::move(x)};
}

// ---------------------------------------------------------------- grids and Hardy minimum

LogGrid::LogGrid(double S0, double S1, int n) : S0_(S0), S1_(S1), n_(n) {
  if (!(S0 < S1) || !std::isfinite(S0) || !std::isfinite(S1)) throw ArgumentError("log grid needs S0 < S1");
  if (n < 16) throw ArgumentError("log grid needs at least 16 interior nodes");
}

namespace {

// ∫ (w'^2 + β^2 w^2) ds by lumped finite differences.
TridiagonalPencil shifted_laplacian(const LogGrid& g, double beta) {
  const std::size_t n = static_cast<std::size_t>(g.n());
  const double h = g.h();
  TridiagonalPencil p;
  p.diag.assign(n, 2.0 / h + beta * beta * h);
  p.off.assign(n - 1, -1.0 / h);
  p.mass.assign(n, h);
  return p;
}

}  // namespace

EigenResult exterior_hardy_minimum(int N, double R0, double R1, int n) {
  if (N < 3) throw ArgumentError("dimension must be at least 3");
  if (!(R0 > 0) || !(R1 > R0)) throw ArgumentError("exterior_hardy_minimum needs 0 < R0 < R1");
  const LogGrid grid = LogGrid::radial(R0, R1, n);
  const double beta = 0.5 * (N - 2);
  const TridiagonalPencil pencil = shifted_laplacian(grid, beta);
  Eigenpair ep = smallest_eigenpair(pencil);

  EigenResult out;
  out.lambda_min = ep.value;
  out.minimizer = std::move(ep.vector);
  out.grid = grid;
  // Leading FD error of the first Dirichlet mode: k^2 (k h)^2 / 12 with k = π/S.
  const double k = std::numbers::pi / (grid.S1() - grid.S0());
  const double err = k * k * (k * grid.h()) * (k * grid.h()) / 12.0;
  out.resolution_warning = err > 1e-3 * out.lambda_min;
  return out;
}

// ---------------------------------------------------------------- weighted Hardy residual

double lemma1_residual(const RadialWeight& E, double T, std::span<const double> phi,
                       const LogGrid& grid, int N) {
  if (static_cast<int>(phi.size()) != grid.n()) throw ArgumentError("phi must have one value per grid node");
  for (int i = 0; i < grid.n(); ++i) {
    if (!(E(grid.r(i)) > 0)) {
      std::ostringstream os;
      os << "E must be positive, fails at r=" << grid.r(i);
      throw DomainError(os.str());
    }
  }
  const double h = grid.h();
  auto node = [&](int i) { return (i < 0 || i >= grid.n()) ? 0.0 : phi[static_cast<std::size_t>(i)]; };
  // Weight q(r) with  RHS = ∫ q φ^2 r^{N-1} dr.
  auto q = [&](double r) {
    const double e = E(r);
    const double d1 = E.derivative(r);
    const double lap = E.second_derivative(r) + (N - 1) / r * d1;
    const double g = d1 / e;
    return (T - T * T) * g * g + T * (-lap / e);
  };
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  double lhs = 0.0, rhs = 0.0;
  for (int i = -1; i < grid.n(); ++i) {
    const double sa = grid.S0() + (i + 1) * h;
    const double sb = sa + h;
    const double pa = node(i);
    const double pb = node(i + 1);
    if (pa == 0.0 && pb == 0.0) continue;
    const double slope = (pb - pa) / h;
    lhs += integrate([&](double s) { return std::exp((N - 2) * s) * slope * slope; }, sa, sb, opts).value;
    rhs += integrate(
               [&](double s) {
                 const double r = std::exp(s);
                 const double p = pa + slope * (s - sa);
                 return q(r) * p * p * std::pow(r, N);
               },
               sa, sb, opts)
               .value;
  }
  return lhs - rhs;
}

// ---------------------------------------------------------------- t-forms

double optimal_t(double energy, double b2_mass) {
  if (!(energy > 0)) throw ArgumentError("optimal_t needs positive energy");
  if (!(b2_mass >= 0)) throw ArgumentError("optimal_t needs nonnegative b^2 mass");
  return 0.5 + std::sqrt(b2_mass) / (4.0 * std::sqrt(energy));
}

double t_form_bound(double t, double energy, double b2_mass) {
  if (t < 0.5) throw ArgumentError("t must be >= 1/2");
  if (b2_mass == 0.0) return 2.0 * t * energy;
  if (t == 0.5) return std::numeric_limits<double>::infinity();
  return 2.0 * t * energy + t / (2.0 * (2.0 * t - 1.0)) * b2_mass;
}

double optimal_form_bound(double energy, double b2_mass) {
  const double s = std::sqrt(energy) + std::sqrt(0.25 * b2_mass);
  return s * s;
}

FormDiscretization::FormDiscretization(const ProblemSpec& spec, const Annulus& annulus, int n)
    : spec_(spec), grid_(LogGrid::radial(annulus.inner, annulus.outer, n)) {
  if (annulus.inner < spec.R0() * (1.0 - 1e-12)) throw ArgumentError("annulus must lie in the exterior domain");
  r2b2_.resize(static_cast<std::size_t>(n));
  r2c_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double r = grid_.r(i);
    const double b = spec.b()(r);
    r2b2_[i] = r * r * b * b;
    r2c_[i] = r * r * spec.c()(r);
    if (!std::isfinite(r2b2_[i]) || !std::isfinite(r2c_[i])) throw NumericalError("non-finite weight", r);
    has_b_ = has_b_ || r2b2_[i] > 0;
  }
  if (std::none_of(r2c_.begin(), r2c_.end(), [](double v) { return v > 0; }))
    throw ArgumentError("c-mass is singular: c <= 0 on the whole annulus");
}

TridiagonalPencil FormDiscretization::pencil(double t) const {
  if (t < 0.5 || (t == 0.5 && has_b_)) throw ArgumentError("t must exceed 1/2");
  const double h = grid_.h();
  const double beta = spec_.beta();
  const double kappa = has_b_ ? t / (2.0 * (2.0 * t - 1.0)) : 0.0;
  TridiagonalPencil p = shifted_laplacian(grid_, beta);
  for (std::size_t i = 0; i < p.diag.size(); ++i) {
    p.diag[i] = 2.0 * t * p.diag[i] + kappa * h * r2b2_[i];
    p.mass[i] = h * r2c_[i];
  }
  for (double& o : p.off) o *= 2.0 * t;
  return p;
}

double FormDiscretization::mu(double t) const { return smallest_eigenvalue(pencil(t), 1e-12); }

Eigenpair FormDiscretization::minimizer(double t) const { return smallest_eigenpair(pencil(t), 1e-13); }

double FormDiscretization::energy(std::span<const double> w) const {
  const TridiagonalPencil p = shifted_laplacian(grid_, spec_.beta());
  double e = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    e += p.diag[i] * w[i] * w[i];
    if (i + 1 < w.size()) e += 2.0 * p.off[i] * w[i] * w[i + 1];
  }
  return e;
}

double FormDiscretization::b2_mass(std::span<const double> w) const {
  double m = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) m += grid_.h() * r2b2_[i] * w[i] * w[i];
  return m;
}

double FormDiscretization::c_mass(std::span<const double> w) const {
  double m = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) m += grid_.h() * r2c_[i] * w[i] * w[i];
  return m;
}

std::vector<double> default_t_grid() {
  std::vector<double> out;
  for (double x : log_spaced(1e-3, 49.5, 64)) out.push_back(0.5 + x);
  return out;
}

ContinuousForms continuous_forms(const ProblemSpec& spec, const LogGrid& grid, std::span<const double> w,
                                 double rel_tol) {
  const double h = grid.h();
  const double beta = spec.beta();
  auto node = [&](int i) { return (i < 0 || i >= grid.n()) ? 0.0 : w[static_cast<std::size_t>(i)]; };
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  ContinuousForms out;
  for (int i = -1; i < grid.n(); ++i) {
    const double sa = grid.S0() + (i + 1) * h;
    const double sb = (i + 1 == grid.n()) ? grid.S1() : sa + h;
    const double wa = node(i);
    const double slope = (node(i + 1) - wa) / h;
    if (wa == 0.0 && slope == 0.0) continue;
    auto lin = [=](double s) { return wa + slope * (s - sa); };
    // With φ = e^{-βs} w:  r^{N-1} φ_r^2 dr = (w' - β w)^2 ds,  w(r) φ^2 r^{N-1} dr = r^2 w(r) w^2 ds.
    out.energy += integrate(
                      [&](double s) {
                        const double d = slope - beta * lin(s);
                        return d * d;
                      },
                      sa, sb, opts)
                      .value;
    out.b2_mass += integrate(
                       [&](double s) {
                         const double r = std::exp(s);
                         const double b = spec.b()(r);
                         const double v = lin(s);
                         return r * r * b * b * v * v;
                       },
                       sa, sb, opts)
                       .value;
    out.c_mass += integrate(
                      [&](double s) {
                        const double r = std::exp(s);
                        const double v = lin(s);
                        return r * r * spec.c()(r) * v * v;
                      },
                      sa, sb, opts)
                      .value;
  }
  return out;
}

FormMinimum form_minimum(const ProblemSpec& spec, const Annulus& annulus, int n,
                         std::span<const double> t_grid) {
  for (double t : t_grid)
    if (!(t > 0.5)) throw ArgumentError("t values must exceed 1/2");
  const FormDiscretization form(spec, annulus, n);

  double t_best = 0.5;
  double mu_best;
  if (!form.has_gradient_term()) {
    // μ(t) = 2t μ(1/2)/1: the infimum sits at the t -> 1/2 limit.
    mu_best = form.mu(0.5);
  } else {
    if (t_grid.empty()) throw ArgumentError("t grid must not be empty");
    std::vector<double> ts(t_grid.begin(), t_grid.end());
    std::sort(ts.begin(), ts.end());
    std::size_t ib = 0;
    mu_best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double m = form.mu(ts[i]);
      if (m < mu_best) {
        mu_best = m;
        ib = i;
      }
    }
    t_best = ts[ib];
    // Golden section on ln(t - 1/2) between the grid neighbours.
    if (ts.size() > 1) {
      auto f = [&](double u) { return form.mu(0.5 + std::exp(u)); };
      double a = std::log(ts[ib == 0 ? 0 : ib - 1] - 0.5);
      double b = std::log(ts[std::min(ib + 1, ts.size() - 1)] - 0.5);
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = b - g * (b - a), x2 = a + g * (b - a);
      double f1 = f(x1), f2 = f(x2);
      for (int it = 0; it < 60 && b - a > 1e-9; ++it) {
        if (f1 < f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - g * (b - a);
          f1 = f(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + g * (b - a);
          f2 = f(x2);
        }
      }
      const double u = f1 < f2 ? x1 : x2;
      const double fu = std::min(f1, f2);
      if (fu < mu_best) {
        mu_best = fu;
        t_best = 0.5 + std::exp(u);
      }
    }
    // The minimizer's own optimal t is a fixed point of the joint minimization.
    const Eigenpair ep = form.minimizer(t_best);
    const double t_fix = optimal_t(form.energy(ep.vector), form.b2_mass(ep.vector));
    if (t_fix > 0.5) {
      const double m = form.mu(t_fix);
      if (m < mu_best) {
        mu_best = m;
        t_best = t_fix;
      }
    }
  }

  FormMinimum out;
  out.mu = mu_best;
  out.t_star = t_best;
  if (mu_best < 1.0) {
    const Eigenpair ep = form.minimizer(t_best);
    const ContinuousForms cf = continuous_forms(spec, form.grid(), ep.vector);
    const double verified =
        cf.c_mass > 0 ? optimal_form_bound(cf.energy, cf.b2_mass) / cf.c_mass : std::numeric_limits<double>::infinity();
    if (verified < 1.0) {
      FormCertificate cert;
      cert.t_star = t_best;
      cert.grid = form.grid();
      cert.ratio = mu_best;
      cert.verified_ratio = verified;
      cert.phi.resize(ep.vector.size());
      for (int i = 0; i < form.grid().n(); ++i)
        cert.phi[static_cast<std::size_t>(i)] = std::exp(-spec.beta() * form.grid().s(i)) * ep.vector[static_cast<std::size_t>(i)];
      out.certificate = std::move(cert);
    } else {
      out.rejected_verified_ratio = verified;
    }
  }
  return out;
}

}  // namespace liouville
