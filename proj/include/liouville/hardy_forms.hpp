#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "liouville/quadrature.hpp"
#include "liouville/weights.hpp"

namespace liouville {

/// Symmetric tridiagonal matrix A with a diagonal (lumped) mass M.
struct TridiagonalPencil {
  std::vector<double> diag;  ///< A_ii
  std::vector<double> off;   ///< A_{i,i+1}
  std::vector<double> mass;  ///< M_ii, may vanish or change sign
};

/// Negative pivots in the LDL^T factorization of A - x M. For positive
/// definite A and x > 0 this counts the eigenvalues of A v = μ M v in (0, x).
int negative_count(const TridiagonalPencil& pencil, double x);

double rayleigh_quotient(const TridiagonalPencil& pencil, std::span<const double> v);

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;  ///< normalized to v^T M v = 1
};

/// Smallest positive eigenvalue of A v = μ M v (A positive definite) by
/// Sturm-sequence bisection. Throws ArgumentError when M has no positive entry.
double smallest_eigenvalue(const TridiagonalPencil& pencil, double rel_tol = 1e-13);

/// Same, plus the eigenvector by inverse iteration.
Eigenpair smallest_eigenpair(const TridiagonalPencil& pencil, double rel_tol = 1e-13);

/// Uniform grid in s = ln r with n interior nodes; φ vanishes at S0 and S1.
class LogGrid {
 public:
  LogGrid(double S0, double S1, int n);
  static LogGrid radial(double r0, double r1, int n) { return LogGrid(std::log(r0), std::log(r1), n); }

  double S0() const { return S0_; }
  double S1() const { return S1_; }
  int n() const { return n_; }
  double h() const { return (S1_ - S0_) / (n_ + 1); }
  /// Interior node i = 0 .. n-1.
  double s(int i) const { return S0_ + (i + 1) * h(); }
  double r(int i) const { return std::exp(s(i)); }

 private:
  double S0_;
  double S1_;
  int n_;
};

struct EigenResult {
  double lambda_min = 0.0;
  /// Node values of w = r^β φ, normalized so that h Σ w_i^2 = 1.
  std::vector<double> minimizer;
  LogGrid grid{0.0, 1.0, 16};
  /// Estimated discretization error exceeds 1e-3 relative.
  bool resolution_warning = false;
};

/// min ∫ r^{N-1} φ'^2 dr / ∫ r^{N-3} φ^2 dr over φ vanishing at R0 and R1.
/// The continuum value is β^2 + π^2 / ln(R1/R0)^2.
EigenResult exterior_hardy_minimum(int N, double R0, double R1, int n);

/// LHS - RHS of  ∫|∇φ|^2 >= (T - T^2) ∫ (|∇E|/E)^2 φ^2 + T ∫ (-ΔE/E) φ^2
/// for the piecewise-linear (in ln r) interpolant of `phi` on `grid`.
/// Throws DomainError when E <= 0 at a node.
double lemma1_residual(const RadialWeight& E, double T, std::span<const double> phi,
                       const LogGrid& grid, int N);

/// 1/2 + sqrt(b2_mass) / (4 sqrt(energy)): the t minimizing the t-form bound.
double optimal_t(double energy, double b2_mass);

/// 2t E + t/(2(2t-1)) B, with the t -> 1/2 limit E when B = 0.
double t_form_bound(double t, double energy, double b2_mass);

/// (sqrt(E) + sqrt(B/4))^2 = min over t of t_form_bound.
double optimal_form_bound(double energy, double b2_mass);

/// Lumped finite-difference discretization, in s = ln r with φ = e^{-βs} w,
/// of the three quadratic forms  ∫|∇φ|^2, ∫ b^2 φ^2, ∫ c φ^2  on an annulus.
class FormDiscretization {
 public:
  FormDiscretization(const ProblemSpec& spec, const Annulus& annulus, int n);

  const LogGrid& grid() const { return grid_; }
  const ProblemSpec& spec() const { return spec_; }
  bool has_gradient_term() const { return has_b_; }

  /// Pencil of  2t·energy + t/(2(2t-1))·b2-mass  against the c-mass.
  TridiagonalPencil pencil(double t) const;
  /// Smallest generalized eigenvalue μ(t).
  double mu(double t) const;
  Eigenpair minimizer(double t) const;

  double energy(std::span<const double> w) const;
  double b2_mass(std::span<const double> w) const;
  double c_mass(std::span<const double> w) const;

 private:
  ProblemSpec spec_;
  LogGrid grid_;
  std::vector<double> r2b2_;
  std::vector<double> r2c_;
  bool has_b_ = false;
};

struct FormCertificate {
  double t_star = 0.0;
  /// Node values of φ on `grid` (zero at both ends).
  std::vector<double> phi;
  LogGrid grid{0.0, 1.0, 16};
  double ratio = 0.0;           ///< discrete μ(t*)
  double verified_ratio = 0.0;  ///< (√E + √(B/4))^2 / C by quadrature on the interpolant
};

struct FormMinimum {
  double mu = 0.0;
  double t_star = 0.0;
  std::optional<FormCertificate> certificate;
  /// Set when the discrete μ < 1 but quadrature re-verification did not confirm it.
  std::optional<double> rejected_verified_ratio;
};

/// 64 points with t - 1/2 log-spaced in [1e-3, 49.5].
std::vector<double> default_t_grid();

/// Minimizes μ(t) over `t_grid` (then refines); returns a certificate of
/// violation of the necessary inequality when μ < 1 is confirmed by quadrature.
/// Throws ArgumentError for t <= 1/2 or when c <= 0 on the whole annulus.
FormMinimum form_minimum(const ProblemSpec& spec, const Annulus& annulus, int n,
                         std::span<const double> t_grid);

/// Quadrature re-evaluation of (energy, b2-mass, c-mass) for the interpolant
/// of w = r^β φ that is linear in s between nodes.
struct ContinuousForms {
  double energy = 0.0;
  double b2_mass = 0.0;
  double c_mass = 0.0;
};
ContinuousForms continuous_forms(const ProblemSpec& spec, const LogGrid& grid,
                                 std::span<const double> w, double rel_tol = 1e-10);

}  // namespace liouville
