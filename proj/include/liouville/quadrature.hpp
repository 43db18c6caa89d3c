#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "liouville/weights.hpp"

namespace liouville {

/// `Paper` sets K_N = 1 (no sphere area); `Geometric` keeps the sphere area.
enum class Normalization { Paper, Geometric };

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  bool exact = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_subdivisions = 2000;
};

/// Surface area of the unit sphere in R^N.
double unit_sphere_area(int N);

/// Closed form of  ∫_{R<|x|<T} |x|^alpha dx  (logarithmic case when alpha + N == 0).
QuadratureResult power_annulus_integral(double alpha, double R, double T, int N,
                                        Normalization normalization = Normalization::Paper);

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
/// Throws NumericalError at the first non-finite integrand sample.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Same, over consecutive panels [p0, p1], [p1, p2], ... so that kinks at the
/// panel boundaries do not slow convergence.
QuadratureResult integrate_panels(const std::function<double(double)>& f,
                                  std::span<const double> breakpoints,
                                  const QuadratureOptions& options = {});

struct Annulus {
  Annulus(double inner, double outer);
  double inner;
  double outer;
};

/// φ(r) = r^{-β} ψ(r) with ψ = 0 below R/2 and above 2γR, ψ = 1 on [R, γR] and
/// cubic smoothstep transitions in between. Max |ψ'| is 3/R on the inner shell
/// and 1.5/(γR) on the outer one.
class CutoffTestFunction {
 public:
  CutoffTestFunction(double R, double gamma, int N);

  double R() const { return R_; }
  double gamma() const { return gamma_; }
  double beta() const { return beta_; }
  int dimension() const { return N_; }

  double psi(double r) const;
  double dpsi(double r) const;

  /// Transition and plateau boundaries: R/2, R, γR, 2γR.
  std::array<double, 4> breakpoints() const;
  Annulus support() const { return Annulus(0.5 * R_, 2.0 * gamma_ * R_); }

 private:
  double R_;
  double gamma_;
  double beta_;
  int N_;
};

struct CutoffValue {
  double phi = 0.0;
  double dphi = 0.0;
};

CutoffValue cutoff_eval(const CutoffTestFunction& tf, double r);

struct EnergyAndMasses {
  QuadratureResult energy;                ///< ∫ |∇φ|^2
  std::vector<QuadratureResult> masses;   ///< ∫ w φ^2, one per weight
};

EnergyAndMasses energy_and_masses(const CutoffTestFunction& tf, std::span<const RadialWeight> weights,
                                  Normalization normalization = Normalization::Paper,
                                  const QuadratureOptions& options = {});

/// ∫|∇φ|^2 restricted to one of the three shells (K_N = 1).
QuadratureResult shell_energy(const CutoffTestFunction& tf, double from, double to,
                              const QuadratureOptions& options = {});

/// β^2 ln 2 + 4β + 6: the inner-shell energy bound.
double inner_shell_bound(double beta);

struct GradientBoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// lhs = ∫|∇φ|^2 (K_N = 1), rhs = 2(β^2 ln 2 + 4β + 6) + β^2 ln γ.
GradientBoundCheck verify_gradient_bound(const CutoffTestFunction& tf);

}  // namespace liouville
