#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "liouville/errors.hpp"
#include "liouville/hardy_forms.hpp"
#include "test_oracles.hpp"

using namespace liouville;

namespace {

constexpr double kPi = std::numbers::pi;

ProblemSpec power_spec(int N, double bk, double ba, double ck, double ca, double R0 = 1.0) {
  return ProblemSpec(N, R0, RadialWeight::power(bk, ba), RadialWeight::power(ck, ca));
}

/// Discrete Rayleigh quotient of the log-variable Hardy form, written out directly.
double log_rayleigh(const std::vector<double>& w, double h, double beta) {
  double num = 0, den = 0;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i <= n; ++i) {
    const double a = i == 0 ? 0.0 : w[i - 1];
    const double b = i == n ? 0.0 : w[i];
    num += (b - a) * (b - a) / h;
  }
  for (double x : w) {
    num += beta * beta * h * x * x;
    den += h * x * x;
  }
  return num / den;
}

double dense_smallest(const TridiagonalPencil& p) {
  const int n = static_cast<int>(p.diag.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = p.diag[i];
    M(i, i) = p.mass[i];
    if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = p.off[i];
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST(ExteriorHardy, ContinuumTargets) {
  struct Case { int N; double S; double target; };
  for (const Case& c : {Case{3, 2 * kPi, 0.5}, Case{4, kPi, 2.0}, Case{5, kPi, 3.25}}) {
    const EigenResult r = exterior_hardy_minimum(c.N, 1.0, std::exp(c.S), 4000);
    EXPECT_NEAR(r.lambda_min, c.target, 1e-4 * c.target) << "N=" << c.N;
    EXPECT_NEAR(oracle::log_hardy_minimum(c.N, c.S), c.target, 1e-12);
    const double beta = 0.5 * (c.N - 2);
    EXPECT_GE(r.lambda_min, beta * beta);
  }
}

TEST(ExteriorHardy, ScaleInvariant) {
  const double a = exterior_hardy_minimum(3, 1.0, 100.0, 500).lambda_min;
  const double b = exterior_hardy_minimum(3, 7.0, 700.0, 500).lambda_min;
  EXPECT_NEAR(a, b, 1e-10 * a);
}

TEST(ExteriorHardy, SecondOrderConvergence) {
  const double S = 3.0, exact = oracle::log_hardy_minimum(3, S);
  const double e1 = std::abs(exterior_hardy_minimum(3, 1.0, std::exp(S), 199).lambda_min - exact);
  const double e2 = std::abs(exterior_hardy_minimum(3, 1.0, std::exp(S), 399).lambda_min - exact);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
}

TEST(ExteriorHardy, MinimizerRayleighQuotient) {
  const EigenResult r = exterior_hardy_minimum(4, 1.0, 50.0, 300);
  ASSERT_EQ(r.minimizer.size(), 300u);
  EXPECT_NEAR(log_rayleigh(r.minimizer, r.grid.h(), 1.0), r.lambda_min, 1e-8 * r.lambda_min);
  double norm = 0;
  for (double x : r.minimizer) norm += r.grid.h() * x * x;
  EXPECT_NEAR(norm, 1.0, 1e-10);
}

TEST(ExteriorHardy, CoarseGridWarns) {
  EXPECT_TRUE(exterior_hardy_minimum(3, 1.0, 1.1, 16).resolution_warning);
  EXPECT_FALSE(exterior_hardy_minimum(3, 1.0, 10.0, 2000).resolution_warning);
}

TEST(Pencil, SturmBisectionMatchesDenseSolver) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double bk = u(rng), ba = -1.0 - 0.3 * u(rng), ck = u(rng), ca = -2.0 + 0.2 * u(rng);
    const ProblemSpec spec = power_spec(3 + trial % 4, bk, ba, ck, ca);
    const FormDiscretization fd(spec, Annulus(1.0, std::exp(4 * u(rng))), 120);
    const TridiagonalPencil p = fd.pencil(0.5 + u(rng));
    const double ref = dense_smallest(p);
    EXPECT_NEAR(smallest_eigenvalue(p), ref, 1e-9 * std::abs(ref));
    const Eigenpair ep = smallest_eigenpair(p);
    EXPECT_NEAR(rayleigh_quotient(p, ep.vector), ref, 1e-9 * std::abs(ref));
  }
}

TEST(Pencil, NegativeCountBrackets) {
  const FormDiscretization fd(power_spec(3, 0, 0, 1, -2), Annulus(1.0, 100.0), 50);
  const TridiagonalPencil p = fd.pencil(1.0);
  const double mu = smallest_eigenvalue(p);
  EXPECT_EQ(negative_count(p, 0.999 * mu), 0);
  EXPECT_EQ(negative_count(p, 1.001 * mu), 1);
}

TEST(Pencil, NoPositiveMassIsArgumentError) {
  TridiagonalPencil p{{2, 2}, {-1}, {0, 0}};
  EXPECT_THROW(smallest_eigenvalue(p), ArgumentError);
}

TEST(WeightedHardyResidual, ZeroWeightOfT) {
  const LogGrid g = LogGrid::radial(1.0, 20.0, 200);
  std::vector<double> phi(g.n());
  for (int i = 0; i < g.n(); ++i) phi[i] = std::sin(kPi * (g.s(i) - g.S0()) / (g.S1() - g.S0()));
  const double lhs = lemma1_residual(RadialWeight::power(1, -1), 0.0, phi, g, 3);
  EXPECT_GT(lhs, 0.0);
  EXPECT_GE(lemma1_residual(RadialWeight::power(1, -1), 0.5, phi, g, 3), -1e-8 * lhs);
}

TEST(WeightedHardyResidual, PowerWeightAtTOne) {
  const LogGrid g = LogGrid::radial(1.0, 1e3, 400);
  std::vector<double> phi(g.n());
  for (int i = 0; i < g.n(); ++i) phi[i] = std::exp(-0.5 * g.s(i)) * std::sin(kPi * (g.s(i) - g.S0()) / (g.S1() - g.S0()));
  for (double m : {0.3, 0.5, 1.0})
    EXPECT_GE(lemma1_residual(RadialWeight::power(1, -m), 1.0, phi, g, 3), 0.0) << "m=" << m;
}

TEST(WeightedHardyResidual, NonPositiveWeightIsDomainError) {
  const LogGrid g = LogGrid::radial(1.0, 5.0, 20);
  const std::vector<double> phi(g.n(), 1.0);
  EXPECT_THROW(lemma1_residual(RadialWeight::power(-1, 0), 0.5, phi, g, 3), DomainError);
}

TEST(WeightedHardyResidual, RandomDrawsNeverViolate) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int N = 3 + trial % 5;
    const LogGrid g = LogGrid::radial(1.0, std::exp(0.5 + 4 * u(rng)), 60);
    std::vector<double> phi(g.n());
    for (double& x : phi) x = 2 * u(rng) - 1;
    SumOfPowerLaws E;
    for (int k = 0; k < 3; ++k) E.terms.push_back({0.1 + u(rng), -4 + 6 * u(rng)});
    const RadialWeight w(E);
    const double T = u(rng);
    const double lhs = lemma1_residual(w, 0.0, phi, g, N);
    EXPECT_GE(lemma1_residual(w, T, phi, g, N), -1e-8 * std::abs(lhs)) << "trial " << trial;
  }
}

TEST(OptimalT, Examples) {
  EXPECT_DOUBLE_EQ(optimal_t(1.0, 4.0), 1.0);
  EXPECT_DOUBLE_EQ(optimal_t(1.0, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(optimal_t(4.0, 4.0), 0.75);
  EXPECT_NEAR(t_form_bound(0.75, 4.0, 4.0), 9.0, 1e-12);
  EXPECT_NEAR(optimal_form_bound(4.0, 4.0), 9.0, 1e-12);
  EXPECT_DOUBLE_EQ(t_form_bound(0.5, 3.0, 0.0), 3.0);
}

TEST(OptimalT, IsTheMinimizerOfTheBound) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.01, 10);
  for (int i = 0; i < 50; ++i) {
    const double E = u(rng), B = u(rng);
    const double best = oracle::scan_min([&](double t) { return t_form_bound(t, E, B); }, 0.5001, 20, 400001);
    EXPECT_NEAR(t_form_bound(optimal_t(E, B), E, B), optimal_form_bound(E, B), 1e-10 * best);
    EXPECT_LE(optimal_form_bound(E, B), best * (1 + 1e-12));
    EXPECT_NEAR(optimal_form_bound(E, B), best, 1e-4 * best);
  }
}

TEST(FormMinimum, PureInverseSquareAtThreshold) {
  const ProblemSpec spec = power_spec(3, 0, 0, 1.0, -2);
  const FormMinimum fm = form_minimum(spec, Annulus(1.0, std::exp(2 * kPi)), 800, default_t_grid());
  EXPECT_NEAR(fm.mu, 0.5, 0.005);
  ASSERT_TRUE(fm.certificate.has_value());
  EXPECT_LT(fm.certificate->verified_ratio, 1.0);
}

TEST(FormMinimum, WithGradientTerm) {
  const ProblemSpec spec = power_spec(4, 1.0, -1, 3.0, -2);
  const FormMinimum fm = form_minimum(spec, Annulus(1.0, std::exp(2 * kPi)), 800, default_t_grid());
  const double expected = std::pow(std::sqrt(1.25) + 0.5, 2) / 3.0;
  EXPECT_NEAR(expected, 0.8727, 1e-4);
  EXPECT_NEAR(fm.mu, expected, 0.01 * expected);
  EXPECT_NEAR(fm.t_star, optimal_t(1.25, 1.0), 0.02);
}

TEST(FormMinimum, SubcriticalHasNoCertificate) {
  const ProblemSpec spec = power_spec(3, 0, 0, 0.2, -2);
  for (double S : {2 * kPi, 8 * kPi}) {
    const FormMinimum fm = form_minimum(spec, Annulus(1.0, std::exp(S)), 600, default_t_grid());
    EXPECT_GE(fm.mu, 1.25 * (1 - 1e-3));
    EXPECT_FALSE(fm.certificate.has_value());
  }
}

TEST(FormMinimum, ZeroPotentialIsArgumentError) {
  const ProblemSpec spec = power_spec(3, 1, -1, 0, 0);
  EXPECT_THROW(form_minimum(spec, Annulus(1.0, 10.0), 100, default_t_grid()), ArgumentError);
  const std::vector<double> bad{0.5};
  EXPECT_THROW(form_minimum(power_spec(3, 0, 0, 1, -2), Annulus(1.0, 10.0), 100, bad), ArgumentError);
}

TEST(FormMinimum, DefaultTGrid) {
  const std::vector<double> g = default_t_grid();
  ASSERT_EQ(g.size(), 64u);
  EXPECT_NEAR(g.front() - 0.5, 1e-3, 1e-15);
  EXPECT_NEAR(g.back() - 0.5, 49.5, 1e-10);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
}

TEST(FormMinimum, OptimumSitsAtTheEnvelopePoint) {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const double bk = 0.2 + 2 * u(rng), ba = -1 + 0.5 * u(rng), ck = 0.5 + 3 * u(rng), ca = -2 + u(rng);
    const ProblemSpec spec = power_spec(3 + trial % 3, bk, ba, ck, ca);
    const FormDiscretization fd(spec, Annulus(1.0, std::exp(3 + 5 * u(rng))), 300);
    const FormMinimum fm = form_minimum(spec, Annulus(1.0, std::exp(fd.grid().S1())), 300, default_t_grid());
    const Eigenpair ep = fd.minimizer(fm.t_star);
    const double t_env = optimal_t(fd.energy(ep.vector), fd.b2_mass(ep.vector));
    EXPECT_NEAR(fm.t_star, t_env, 0.02 * t_env) << "trial " << trial;
    EXPECT_LE(fm.mu, fd.mu(t_env) * (1 + 1e-6));
  }
}

TEST(FormMinimum, CertificateVerifiesByQuadrature) {
  const ProblemSpec spec = power_spec(3, 0.5, -1, 2.0, -2);
  const FormMinimum fm = form_minimum(spec, Annulus(1.0, std::exp(4 * kPi)), 600, default_t_grid());
  ASSERT_TRUE(fm.certificate.has_value());
  const FormCertificate& c = *fm.certificate;
  std::vector<double> w(c.phi.size());
  for (int i = 0; i < c.grid.n(); ++i) w[i] = c.phi[i] * std::pow(c.grid.r(i), spec.beta());
  const ContinuousForms cf = continuous_forms(spec, c.grid, w);
  EXPECT_NEAR(c.verified_ratio, optimal_form_bound(cf.energy, cf.b2_mass) / cf.c_mass, 1e-8);
  EXPECT_NEAR(c.verified_ratio, c.ratio, 0.01 * c.ratio);
}
