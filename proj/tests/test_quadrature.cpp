#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"
#include "test_oracles.hpp"

using namespace liouville;

TEST(PowerAnnulusIntegral, LogarithmicCase) {
  const QuadratureResult q = power_annulus_integral(-3, 1, 2, 3);
  const double ref = oracle::simpson([](double r) { return 1.0 / r; }, 1, 2);
  EXPECT_NEAR(q.value, ref, 1e-12);
  EXPECT_NEAR(q.value, 0.693147, 1e-6);
  EXPECT_TRUE(q.exact);
  EXPECT_EQ(q.abs_error_estimate, 0.0);
}

TEST(PowerAnnulusIntegral, Polynomial) {
  const double ref = oracle::simpson([](double r) { return r * r; }, 1, 2);
  EXPECT_NEAR(power_annulus_integral(0, 1, 2, 3).value, ref, 1e-12);
  EXPECT_NEAR(ref, 7.0 / 3.0, 1e-12);
}

TEST(PowerAnnulusIntegral, VanishingInterval) {
  for (int N : {3, 4, 7}) {
    double prev = 1.0;
    for (double eps : {1e-2, 1e-4, 1e-8, 1e-12}) {
      const double v = power_annulus_integral(0, 1, 1 + eps, N).value;
      EXPECT_LT(v, prev);
      EXPECT_NEAR(v, eps, 10 * eps * eps + 1e-15);
      prev = v;
    }
  }
}

TEST(PowerAnnulusIntegral, GeometricNormalizationCarriesSphereArea) {
  EXPECT_NEAR(unit_sphere_area(3), 4 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(4), 2 * std::numbers::pi * std::numbers::pi, 1e-13);
  EXPECT_NEAR(power_annulus_integral(0, 1, 2, 3, Normalization::Geometric).value, 4 * std::numbers::pi * 7 / 3, 1e-12);
}

TEST(PowerAnnulusIntegral, EmptyRangeIsArgumentError) {
  EXPECT_THROW(power_annulus_integral(0, 2, 2, 3), ArgumentError);
  EXPECT_THROW(power_annulus_integral(0, 2, 1, 3), ArgumentError);
}

TEST(PowerAnnulusIntegral, AgreesWithAdaptiveSimpsonOnRandomDraws) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> alpha(-8, 3), lr(-2, 2), width(0.05, 3);
  std::uniform_int_distribution<int> dim(3, 8);
  for (int i = 0; i < 50; ++i) {
    const double a = alpha(rng), R = std::exp(lr(rng)), T = R * std::exp(width(rng));
    const int N = dim(rng);
    auto f = [&](double r) { return std::pow(r, a + N - 1); };
    const double rough = oracle::simpson(f, R, T, 1e-6);
    const double ref = oracle::simpson(f, R, T, 1e-12 * std::abs(rough));
    EXPECT_NEAR(power_annulus_integral(a, R, T, N).value, ref, 1e-9 * std::abs(ref));
  }
}

TEST(Integrate, SmoothIntegrandsAndErrorEstimate) {
  const QuadratureResult q = integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi);
  EXPECT_NEAR(q.value, 2.0, 1e-12);
  EXPECT_GE(q.abs_error_estimate, 0.0);
  EXPECT_FALSE(q.exact);
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x * x); }, -6, 6).value, std::sqrt(std::numbers::pi), 1e-10);
}

TEST(Integrate, PanelsHandleKinks) {
  auto f = [](double x) { return std::abs(x - 0.3); };
  const std::vector<double> br{0.0, 0.3, 1.0};
  EXPECT_NEAR(integrate_panels(f, br).value, 0.5 * 0.09 + 0.5 * 0.49, 1e-14);
}

TEST(Integrate, NonFiniteSampleReportsRadius) {
  try {
    integrate([](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; }, 0, 1);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_GT(e.radius(), 0.5);
    EXPECT_LE(e.radius(), 1.0);
  }
}

TEST(AnnulusTest, Validation) {
  EXPECT_THROW(Annulus(0, 1), ArgumentError);
  EXPECT_THROW(Annulus(2, 1), ArgumentError);
  EXPECT_NO_THROW(Annulus(1, 2));
}

TEST(Cutoff, PlateauValues) {
  const CutoffTestFunction tf(2.0, 9.0, 4);
  const double r = 2.0 * 3.0;
  const CutoffValue v = cutoff_eval(tf, r);
  EXPECT_DOUBLE_EQ(v.phi, 1.0 / r);
  EXPECT_DOUBLE_EQ(v.dphi, -1.0 / (r * r));
}

TEST(Cutoff, OutsideSupportIsZero) {
  const CutoffTestFunction tf(2.0, 4.0, 3);
  for (double r : {0.1, 0.99, 16.0, 100.0}) {
    const CutoffValue v = cutoff_eval(tf, r);
    EXPECT_EQ(v.phi, 0.0);
    EXPECT_EQ(v.dphi, 0.0);
  }
}

TEST(Cutoff, MidTransitionDerivativeBound) {
  for (double R : {1.0, 5.0}) {
    const CutoffTestFunction tf(R, 2.0, 3);
    const double r = 0.75 * R, beta = 0.5;
    EXPECT_LE(std::abs(cutoff_eval(tf, r).dphi), beta * std::pow(r, -beta - 1) + 4 / R * std::pow(r, -beta));
  }
}

TEST(Cutoff, ShapeInvariants) {
  for (double R : {0.5, 3.0})
    for (double gamma : {1.5, 2.0, 16.0}) {
      const CutoffTestFunction tf(R, gamma, 5);
      const double lo = 0.4 * R, hi = 2.2 * gamma * R;
      EXPECT_LE(oracle::scan_max([&](double r) { return std::abs(tf.dpsi(r)); }, lo, hi, 20001), 4 / R);
      EXPECT_GE(oracle::scan_min([&](double r) { return tf.psi(r); }, lo, hi, 20001), 0.0);
      EXPECT_LE(oracle::scan_max([&](double r) { return tf.psi(r); }, lo, hi, 20001), 1.0);
      // C^1 across every breakpoint.
      for (double b : tf.breakpoints()) {
        const double h = 1e-9 * b;
        EXPECT_NEAR(tf.psi(b - h), tf.psi(b + h), 1e-8);
        EXPECT_NEAR(tf.dpsi(b - h), tf.dpsi(b + h), 1e-6 / R);
      }
    }
}

TEST(Cutoff, DerivativeMatchesFiniteDifference) {
  const CutoffTestFunction tf(1.0, 3.0, 6);
  for (double r : {0.6, 0.8, 0.95, 2.0, 3.5, 5.0}) {
    const double h = 1e-6;
    EXPECT_NEAR(cutoff_eval(tf, r).dphi, (cutoff_eval(tf, r + h).phi - cutoff_eval(tf, r - h).phi) / (2 * h), 1e-7);
  }
}

TEST(Cutoff, InvalidParameters) {
  EXPECT_THROW(CutoffTestFunction(1.0, 1.0, 3), ArgumentError);
  EXPECT_THROW(CutoffTestFunction(-1.0, 2.0, 3), ArgumentError);
  EXPECT_THROW(CutoffTestFunction(1.0, 2.0, 2), ArgumentError);
}

TEST(EnergyAndMasses, AgreesWithSimpson) {
  const CutoffTestFunction tf(1.0, 2.0, 3);
  const std::vector<RadialWeight> w{RadialWeight::power(1, -2), RadialWeight::power(2, 0.5)};
  const EnergyAndMasses em = energy_and_masses(tf, w);
  const std::vector<double> br{0.5, 1.0, 2.0, 4.0};
  const double e = oracle::simpson_panels([&](double r) { const double d = cutoff_eval(tf, r).dphi; return d * d * r * r; }, br);
  const double m0 = oracle::simpson_panels([&](double r) { const double p = cutoff_eval(tf, r).phi; return p * p; }, br);
  const double m1 = oracle::simpson_panels([&](double r) { const double p = cutoff_eval(tf, r).phi; return 2 * std::sqrt(r) * p * p * r * r; }, br);
  EXPECT_NEAR(em.energy.value, e, 1e-9 * e);
  ASSERT_EQ(em.masses.size(), 2u);
  EXPECT_NEAR(em.masses[0].value, m0, 1e-9 * m0);
  EXPECT_NEAR(em.masses[1].value, m1, 1e-9 * m1);
}

TEST(EnergyAndMasses, NoWeights) {
  const EnergyAndMasses em = energy_and_masses(CutoffTestFunction(3.0, 4.0, 4), {});
  EXPECT_TRUE(em.masses.empty());
  EXPECT_GT(em.energy.value, 0.0);
}

TEST(EnergyAndMasses, HardyInequalityAndEnergyBound) {
  const CutoffTestFunction tf(1.0, 2.0, 3);
  const std::vector<RadialWeight> w{RadialWeight::power(1, -2)};
  const EnergyAndMasses em = energy_and_masses(tf, w);
  EXPECT_LE(em.masses[0].value, 4.0 * em.energy.value);
  EXPECT_LE(em.energy.value, 16.520);
}

TEST(EnergyAndMasses, NormalizationCancelsInQuotients) {
  const CutoffTestFunction tf(2.0, 3.0, 5);
  const std::vector<RadialWeight> w{RadialWeight::power(1, -2)};
  const EnergyAndMasses a = energy_and_masses(tf, w, Normalization::Paper);
  const EnergyAndMasses b = energy_and_masses(tf, w, Normalization::Geometric);
  EXPECT_NEAR(a.masses[0].value / a.energy.value, b.masses[0].value / b.energy.value, 1e-12);
  EXPECT_NEAR(b.energy.value / a.energy.value, unit_sphere_area(5), 1e-9);
}

TEST(EnergyAndMasses, HardyInequalityForGeneratedCutoffs) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> lR(-3, 3), lg(0.05, 4);
  std::uniform_int_distribution<int> dim(3, 10);
  const std::vector<RadialWeight> w{RadialWeight::power(1, -2)};
  for (int i = 0; i < 40; ++i) {
    const int N = dim(rng);
    const CutoffTestFunction tf(std::exp(lR(rng)), std::exp(lg(rng)), N);
    const EnergyAndMasses em = energy_and_masses(tf, w);
    EXPECT_LE(em.masses[0].value, 4.0 / ((N - 2) * (N - 2)) * em.energy.value * (1 + 1e-10));
  }
}

TEST(ShellEnergy, PlateauContributionIsExact) {
  for (int N : {3, 4, 7})
    for (double R : {0.1, 1.0, 50.0}) {
      const double gamma = 5.0;
      const CutoffTestFunction tf(R, gamma, N);
      const double beta = 0.5 * (N - 2);
      EXPECT_NEAR(shell_energy(tf, R, gamma * R).value, beta * beta * std::log(gamma), 1e-10);
    }
}

TEST(ShellEnergy, ShellsSumToTotal) {
  const CutoffTestFunction tf(1.0, 3.0, 4);
  const double total = shell_energy(tf, 0.5, 1).value + shell_energy(tf, 1, 3).value + shell_energy(tf, 3, 6).value;
  EXPECT_NEAR(total, energy_and_masses(tf, {}).energy.value, 1e-10 * total);
}

TEST(GradientBound, RhsValues) {
  EXPECT_NEAR(inner_shell_bound(0.5), 0.25 * std::log(2.0) + 8, 1e-14);
  const GradientBoundCheck c3 = verify_gradient_bound(CutoffTestFunction(7.0, 2.0, 3));
  EXPECT_NEAR(c3.rhs, 16.5199, 1e-3);
  EXPECT_TRUE(c3.holds);
  const GradientBoundCheck c4 = verify_gradient_bound(CutoffTestFunction(1.0, std::exp(1.0), 4));
  EXPECT_NEAR(c4.rhs, 22.386, 1e-3);
}

TEST(GradientBound, HoldsOnTheFullGrid) {
  for (double R : {1.0, 10.0, 100.0})
    for (double gamma : {2.0, 4.0, 16.0})
      for (int N : {3, 4, 5, 10}) {
        const GradientBoundCheck c = verify_gradient_bound(CutoffTestFunction(R, gamma, N));
        EXPECT_TRUE(c.holds) << "R=" << R << " gamma=" << gamma << " N=" << N;
        EXPECT_LE(c.lhs, c.rhs);
      }
}
