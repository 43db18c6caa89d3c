#pragma once

#include <limits>
#include <numbers>
#include <span>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "liouville/hardy_forms.hpp"
#include "liouville/radial_oracle.hpp"
#include "liouville/weights.hpp"

namespace liouville {

enum class VerdictKind { Nonexistence, ExistenceConstructed, Inconclusive };

const char* to_string(VerdictKind kind);

/// Criterion ids used in traces and reports.
namespace criterion {
inline constexpr const char* kTauNonexistence = "g3";
inline constexpr const char* kTauExistence = "g4";
inline constexpr const char* kAnnulusQuotient = "g1";
inline constexpr const char* kLimitQuotient = "g2";
inline constexpr const char* kDivergence = "simple1";
inline constexpr const char* kFormCertificate = "form_certificate";
inline constexpr const char* kHardyWeight = "E";
inline constexpr const char* kOracle = "oracle";
}  // namespace criterion


struct AnnulusWitness {
  double R = 0.0;
  double gamma = 0.0;
  double quotient = 0.0;
  double threshold = 0.0;
};

struct LimitWitness {
  double value = 0.0;
  double threshold = 0.0;
};

struct DivergenceTrace {
  std::vector<double> radii;
  std::vector<double> J_values;
  double fitted_growth_exponent = 0.0;
  bool eventually_increasing = false;
};

using Witness = std::variant<std::monostate, AnnulusWitness, LimitWitness, DivergenceTrace, FormCertificate>;

struct TraceEntry {
  std::string criterion;
  double value = 0.0;
  double threshold = 0.0;
  /// Positive iff the criterion fired (in either direction).
  double margin = 0.0;
  /// "nonexistence", "existence", "not_satisfied", "inapplicable" or "error".
  std::string outcome;
  bool approximate = false;
  std::string note;
  /// Supporting data: annulus witness, J-table, certificate.
  Witness evidence;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::string criterion;
  Witness witness;
  double m = 0.0;   ///< ExistenceConstructed: decay exponent of u = r^{-m}
  double R1 = 0.0;  ///< ExistenceConstructed: u is a supersolution on |x| > R1
  std::vector<TraceEntry> trace;
  std::vector<std::string> diagnostics;
  std::optional<OscillationClass> oracle;

  /// Margin of the deciding entry; for Inconclusive the largest margin seen.
  double margin() const;
};

/// A single criterion's trace entry and, when it is conclusive, its verdict.
struct CriterionResult {
  TraceEntry entry;
  std::optional<Verdict> verdict;
};

/// (β^2 ln 2 + 4β + 6) / ln γ + β^2 with β = (N-2)/2.
double threshold_thm2(double gamma, int N);

std::vector<double> default_R_grid(const ProblemSpec& spec);
std::vector<double> default_gamma_grid();

struct AnnulusQuotientResult {
  /// max over the grid of Q(R, γ) / threshold_thm2(γ, N).
  double best_ratio = -std::numeric_limits<double>::infinity();
  double best_R = 0.0;
  double best_gamma = 0.0;
  double best_quotient = 0.0;
  std::optional<AnnulusWitness> witness;
  bool approximate = false;
};

/// Q(R, γ) = inf_{(R, γR)} r^2 (c - b^2/4) / (1 + 2 sup_{(R/2, 2γR)} r b / (N-2)).
double annulus_quotient(const ProblemSpec& spec, double R, double gamma, bool* approximate = nullptr);

/// Throws ArgumentError on empty grids or R < 2 R0.
AnnulusQuotientResult check_thm2(const ProblemSpec& spec, std::span<const double> R_grid,
                                 std::span<const double> gamma_grid, double approximate_band = 0.01);

struct ConstructedSupersolution {
  double m = 0.0;
  double R1 = 0.0;
  double alpha1 = 0.0;
  double tau1 = 0.0;
};

/// u = r^{-m} with m = (N-2+τ1)/2. Throws PreconditionError when no
/// admissible m exists or no dyadic R1 up to 2^60 R0 verifies.
ConstructedSupersolution construct_supersolution(const ProblemSpec& spec, double R_max_profile = 0.0);

CriterionResult check_tau_branch(const ProblemSpec& spec, double R_max_profile = 0.0,
                                 double approximate_band = 0.01);

CriterionResult check_limit_quotient(const ProblemSpec& spec, double R_max_profile = 0.0,
                                     double approximate_band = 0.01);

struct DivergenceGates {
  double min_growth_exponent = 0.05;
  double min_final_J = 1e3;
};

/// J(R) = R inf_{(R,2R)} (c - b^2/4) / sup_{(R/2,4R)} b  at R = R_start 2^k, k = 0..doublings.
DivergenceTrace divergence_trace(const ProblemSpec& spec, double R_start, int doublings);

CriterionResult check_divergence(const ProblemSpec& spec, double R_start, int doublings,
                                 const DivergenceGates& gates = {});

struct CorollaryBounds {
  double liminf_estimate = 0.0;
  double bound = 0.0;
  bool consistent = false;
};

/// liminf r^2 (-ΔE)/E from dyadic infima on [R_min, R_max] against (N-2)^2/4.
/// Throws ArgumentError (naming the radius) if E <= 0 or -ΔE < 0 at a sample.
CorollaryBounds corollary_bounds(const RadialWeight& E, int N, double R_min, double R_max);

/// (N + a) / (N - 2)
double critical_exponent(int N, double a);

/// Smallest γ with b <= γ |E'|/E on the tail of the sampled radii; +inf when E' vanishes where b > 0.
double hardy_weight_gamma(const ProblemSpec& spec, const RadialWeight& E, double R_max, bool* exact = nullptr);

CriterionResult corollary3_check(const ProblemSpec& spec, const RadialWeight& E, double R_max,
                                 double approximate_band = 0.01);

struct ClassifyOptions {
  /// Asymptotic profiles use dyadic annuli up to R0 * profile_extent.
  double profile_extent = 1099511627776.0;  // 2^40
  std::vector<double> R_grid;      ///< empty: default_R_grid
  std::vector<double> gamma_grid;  ///< empty: default_gamma_grid
  int doublings = 20;
  DivergenceGates gates;
  bool run_form_search = true;
  /// ln(R1/R0) of the annuli [R0, R1] tried for a form certificate.
  std::vector<double> form_log_widths = {2 * std::numbers::pi, 4 * std::numbers::pi, 8 * std::numbers::pi};
  double form_nodes_per_log_unit = 64.0;
  bool run_oracle = true;
  int oracle_slopes = 12;
  double oracle_extent = 1e30;  ///< shots run to R0 * oracle_extent
  std::size_t oracle_max_steps = 20000;
  /// Evaluate every criterion for the trace; false stops at the first conclusive one.
  bool exhaustive = true;
  /// Relative margin demanded of criteria built on approximate bounds.
  double approximate_band = 0.01;
};

/// Runs, in order: τ branch (g3/g4), annulus quotient (g1), its limit form
/// (g2), divergence (simple1, τ = ∞ only), form certificates, and the
/// Hardy-weight criterion with E = r^{2-N}. The first conclusive one wins;
/// disagreeing conclusive criteria are reported in the diagnostics.
Verdict classify(const ProblemSpec& spec, const ClassifyOptions& options = {});

}  // namespace liouville
