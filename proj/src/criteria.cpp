#include "liouville/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double profile_extent_or_default(const ProblemSpec& spec, double R_max) {
  return R_max > 0 ? R_max : spec.R0() * 1099511627776.0;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

// Relative margin of value over threshold, robust to zero and infinite values.
double relative_margin(double value, double threshold) {
  if (std::isinf(value) && std::isinf(threshold)) return 0.0;
  if (std::isinf(value)) return value > 0 ? kInf : -kInf;
  if (std::isinf(threshold)) return threshold > 0 ? -kInf : kInf;
  return (value - threshold) / std::max(std::abs(threshold), 1e-300);
}

Verdict make_verdict(VerdictKind kind, const char* criterion, Witness witness = {}) {
  Verdict v;
  v.kind = kind;
  v.criterion = criterion;
  v.witness = std::move(witness);
  return v;
}

}  // namespace

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Nonexistence: return "Nonexistence";
    case VerdictKind::ExistenceConstructed: return "ExistenceConstructed";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

double Verdict::margin() const {
  if (kind != VerdictKind::Inconclusive) {
    for (const auto& e : trace)
      if (e.criterion == criterion) return e.margin;
    return 0.0;
  }
  double best = -kInf;
  for (const auto& e : trace)
    if (e.criterion != criterion::kOracle && e.outcome == "not_satisfied") best = std::max(best, e.margin);
  return best;
}

// ---------------------------------------------------------------- annulus quotient

double threshold_thm2(double gamma, int N) {
  if (!(gamma > 1)) throw ArgumentError("threshold needs gamma > 1");
  if (N < 3) throw ArgumentError("threshold needs N >= 3");
  const double beta = 0.5 * (N - 2);
  return (beta * beta * std::log(2.0) + 4 * beta + 6) / std::log(gamma) + beta * beta;
}

std::vector<double> default_R_grid(const ProblemSpec& spec) {
  std::vector<double> out;
  for (int k = 1; k <= 20; ++k) out.push_back(std::ldexp(spec.R0(), k));
  return out;
}

std::vector<double> default_gamma_grid() { return {2.0, 4.0, 16.0, 256.0}; }

double annulus_quotient(const ProblemSpec& spec, double R, double gamma, bool* approximate) {
  const Bound num = r2_times_gap(spec).bound(R, gamma * R, BoundMode::Inf);
  const Bound rb = r_times_b(spec).bound(R / 2, 2 * gamma * R, BoundMode::Sup);
  if (approximate) *approximate = !(num.exact && rb.exact);
  return num.value / (1.0 + 2.0 * rb.value / (spec.dimension() - 2));
}

AnnulusQuotientResult check_thm2(const ProblemSpec& spec, std::span<const double> R_grid,
                                 std::span<const double> gamma_grid, double approximate_band) {
  if (R_grid.empty() || gamma_grid.empty()) throw ArgumentError("check_thm2 needs non-empty grids");
  AnnulusQuotientResult out;
  for (double R : R_grid) {
    if (!(R >= 2 * spec.R0() * (1 - 1e-15))) throw ArgumentError("check_thm2 needs R >= 2 R0, got " + fmt(R));
    for (double gamma : gamma_grid) {
      bool approx = false;
      const double Q = annulus_quotient(spec, R, gamma, &approx);
      const double thr = threshold_thm2(gamma, spec.dimension());
      const double ratio = Q / thr;
      if (ratio > out.best_ratio) {
        out.best_ratio = ratio;
        out.best_R = R;
        out.best_gamma = gamma;
        out.best_quotient = Q;
        out.approximate = approx;
      }
      const double need = approx ? 1.0 + approximate_band : 1.0;
      if (!out.witness && ratio > need) out.witness = AnnulusWitness{R, gamma, Q, thr};
    }
  }
  if (out.witness) {
    out.best_R = out.witness->R;
    out.best_gamma = out.witness->gamma;
  }
  return out;
}

// ---------------------------------------------------------------- τ branch

ConstructedSupersolution construct_supersolution(const ProblemSpec& spec, double R_max_profile) {
  const AsymptoticProfile prof = asymptotic_profile(spec, profile_extent_or_default(spec, R_max_profile));
  if (!std::isfinite(prof.tau)) throw PreconditionError("construction needs tau < inf");
  const int N = spec.dimension();
  ConstructedSupersolution out;
  out.tau1 = prof.liminf_r_b;
  const double vertex = 0.25 * (N - 2 + out.tau1) * (N - 2 + out.tau1);
  if (!(prof.limsup_r2_c < vertex))
    throw PreconditionError("no admissible exponent: limsup r^2 c = " + fmt(prof.limsup_r2_c) +
                            " >= " + fmt(vertex));
  out.alpha1 = 0.5 * (std::max(prof.limsup_r2_c, -vertex) + vertex);
  out.m = 0.5 * (N - 2 + out.tau1);
  for (int k = 0; k <= 60; ++k) {
    const double R1 = std::ldexp(spec.R0(), k);
    if (verify_power_supersolution(spec, out.m, R1, 1e6 * R1)) {
      out.R1 = R1;
      return out;
    }
  }
  throw PreconditionError("r^-" + fmt(out.m) + " is not a supersolution on any [2^k R0, 1e6 2^k R0]");
}

CriterionResult check_tau_branch(const ProblemSpec& spec, double R_max_profile, double approximate_band) {
  CriterionResult out;
  out.entry.criterion = criterion::kTauNonexistence;
  const AsymptoticProfile prof = asymptotic_profile(spec, profile_extent_or_default(spec, R_max_profile));
  out.entry.approximate = !prof.exact;
  if (!std::isfinite(prof.tau)) {
    out.entry.outcome = "inapplicable";
    out.entry.margin = -kInf;
    out.entry.note = "tau = inf";
    return out;
  }
  const int N = spec.dimension();
  const double thr = 0.25 * (N - 2 + prof.tau) * (N - 2 + prof.tau);
  const double band = prof.exact ? 0.0 : approximate_band;
  out.entry.threshold = thr;
  out.entry.note = "tau = " + fmt(prof.tau);

  out.entry.value = prof.liminf_r2_c;
  out.entry.margin = relative_margin(prof.liminf_r2_c, thr);
  if (out.entry.margin > band) {
    out.entry.outcome = "nonexistence";
    out.verdict = make_verdict(VerdictKind::Nonexistence, criterion::kTauNonexistence,
                               LimitWitness{prof.liminf_r2_c, thr});
    return out;
  }

  // Nonexistence side failed; try the construction.
  out.entry.criterion = criterion::kTauExistence;
  out.entry.value = prof.limsup_r2_c;
  out.entry.margin = -relative_margin(prof.limsup_r2_c, thr);
  if (!(out.entry.margin > band)) {
    out.entry.outcome = "not_satisfied";
    return out;
  }
  try {
    const ConstructedSupersolution sup = construct_supersolution(spec, R_max_profile);
    out.entry.outcome = "existence";
    out.entry.note += ", m = " + fmt(sup.m) + ", R1 = " + fmt(sup.R1);
    Verdict v = make_verdict(VerdictKind::ExistenceConstructed, criterion::kTauExistence);
    v.m = sup.m;
    v.R1 = sup.R1;
    out.verdict = std::move(v);
  } catch (const PreconditionError& e) {
    out.entry.outcome = "not_satisfied";
    out.entry.margin = std::min(out.entry.margin, 0.0);
    out.entry.note += std::string(", ") + e.what();
  }
  return out;
}

CriterionResult check_limit_quotient(const ProblemSpec& spec, double R_max_profile, double approximate_band) {
  CriterionResult out;
  out.entry.criterion = criterion::kLimitQuotient;
  const AsymptoticProfile prof = asymptotic_profile(spec, profile_extent_or_default(spec, R_max_profile));
  const int N = spec.dimension();
  out.entry.approximate = !prof.exact;
  out.entry.threshold = 0.25 * (N - 2) * (N - 2);
  if (std::isinf(prof.tau) && std::isinf(prof.liminf_r2_gap)) {
    out.entry.outcome = "inapplicable";
    out.entry.margin = -kInf;
    out.entry.note = "inf / inf";
    return out;
  }
  const double den = 1.0 + 2.0 * prof.tau / (N - 2);
  out.entry.value = std::isinf(den) ? 0.0 : prof.liminf_r2_gap / den;
  out.entry.margin = relative_margin(out.entry.value, out.entry.threshold);
  if (out.entry.margin > (prof.exact ? 0.0 : approximate_band)) {
    out.entry.outcome = "nonexistence";
    out.verdict = make_verdict(VerdictKind::Nonexistence, criterion::kLimitQuotient,
                               LimitWitness{out.entry.value, out.entry.threshold});
  } else {
    out.entry.outcome = "not_satisfied";
  }
  return out;
}

// ---------------------------------------------------------------- divergence

DivergenceTrace divergence_trace(const ProblemSpec& spec, double R_start, int doublings) {
  if (!(R_start >= 2 * spec.R0() * (1 - 1e-15))) throw ArgumentError("divergence_trace needs R_start >= 2 R0");
  if (doublings < 1) throw ArgumentError("divergence_trace needs doublings >= 1");
  const RadialFunction g = gap(spec);
  const RadialFunction b = as_function(spec.b());
  DivergenceTrace out;
  for (int k = 0; k <= doublings; ++k) {
    const double R = std::ldexp(R_start, k);
    const double inf_gap = g.bound(R, 2 * R, BoundMode::Inf).value;
    const double sup_b = b.bound(R / 2, 4 * R, BoundMode::Sup).value;
    double J;
    if (sup_b > 0) {
      J = R * inf_gap / sup_b;
    } else {
      J = inf_gap > 0 ? kInf : 0.0;
    }
    out.radii.push_back(R);
    out.J_values.push_back(J);
  }
  const std::size_t half = out.radii.size() / 2;
  out.eventually_increasing = true;
  for (std::size_t i = half + 1; i < out.J_values.size(); ++i)
    if (!(out.J_values[i] > out.J_values[i - 1])) out.eventually_increasing = false;

  // Least-squares slope of ln J against ln R over the last half.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  bool positive = true;
  for (std::size_t i = half; i < out.J_values.size(); ++i) {
    if (!(out.J_values[i] > 0) || !std::isfinite(out.J_values[i])) {
      positive = false;
      break;
    }
    const double x = std::log(out.radii[i]), y = std::log(out.J_values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (positive && n >= 2) {
    out.fitted_growth_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    out.fitted_growth_exponent = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

CriterionResult check_divergence(const ProblemSpec& spec, double R_start, int doublings,
                                 const DivergenceGates& gates) {
  CriterionResult out;
  out.entry.criterion = criterion::kDivergence;
  out.entry.approximate = true;
  DivergenceTrace tr = divergence_trace(spec, R_start, doublings);
  const double last = tr.J_values.back();
  out.entry.value = last;
  out.entry.threshold = gates.min_final_J;
  out.entry.note = "growth exponent " + fmt(tr.fitted_growth_exponent);
  // Each gate contributes a relative margin; the criterion fires when all are positive.
  const double m_final = relative_margin(last, gates.min_final_J);
  const double m_growth = std::isnan(tr.fitted_growth_exponent)
                              ? -kInf
                              : relative_margin(tr.fitted_growth_exponent, gates.min_growth_exponent);
  out.entry.margin = std::min(m_final, m_growth);
  if (!tr.eventually_increasing) out.entry.margin = std::min(out.entry.margin, 0.0);
  if (tr.eventually_increasing && m_final > 0 && m_growth > 0) {
    out.entry.outcome = "nonexistence";
    out.verdict = make_verdict(VerdictKind::Nonexistence, criterion::kDivergence, tr);
  } else {
    out.entry.outcome = "not_satisfied";
    if (!tr.eventually_increasing) out.entry.note += ", not eventually increasing";
  }
  out.entry.evidence = std::move(tr);
  return out;
}

// ---------------------------------------------------------------- Hardy weight E

CorollaryBounds corollary_bounds(const RadialWeight& E, int N, double R_min, double R_max) {
  if (N < 3) throw ArgumentError("corollary_bounds needs N >= 3");
  if (!(R_min > 0 && R_max >= 2 * R_min)) throw ArgumentError("corollary_bounds needs 0 < 2 R_min <= R_max");
  const std::optional<PowerSum> ps = E.power_sum();
  // r^2 (-ΔE) / E  with  ΔE = E'' + (N-1) E' / r.
  auto q = [&](double r) {
    double e, lap;
    if (ps) {
      e = (*ps)(r);
      // r^2 ΔE = Σ a p (p + N - 2) r^p, exact cancellation for p = 2 - N.
      lap = 0.0;
      for (const auto& t : ps->terms())
        lap += t.coeff * t.exponent * (t.exponent + N - 2) * std::pow(r, t.exponent);
    } else {
      e = E(r);
      lap = r * r * E.second_derivative(r) + (N - 1) * r * E.derivative(r);
    }
    if (!(e > 0)) throw ArgumentError("E must be positive, fails at r = " + fmt(r));
    if (-lap < -1e-12 * std::max(1.0, std::abs(e)))
      throw ArgumentError("E must be superharmonic, fails at r = " + fmt(r));
    return -lap / e;
  };
  CorollaryBounds out;
  out.bound = 0.25 * (N - 2) * (N - 2);
  double last_inf = kInf;
  for (double a = R_min; a < R_max * (1 - 1e-12); a *= 2) {
    const double b = std::min(2 * a, R_max);
    double inf = kInf;
    for (double r : log_spaced(a, b, 33)) inf = std::min(inf, q(r));
    last_inf = inf;
  }
  out.liminf_estimate = last_inf;
  out.consistent = out.liminf_estimate <= out.bound * (1 + 1e-9) + 1e-12;
  return out;
}

double critical_exponent(int N, double a) {
  if (N < 3) throw ArgumentError("critical_exponent needs N >= 3");
  return (N + a) / (N - 2);
}

double hardy_weight_gamma(const ProblemSpec& spec, const RadialWeight& E, double R_max, bool* exact) {
  const double R_lo = std::sqrt(spec.R0() * R_max);
  const std::optional<PowerSum> bs = spec.b().power_sum();
  const std::optional<PowerSum> es = E.power_sum();
  if (bs && es && es->terms().size() == 1 && es->terms()[0].exponent != 0.0) {
    // E = k r^p: b E / |E'| = r b / |p|.
    const double p = es->terms()[0].exponent;
    const PowerSum ratio = bs->times_power(1.0).scaled(1.0 / std::abs(p));
    // γ must hold on the whole tail, not only up to R_max.
    const double at_infinity = ratio.limit_at_infinity();
    if (at_infinity == kInf) {
      if (exact) *exact = true;
      return kInf;
    }
    const Bound bd = RadialFunction(ratio).bound(R_lo, R_max, BoundMode::Sup);
    if (exact) *exact = bd.exact;
    return std::max(bd.value, at_infinity);
  }
  if (exact) *exact = false;
  double g = 0.0;
  for (double r : log_spaced(R_lo, R_max, kDefaultBoundSamples)) {
    const double br = spec.b()(r);
    if (br <= 0) continue;
    const double d = std::abs(E.derivative(r));
    if (d == 0) return kInf;
    g = std::max(g, br * E(r) / d);
  }
  return g;
}

CriterionResult corollary3_check(const ProblemSpec& spec, const RadialWeight& E, double R_max,
                                 double approximate_band) {
  CriterionResult out;
  out.entry.criterion = criterion::kHardyWeight;
  const int N = spec.dimension();
  try {
    (void)corollary_bounds(E, N, spec.R0(), R_max);
  } catch (const ArgumentError& e) {
    out.entry.outcome = "inapplicable";
    out.entry.margin = -kInf;
    out.entry.note = e.what();
    return out;
  }
  bool g_exact = false;
  const double g = hardy_weight_gamma(spec, E, R_max, &g_exact);
  const AsymptoticProfile prof = asymptotic_profile(spec, R_max);
  out.entry.approximate = !(g_exact && prof.exact);
  out.entry.value = prof.liminf_r2_gap;
  out.entry.threshold = (1 + 2 * g) * 0.25 * (N - 2) * (N - 2);
  out.entry.note = "gamma = " + fmt(g);
  if (std::isinf(g)) {
    out.entry.outcome = "inapplicable";
    out.entry.margin = -kInf;
    return out;
  }
  out.entry.margin = relative_margin(out.entry.value, out.entry.threshold);
  if (out.entry.margin > (out.entry.approximate ? approximate_band : 0.0)) {
    out.entry.outcome = "nonexistence";
    out.verdict = make_verdict(VerdictKind::Nonexistence, criterion::kHardyWeight,
                               LimitWitness{out.entry.value, out.entry.threshold});
  } else {
    out.entry.outcome = "not_satisfied";
  }
  return out;
}

// ---------------------------------------------------------------- classify

namespace {

/// Inner radius of the region a nonexistence witness lives on; +inf for
/// asymptotic criteria, which rule out every exterior domain.
double witness_inner_radius(const Witness& w) {
  if (const auto* a = std::get_if<AnnulusWitness>(&w)) return 0.5 * a->R;
  if (const auto* f = std::get_if<FormCertificate>(&w)) return std::exp(f->grid.S0());
  return kInf;
}

/// Existence on |x| > R1 contradicts nonexistence only if the witness region lies inside it.
bool contradicts(const Verdict& a, const Verdict& b) {
  if (a.kind == b.kind) return false;
  const Verdict& ex = a.kind == VerdictKind::ExistenceConstructed ? a : b;
  const Verdict& non = a.kind == VerdictKind::ExistenceConstructed ? b : a;
  return ex.R1 <= witness_inner_radius(non.witness) * (1 + 1e-12);
}

CriterionResult form_search(const ProblemSpec& spec, const ClassifyOptions& opt) {
  CriterionResult out;
  out.entry.criterion = criterion::kFormCertificate;
  out.entry.threshold = 1.0;
  out.entry.margin = -kInf;
  out.entry.outcome = "not_satisfied";
  const std::vector<double> tg = default_t_grid();
  double best_mu = kInf;
  for (double S : opt.form_log_widths) {
    const int n = std::max(16, static_cast<int>(std::ceil(opt.form_nodes_per_log_unit * S)));
    FormMinimum fm;
    try {
      fm = form_minimum(spec, Annulus(spec.R0(), spec.R0() * std::exp(S)), n, tg);
    } catch (const ArgumentError& e) {
      out.entry.outcome = "inapplicable";
      out.entry.note = e.what();
      continue;
    }
    out.entry.outcome = "not_satisfied";
    best_mu = std::min(best_mu, fm.mu);
    out.entry.value = best_mu;
    out.entry.margin = 1.0 - best_mu;
    out.entry.note = "ln(R1/R0) = " + fmt(S) + ", t* = " + fmt(fm.t_star);
    if (fm.certificate) {
      out.entry.outcome = "nonexistence";
      out.entry.value = fm.certificate->verified_ratio;
      out.entry.margin = 1.0 - fm.certificate->verified_ratio;
      out.verdict = make_verdict(VerdictKind::Nonexistence, criterion::kFormCertificate, *fm.certificate);
      return out;
    }
    if (fm.rejected_verified_ratio) {
      out.entry.note += ", discrete ratio not confirmed (" + fmt(*fm.rejected_verified_ratio) + ")";
      out.entry.margin = std::min(out.entry.margin, 0.0);
    }
  }
  return out;
}

template <class F>
CriterionResult guarded(const char* id, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    CriterionResult out;
    out.entry.criterion = id;
    out.entry.outcome = "error";
    out.entry.margin = -kInf;
    out.entry.note = e.what();
    return out;
  }
}

}  // namespace

Verdict classify(const ProblemSpec& spec, const ClassifyOptions& opt) {
  const double R0 = spec.R0();
  const double R_prof = R0 * opt.profile_extent;
  std::vector<TraceEntry> trace;
  std::vector<std::string> diagnostics;
  std::optional<Verdict> decided;

  auto consider = [&](CriterionResult res) {
    if (res.verdict && std::holds_alternative<std::monostate>(res.entry.evidence))
      res.entry.evidence = res.verdict->witness;
    trace.push_back(res.entry);
    if (!res.verdict) return;
    if (!decided) {
      decided = std::move(res.verdict);
    } else if (contradicts(*decided, *res.verdict)) {
      diagnostics.push_back("criteria conflict: " + decided->criterion + " vs " + res.verdict->criterion);
    } else if (decided->kind != res.verdict->kind) {
      const Verdict& ex = decided->kind == VerdictKind::ExistenceConstructed ? *decided : *res.verdict;
      const Verdict& non = decided->kind == VerdictKind::ExistenceConstructed ? *res.verdict : *decided;
      diagnostics.push_back(non.criterion + " rules out |x| > " + fmt(witness_inner_radius(non.witness)) + "; " +
                            ex.criterion + " holds on |x| > " + fmt(ex.R1) + " only");
    }
  };
  auto more = [&] { return opt.exhaustive || !decided; };

  const AsymptoticProfile prof = asymptotic_profile(spec, R_prof);

  consider(guarded(criterion::kTauNonexistence, [&] { return check_tau_branch(spec, R_prof, opt.approximate_band); }));
  if (more()) {
    consider(guarded(criterion::kAnnulusQuotient, [&] {
      const std::vector<double> Rg = opt.R_grid.empty() ? default_R_grid(spec) : opt.R_grid;
      const std::vector<double> gg = opt.gamma_grid.empty() ? default_gamma_grid() : opt.gamma_grid;
      const AnnulusQuotientResult q = check_thm2(spec, Rg, gg, opt.approximate_band);
      CriterionResult r;
      r.entry.criterion = criterion::kAnnulusQuotient;
      r.entry.value = q.best_quotient;
      r.entry.threshold = q.best_gamma > 1 ? threshold_thm2(q.best_gamma, spec.dimension()) : 0.0;
      r.entry.margin = q.best_ratio - 1.0;
      r.entry.approximate = q.approximate;
      r.entry.note = "R = " + fmt(q.best_R) + ", gamma = " + fmt(q.best_gamma);
      if (q.witness) {
        r.entry.value = q.witness->quotient;
        r.entry.threshold = q.witness->threshold;
        r.entry.margin = q.witness->quotient / q.witness->threshold - 1.0;
        r.entry.outcome = "nonexistence";
        r.verdict = make_verdict(VerdictKind::Nonexistence, criterion::kAnnulusQuotient, *q.witness);
      } else {
        r.entry.outcome = "not_satisfied";
      }
      return r;
    }));
  }
  if (more()) consider(guarded(criterion::kLimitQuotient, [&] { return check_limit_quotient(spec, R_prof, opt.approximate_band); }));
  if (more() && std::isinf(prof.tau))
    consider(guarded(criterion::kDivergence, [&] { return check_divergence(spec, 2 * R0, opt.doublings, opt.gates); }));
  if (more() && opt.run_form_search)
    consider(guarded(criterion::kFormCertificate, [&] { return form_search(spec, opt); }));
  if (more()) {
    const RadialWeight E = RadialWeight::power(1.0, 2.0 - spec.dimension());
    consider(guarded(criterion::kHardyWeight, [&] { return corollary3_check(spec, E, R_prof, opt.approximate_band); }));
  }

  Verdict out = decided ? std::move(*decided) : make_verdict(VerdictKind::Inconclusive, "");
  if (opt.run_oracle) {
    TraceEntry e;
    e.criterion = criterion::kOracle;
    e.approximate = true;
    try {
      const OscillationScan scan =
          oscillation_scan(spec, opt.oracle_slopes, R0 * opt.oracle_extent, opt.oracle_max_steps);
      out.oracle = scan.classification;
      e.outcome = to_string(scan.classification);
      e.note = "slope bracket " + fmt(scan.slope_bracket);
      const bool disagrees =
          (out.kind == VerdictKind::Nonexistence && scan.classification == OscillationClass::PositiveSolutionFound) ||
          (out.kind == VerdictKind::ExistenceConstructed && out.R1 <= R0 * (1 + 1e-12) &&
           scan.classification == OscillationClass::AllOscillate);
      if (disagrees) diagnostics.push_back("oracle disagrees with " + out.criterion);
    } catch (const std::exception& ex) {
      e.outcome = "error";
      e.note = ex.what();
    }
    trace.push_back(std::move(e));
  }
  out.trace = std::move(trace);
  out.diagnostics = std::move(diagnostics);
  return out;
}

}  // namespace liouville
