#include "liouville/report.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "liouville/errors.hpp"
#include "liouville/hardy_forms.hpp"
#include "liouville/quadrature.hpp"
#include "liouville/radial_oracle.hpp"

namespace liouville {

namespace {

std::string join_errors(const std::vector<std::string>& fields, const std::vector<std::string>& reasons) {
  std::string out = "invalid configuration:";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    out += "\n  " + fields[i];
    if (i < reasons.size() && !reasons[i].empty()) out += ": " + reasons[i];
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> fields, std::vector<std::string> reasons)
    : std::invalid_argument(join_errors(fields, reasons)), fields_(std::move(fields)), reasons_(std::move(reasons)) {}

namespace {

// Non-finite doubles are not representable in JSON.
Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

struct Errors {
  std::vector<std::string> fields;
  std::vector<std::string> reasons;
  void add(const std::string& field, const std::string& reason) {
    fields.push_back(field);
    reasons.push_back(reason);
  }
  void raise_if_any() const {
    if (!fields.empty()) throw ConfigError(fields, reasons);
  }
};

// Reads the fields of one JSON object and flags unknown keys.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path, Errors& errors) : j_(j), path_(std::move(path)), errors_(errors) {
    ok_ = j_.is_object();
    if (!ok_) errors_.add(path_, "expected an object");
  }

  bool ok() const { return ok_; }
  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json* find(const std::string& key) {
    seen_.insert(key);
    if (!ok_) return nullptr;
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return ok_ && j_.contains(key);
  }

  double number(const std::string& key, std::optional<double> fallback, bool (*valid)(double) = nullptr,
                const char* requirement = "") {
    const Json* v = find(key);
    if (!v) {
      if (!fallback && ok_) errors_.add(field(key), "required");
      return fallback.value_or(0.0);
    }
    if (!v->is_number()) {
      errors_.add(field(key), "expected a number");
      return fallback.value_or(0.0);
    }
    const double x = v->get<double>();
    if (valid && !valid(x)) errors_.add(field(key), requirement);
    return x;
  }

  long long integer(const std::string& key, std::optional<long long> fallback, long long min_value) {
    const Json* v = find(key);
    if (!v) {
      if (!fallback && ok_) errors_.add(field(key), "required");
      return fallback.value_or(min_value);
    }
    if (!v->is_number_integer()) {
      errors_.add(field(key), "expected an integer");
      return fallback.value_or(min_value);
    }
    const long long x = v->get<long long>();
    if (x < min_value) errors_.add(field(key), "must be >= " + std::to_string(min_value));
    return x;
  }

  bool boolean(const std::string& key, bool fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) {
      errors_.add(field(key), "expected a boolean");
      return fallback;
    }
    return v->get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback) {
    const Json* v = find(key);
    if (!v) {
      if (!fallback && ok_) errors_.add(field(key), "required");
      return fallback.value_or("");
    }
    if (!v->is_string()) {
      errors_.add(field(key), "expected a string");
      return fallback.value_or("");
    }
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback, bool (*valid)(double) = nullptr,
                              const char* requirement = "") {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) {
      errors_.add(field(key), "expected an array of numbers");
      return fallback;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const Json& e = (*v)[i];
      const std::string f = field(key) + "[" + std::to_string(i) + "]";
      if (!e.is_number()) {
        errors_.add(f, "expected a number");
        continue;
      }
      out.push_back(e.get<double>());
      if (valid && !valid(out.back())) errors_.add(f, requirement);
    }
    return out;
  }

  void finish() {
    if (!ok_) return;
    for (const auto& [k, _] : j_.items())
      if (!seen_.count(k)) errors_.add(field(k), "unknown field");
  }

 private:
  const Json& j_;
  std::string path_;
  Errors& errors_;
  std::set<std::string> seen_;
  bool ok_ = true;
};

bool positive(double x) { return x > 0 && std::isfinite(x); }
bool finite(double x) { return std::isfinite(x); }
bool above_one(double x) { return x > 1 && std::isfinite(x); }
bool at_least_four(double x) { return x >= 4 && std::isfinite(x); }

RadialWeight read_weight(const Json& j, const std::string& path, Errors& errors) {
  ObjectReader r(j, path, errors);
  if (!r.ok()) return RadialWeight::zero();
  const std::string type = r.string("type", std::nullopt);
  RadialWeight out = RadialWeight::zero();
  if (type == "power") {
    const double coeff = r.number("coeff", std::nullopt, finite, "must be finite");
    const double exponent = r.number("exponent", std::nullopt, finite, "must be finite");
    out = PowerLaw{coeff, exponent};
  } else if (type == "sum") {
    SumOfPowerLaws s;
    const Json* terms = r.find("terms");
    if (!terms) {
      errors.add(r.field("terms"), "required");
    } else if (!terms->is_array()) {
      errors.add(r.field("terms"), "expected an array");
    } else {
      for (std::size_t i = 0; i < terms->size(); ++i) {
        ObjectReader t((*terms)[i], r.field("terms") + "[" + std::to_string(i) + "]", errors);
        if (!t.ok()) continue;
        PowerTerm term;
        term.coeff = t.number("coeff", std::nullopt, finite, "must be finite");
        term.exponent = t.number("exponent", std::nullopt, finite, "must be finite");
        t.finish();
        s.terms.push_back(term);
      }
    }
    try {
      out = s;
    } catch (const std::exception& e) {
      errors.add(r.field("terms"), e.what());
    }
  } else if (type == "table") {
    Tabulated t;
    if (!r.has("grid")) errors.add(r.field("grid"), "required");
    if (!r.has("values")) errors.add(r.field("values"), "required");
    t.grid = r.numbers("grid", {}, positive, "must be positive");
    t.values = r.numbers("values", {}, finite, "must be finite");
    t.tail_exponent = r.number("tail_exponent", 0.0, finite, "must be finite");
    if (t.grid.size() != t.values.size()) errors.add(r.field("values"), "must have one value per grid node");
    if (t.grid.size() < 2) errors.add(r.field("grid"), "needs at least two nodes");
    bool valid = t.grid.size() == t.values.size() && t.grid.size() >= 2;
    for (std::size_t i = 1; i < t.grid.size(); ++i)
      if (!(t.grid[i] > t.grid[i - 1])) {
        errors.add(r.field("grid"), "must be strictly increasing");
        valid = false;
        break;
      }
    if (valid) {
      try {
        out = t;
      } catch (const std::exception& e) {
        errors.add(path, e.what());
      }
    }
  } else if (!type.empty()) {
    errors.add(r.field("type"), "must be one of power, sum, table");
  }
  r.finish();
  return out;
}

}  // namespace

// ---------------------------------------------------------------- weights and problems

Json to_json(const RadialWeight& w) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return Json{{"type", "power"}, {"coeff", v.coeff}, {"exponent", v.exponent}};
        } else if constexpr (std::is_same_v<T, SumOfPowerLaws>) {
          Json terms = Json::array();
          for (const auto& t : v.terms) terms.push_back(Json{{"coeff", t.coeff}, {"exponent", t.exponent}});
          return Json{{"type", "sum"}, {"terms", terms}};
        } else {
          return Json{{"type", "table"}, {"grid", v.grid}, {"values", v.values}, {"tail_exponent", v.tail_exponent}};
        }
      },
      w.variant());
}

RadialWeight weight_from_json(const Json& j, const std::string& path) {
  Errors errors;
  RadialWeight w = read_weight(j, path, errors);
  errors.raise_if_any();
  return w;
}

Json to_json(const ProblemSpec& spec) {
  return Json{{"dimension", spec.dimension()}, {"R0", spec.R0()}, {"b", to_json(spec.b())}, {"c", to_json(spec.c())}};
}

namespace {

std::optional<ProblemSpec> read_problem(const Json& j, const std::string& path, Errors& errors) {
  const std::size_t before = errors.fields.size();
  ObjectReader r(j, path, errors);
  if (!r.ok()) return std::nullopt;
  const int N = static_cast<int>(r.integer("dimension", std::nullopt, 3));
  const double R0 = r.number("R0", std::nullopt, positive, "must be positive");
  RadialWeight b = RadialWeight::zero(), c = RadialWeight::zero();
  if (const Json* jb = r.find("b")) {
    b = read_weight(*jb, r.field("b"), errors);
  } else {
    errors.add(r.field("b"), "required");
  }
  if (const Json* jc = r.find("c")) {
    c = read_weight(*jc, r.field("c"), errors);
  } else {
    errors.add(r.field("c"), "required");
  }
  r.finish();
  if (errors.fields.size() != before) return std::nullopt;
  try {
    return ProblemSpec(N, R0, std::move(b), std::move(c));
  } catch (const std::exception& e) {
    errors.add(path, e.what());
    return std::nullopt;
  }
}

}  // namespace

ProblemSpec problem_from_json(const Json& j, const std::string& path) {
  Errors errors;
  std::optional<ProblemSpec> p = read_problem(j, path, errors);
  errors.raise_if_any();
  return *p;
}

// ---------------------------------------------------------------- run configuration

std::vector<double> SweepAxis::values() const {
  std::vector<double> out;
  if (steps <= 0) return out;
  if (steps == 1) return {min};
  for (int i = 0; i < steps; ++i) out.push_back(i == steps - 1 ? max : min + (max - min) * i / (steps - 1));
  return out;
}

namespace {

ClassifyOptions read_classify_options(const Json& j, const std::string& path, Errors& errors) {
  ClassifyOptions o;
  ObjectReader r(j, path, errors);
  if (!r.ok()) return o;
  o.profile_extent = r.number("profile_extent", o.profile_extent, at_least_four, "must be >= 4");
  o.R_grid = r.numbers("R_grid", {}, positive, "must be positive");
  o.gamma_grid = r.numbers("gamma_grid", {}, above_one, "must be > 1");
  o.doublings = static_cast<int>(r.integer("doublings", o.doublings, 1));
  o.gates.min_growth_exponent =
      r.number("min_growth_exponent", o.gates.min_growth_exponent, positive, "must be positive");
  o.gates.min_final_J = r.number("min_final_J", o.gates.min_final_J, positive, "must be positive");
  o.run_form_search = r.boolean("form_search", o.run_form_search);
  o.form_log_widths = r.numbers("form_log_widths", o.form_log_widths, positive, "must be positive");
  o.form_nodes_per_log_unit =
      r.number("form_nodes_per_log_unit", o.form_nodes_per_log_unit, positive, "must be positive");
  o.run_oracle = r.boolean("oracle", o.run_oracle);
  o.oracle_slopes = static_cast<int>(r.integer("oracle_slopes", o.oracle_slopes, 8));
  o.oracle_extent = r.number("oracle_extent", o.oracle_extent, above_one, "must be > 1");
  o.oracle_max_steps = static_cast<std::size_t>(r.integer("oracle_max_steps", static_cast<long long>(o.oracle_max_steps), 1));
  o.exhaustive = r.boolean("exhaustive", o.exhaustive);
  o.approximate_band = r.number("approximate_band", o.approximate_band, positive, "must be positive");
  r.finish();
  return o;
}

Json classify_options_json(const ClassifyOptions& o) {
  return Json{{"profile_extent", o.profile_extent},
              {"R_grid", o.R_grid},
              {"gamma_grid", o.gamma_grid},
              {"doublings", o.doublings},
              {"min_growth_exponent", o.gates.min_growth_exponent},
              {"min_final_J", o.gates.min_final_J},
              {"form_search", o.run_form_search},
              {"form_log_widths", o.form_log_widths},
              {"form_nodes_per_log_unit", o.form_nodes_per_log_unit},
              {"oracle", o.run_oracle},
              {"oracle_slopes", o.oracle_slopes},
              {"oracle_extent", o.oracle_extent},
              {"oracle_max_steps", o.oracle_max_steps},
              {"exhaustive", o.exhaustive},
              {"approximate_band", o.approximate_band}};
}

SweepAxis read_axis(const Json* j, const std::string& path, Errors& errors) {
  SweepAxis a;
  if (!j) {
    errors.add(path, "required");
    return a;
  }
  ObjectReader r(*j, path, errors);
  if (!r.ok()) return a;
  a.min = r.number("min", std::nullopt, finite, "must be finite");
  a.max = r.number("max", std::nullopt, finite, "must be finite");
  a.steps = static_cast<int>(r.integer("steps", std::nullopt, 0));
  if (a.steps > 1 && !(a.max > a.min)) errors.add(r.field("max"), "must exceed min");
  r.finish();
  return a;
}

Json axis_json(const SweepAxis& a) { return Json{{"min", a.min}, {"max", a.max}, {"steps", a.steps}}; }

const std::set<std::string> kCommands = {"classify", "hardy-min", "form-min", "shoot", "cutoff-check", "sweep"};

CommandParams read_params(const std::string& command, const Json& j, const std::string& path, Errors& errors) {
  if (command == "classify") return ClassifyParams{read_classify_options(j, path, errors)};
  ObjectReader r(j, path, errors);
  if (command == "hardy-min") {
    HardyMinParams p;
    p.dimension = static_cast<int>(r.integer("dimension", std::nullopt, 3));
    p.R0 = r.number("R0", 1.0, positive, "must be positive");
    p.ratio = r.number("ratio", std::nullopt, above_one, "must be > 1");
    p.n = static_cast<int>(r.integer("n", p.n, 16));
    r.finish();
    return p;
  }
  if (command == "form-min") {
    FormMinParams p;
    const std::vector<double> a = r.numbers("annulus", {}, positive, "must be positive");
    if (!r.has("annulus")) {
      if (r.ok()) errors.add(r.field("annulus"), "required");
    } else if (a.size() != 2 || !(a[0] < a[1])) {
      errors.add(r.field("annulus"), "expected [inner, outer] with inner < outer");
    } else {
      p.inner = a[0];
      p.outer = a[1];
    }
    p.n = static_cast<int>(r.integer("n", p.n, 16));
    r.finish();
    return p;
  }
  if (command == "shoot") {
    ShootParams p;
    p.u0 = r.number("u0", p.u0, positive, "must be positive");
    p.slope = r.number("slope", p.slope, finite, "must be finite");
    p.rmax = r.number("rmax", std::nullopt, positive, "must be positive");
    p.rel_tol = r.number("rel_tol", p.rel_tol, positive, "must be positive");
    p.max_steps = static_cast<std::size_t>(r.integer("max_steps", static_cast<long long>(p.max_steps), 1));
    r.finish();
    return p;
  }
  if (command == "cutoff-check") {
    CutoffCheckParams p;
    p.dimension = static_cast<int>(r.integer("dimension", std::nullopt, 3));
    p.R = r.number("R", std::nullopt, positive, "must be positive");
    p.gamma = r.number("gamma", std::nullopt, above_one, "must be > 1");
    r.finish();
    return p;
  }
  SweepParams p;
  p.family = r.string("family", p.family);
  if (p.family != "power" && p.family != "inverse_square")
    errors.add(r.field("family"), "must be power or inverse_square");
  p.dimension = static_cast<int>(r.integer("dimension", p.dimension, 3));
  p.R0 = r.number("R0", p.R0, positive, "must be positive");
  p.b0 = r.number("b0", p.b0, finite, "must be finite");
  p.c0 = r.number("c0", p.c0, finite, "must be finite");
  if (r.ok()) {
    p.x = read_axis(r.find("x"), r.field("x"), errors);
    p.y = read_axis(r.find("y"), r.field("y"), errors);
  }
  p.workers = static_cast<int>(r.integer("workers", 0, 0));
  if (const Json* c = r.find("classify")) p.classify = read_classify_options(*c, r.field("classify"), errors);
  r.finish();
  return p;
}

Json params_json(const CommandParams& params) {
  return std::visit(
      [](const auto& p) -> Json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ClassifyParams>) {
          return classify_options_json(p.options);
        } else if constexpr (std::is_same_v<T, HardyMinParams>) {
          return Json{{"dimension", p.dimension}, {"R0", p.R0}, {"ratio", p.ratio}, {"n", p.n}};
        } else if constexpr (std::is_same_v<T, FormMinParams>) {
          return Json{{"annulus", {p.inner, p.outer}}, {"n", p.n}};
        } else if constexpr (std::is_same_v<T, ShootParams>) {
          return Json{{"u0", p.u0}, {"slope", p.slope}, {"rmax", p.rmax}, {"rel_tol", p.rel_tol}, {"max_steps", p.max_steps}};
        } else if constexpr (std::is_same_v<T, CutoffCheckParams>) {
          return Json{{"dimension", p.dimension}, {"R", p.R}, {"gamma", p.gamma}};
        } else {
          return Json{{"family", p.family}, {"dimension", p.dimension}, {"R0", p.R0}, {"b0", p.b0},
                      {"c0", p.c0}, {"x", axis_json(p.x)}, {"y", axis_json(p.y)}, {"workers", p.workers},
                      {"classify", classify_options_json(p.classify)}};
        }
      },
      params);
}

}  // namespace

RunConfig config_from_json(const Json& j) {
  Errors errors;
  ObjectReader r(j, "", errors);
  errors.raise_if_any();
  RunConfig cfg;
  cfg.command = r.string("command", std::nullopt);
  const bool known = kCommands.count(cfg.command) > 0;
  if (!cfg.command.empty() && !known) errors.add("command", "unknown command");

  if (const Json* p = r.find("problem")) cfg.problem = read_problem(*p, "problem", errors);
  else if (cfg.command == "classify" || cfg.command == "form-min" || cfg.command == "shoot")
    errors.add("problem", "required");

  const Json empty = Json::object();
  const Json* opts = r.find("options");
  if (known) cfg.params = read_params(cfg.command, opts ? *opts : empty, "options", errors);

  if (const Json* o = r.find("output")) {
    ObjectReader out(*o, "output", errors);
    cfg.output.report = out.string("report", "");
    cfg.output.csv = out.string("csv", "");
    out.finish();
  }
  r.finish();
  errors.raise_if_any();
  return cfg;
}

Json to_json(const RunConfig& config) {
  Json j{{"command", config.command},
         {"options", params_json(config.params)},
         {"output", Json{{"report", config.output.report}, {"csv", config.output.csv}}}};
  if (config.problem) j["problem"] = to_json(*config.problem);
  return j;
}

// ---------------------------------------------------------------- reports

namespace {

Json witness_json(const Witness& w) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, AnnulusWitness>) {
          return Json{{"R", x.R}, {"gamma", x.gamma}, {"quotient", num(x.quotient)}, {"threshold", x.threshold}};
        } else if constexpr (std::is_same_v<T, LimitWitness>) {
          return Json{{"value", num(x.value)}, {"threshold", num(x.threshold)}};
        } else if constexpr (std::is_same_v<T, DivergenceTrace>) {
          Json J = Json::array();
          for (double v : x.J_values) J.push_back(num(v));
          return Json{{"radii", x.radii},
                      {"J", J},
                      {"fitted_growth_exponent", num(x.fitted_growth_exponent)},
                      {"eventually_increasing", x.eventually_increasing}};
        } else {
          return Json{{"t_star", x.t_star},
                      {"ratio", x.ratio},
                      {"verified_ratio", x.verified_ratio},
                      {"inner", std::exp(x.grid.S0())},
                      {"outer", std::exp(x.grid.S1())},
                      {"nodes", x.grid.n()},
                      {"phi", x.phi}};
        }
      },
      w);
}

}  // namespace

Json to_json(const TraceEntry& e) {
  return Json{{"criterion", e.criterion}, {"value", num(e.value)},     {"threshold", num(e.threshold)},
              {"margin", num(e.margin)},  {"outcome", e.outcome},      {"approximate", e.approximate},
              {"note", e.note},           {"evidence", witness_json(e.evidence)}};
}

Json to_json(const Verdict& v) {
  Json trace = Json::array();
  for (const auto& e : v.trace) trace.push_back(to_json(e));
  Json j{{"kind", to_string(v.kind)},
         {"criterion", v.criterion},
         {"margin", num(v.margin())},
         {"witness", witness_json(v.witness)},
         {"trace", trace},
         {"diagnostics", v.diagnostics},
         {"oracle", v.oracle ? Json(to_string(*v.oracle)) : Json(nullptr)}};
  if (v.kind == VerdictKind::ExistenceConstructed) {
    j["supersolution"] = Json{{"m", v.m}, {"R1", v.R1}, {"form", "r^-m"}};
  }
  return j;
}

namespace {

const char* to_string(ShootStatus s) {
  switch (s) {
    case ShootStatus::Completed: return "completed";
    case ShootStatus::ZeroFound: return "zero_found";
    case ShootStatus::StepUnderflow: return "step_underflow";
    case ShootStatus::StepLimit: return "step_limit";
    case ShootStatus::NonFinite: return "non_finite";
  }
  return "unknown";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

int run_classify(const RunConfig& cfg, const ClassifyParams& p, Json& result) {
  const Verdict v = classify(*cfg.problem, p.options);
  result["verdict"] = to_json(v);
  result["tolerance"] = Json{{"approximate_band", p.options.approximate_band}};
  return v.kind == VerdictKind::Inconclusive ? 2 : 0;
}

int run_hardy_min(const HardyMinParams& p, Json& result) {
  const EigenResult fine = exterior_hardy_minimum(p.dimension, p.R0, p.R0 * p.ratio, p.n);
  result["lambda_min"] = fine.lambda_min;
  const double S = std::log(p.ratio);
  const double beta = 0.5 * (p.dimension - 2);
  result["continuum_value"] = beta * beta + std::numbers::pi * std::numbers::pi / (S * S);
  result["n"] = p.n;
  result["resolution_warning"] = fine.resolution_warning;
  const EigenResult coarse = exterior_hardy_minimum(p.dimension, p.R0, p.R0 * p.ratio, std::max(16, p.n / 2));
  // Second-order scheme: Richardson estimate of the fine-grid error.
  result["error_estimate"] = std::abs(fine.lambda_min - coarse.lambda_min) / 3.0;
  return 0;
}

int run_form_min(const RunConfig& cfg, const FormMinParams& p, Json& result) {
  const Annulus ann(p.inner, p.outer);
  const std::vector<double> tg = default_t_grid();
  const FormMinimum fm = form_minimum(*cfg.problem, ann, p.n, tg);
  result["mu"] = fm.mu;
  result["t_star"] = fm.t_star;
  result["n"] = p.n;
  result["eigenvalue_rel_tol"] = 1e-12;
  const FormMinimum coarse = form_minimum(*cfg.problem, ann, std::max(16, p.n / 2), tg);
  result["error_estimate"] = std::abs(fm.mu - coarse.mu) / 3.0;
  result["certificate"] = fm.certificate ? witness_json(Witness(*fm.certificate)) : Json(nullptr);
  result["rejected_verified_ratio"] = fm.rejected_verified_ratio ? Json(*fm.rejected_verified_ratio) : Json(nullptr);
  return 0;
}

int run_shoot(const RunConfig& cfg, const ShootParams& p, Json& result, Json& body) {
  StepControl ctl;
  ctl.rel_tol = p.rel_tol;
  ctl.max_steps = p.max_steps;
  ctl.record_trajectory = !cfg.output.csv.empty();
  const ShootingResult res = shoot_first_zero(*cfg.problem, p.u0, p.slope, p.rmax, ctl);
  result["first_zero"] = res.first_zero ? Json(*res.first_zero) : Json(nullptr);
  result["status"] = to_string(res.status);
  result["final_radius"] = res.final_radius;
  result["min_value"] = res.min_value;
  result["max_abs_slope"] = num(res.max_abs_slope);
  result["steps"] = res.steps;
  result["tolerance"] = Json{{"rel_tol", ctl.rel_tol}, {"zero_tol_log_r", ctl.zero_tol}};
  if (!cfg.output.csv.empty()) write_file(cfg.output.csv, trajectory_csv(res));
  if (res.failed()) {
    body["error"] = Json{{"type", "numerical"}, {"message", std::string("integration stopped: ") + to_string(res.status)},
                         {"radius", res.final_radius}};
    return 1;
  }
  return 0;
}

int run_cutoff(const CutoffCheckParams& p, Json& result) {
  const CutoffTestFunction tf(p.R, p.gamma, p.dimension);
  const GradientBoundCheck chk = verify_gradient_bound(tf);
  const EnergyAndMasses em = energy_and_masses(tf, {});
  result["energy"] = chk.lhs;
  result["energy_error_estimate"] = em.energy.abs_error_estimate;
  result["bound"] = chk.rhs;
  result["holds"] = chk.holds;
  return 0;
}

int run_sweep(const RunConfig& cfg, const SweepParams& p, Json& result) {
  const std::vector<SweepRow> rows = sweep(p);
  const std::string csv = sweep_csv(p, rows);
  result["points"] = rows.size();
  std::size_t failed = 0;
  for (const auto& r : rows) failed += !r.error.empty();
  result["failed_points"] = failed;
  if (cfg.output.csv.empty()) {
    result["csv"] = csv;
  } else {
    write_file(cfg.output.csv, csv);
    result["csv_path"] = cfg.output.csv;
  }
  return 0;
}

}  // namespace

Report run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.body = Json{{"version", kToolVersion}, {"command", config.command}, {"config", to_json(config)}};
  Json result = Json::object();
  try {
    rep.exit_code = std::visit(
        [&](const auto& p) -> int {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ClassifyParams>) return run_classify(config, p, result);
          else if constexpr (std::is_same_v<T, HardyMinParams>) return run_hardy_min(p, result);
          else if constexpr (std::is_same_v<T, FormMinParams>) return run_form_min(config, p, result);
          else if constexpr (std::is_same_v<T, ShootParams>) return run_shoot(config, p, result, rep.body);
          else if constexpr (std::is_same_v<T, CutoffCheckParams>) return run_cutoff(p, result);
          else return run_sweep(config, p, result);
        },
        config.params);
  } catch (const NumericalError& e) {
    rep.body["error"] = Json{{"type", "numerical"}, {"message", e.what()}, {"radius", num(e.radius())}};
    rep.exit_code = 1;
  } catch (const std::exception& e) {
    rep.body["error"] = Json{{"type", "runtime"}, {"message", e.what()}};
    rep.exit_code = 1;
  }
  rep.body["result"] = std::move(result);
  rep.body["exit_code"] = rep.exit_code;
  rep.body["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------- sweeps

ProblemSpec sweep_problem(const SweepParams& p, double x, double y) {
  if (p.family == "inverse_square")
    return ProblemSpec(p.dimension, p.R0, RadialWeight::power(x, -1.0), RadialWeight::power(y, -2.0));
  return ProblemSpec(p.dimension, p.R0, RadialWeight::power(p.b0, x), RadialWeight::power(p.c0, y));
}

int resolve_workers(int requested) {
  if (const char* env = std::getenv("LIOUVILLE_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<SweepRow> sweep(const SweepParams& p) {
  const std::vector<double> xs = p.x.values(), ys = p.y.values();
  std::vector<SweepRow> rows(xs.size() * ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = 0; k < ys.size(); ++k) {
      rows[i * ys.size() + k].x = xs[i];
      rows[i * ys.size() + k].y = ys[k];
    }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t idx; (idx = next.fetch_add(1)) < rows.size();) {
      SweepRow& row = rows[idx];
      try {
        const Verdict v = classify(sweep_problem(p, row.x, row.y), p.classify);
        row.kind = v.kind;
        row.criterion = v.criterion;
        row.margin = v.margin();
        row.oracle = v.oracle ? to_string(*v.oracle) : "";
      } catch (const std::exception& e) {
        row.kind = VerdictKind::Inconclusive;
        row.error = e.what();
      }
    }
  };
  const int workers = std::min<int>(resolve_workers(p.workers), std::max<std::size_t>(rows.size(), 1));
  std::vector<std::jthread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  return rows;
}

std::string sweep_csv(const SweepParams& p, const std::vector<SweepRow>& rows) {
  const bool inv = p.family == "inverse_square";
  std::ostringstream os;
  os << (inv ? "sigma,theta" : "lambda,mu") << ",verdict,criterion,margin,oracle,error\n";
  char buf[64];
  for (const auto& r : rows) {
    std::string err = r.error;
    for (std::size_t pos = 0; (pos = err.find('"', pos)) != std::string::npos; pos += 2) err.insert(pos, "\"");
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", r.x, r.y);
    os << buf << to_string(r.kind) << ',' << r.criterion << ',';
    std::snprintf(buf, sizeof buf, "%.9g", r.margin);
    os << buf << ',' << r.oracle << ',';
    if (!err.empty()) os << '"' << err << '"';
    os << '\n';
  }
  return os.str();
}

}  // namespace liouville
