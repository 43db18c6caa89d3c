#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "liouville/criteria.hpp"
#include "liouville/weights.hpp"

namespace liouville {

inline constexpr const char* kToolVersion = "1.0.0";

using Json = nlohmann::json;

// ---------------------------------------------------------------- weights and problems

Json to_json(const RadialWeight& w);
/// Throws ConfigError with dotted paths below `path`.
RadialWeight weight_from_json(const Json& j, const std::string& path = "weight");

Json to_json(const ProblemSpec& spec);
ProblemSpec problem_from_json(const Json& j, const std::string& path = "problem");

// ---------------------------------------------------------------- run configuration

struct ClassifyParams {
  ClassifyOptions options;
};

struct HardyMinParams {
  int dimension = 3;
  double R0 = 1.0;
  double ratio = 0.0;  ///< R1 / R0
  int n = 4000;
};

struct FormMinParams {
  double inner = 0.0;
  double outer = 0.0;
  int n = 2000;
};

struct ShootParams {
  double u0 = 1.0;
  double slope = 0.0;
  double rmax = 0.0;
  double rel_tol = 1e-9;
  std::size_t max_steps = 2'000'000;
};

struct CutoffCheckParams {
  int dimension = 3;
  double R = 1.0;
  double gamma = 2.0;
};

struct SweepAxis {
  double min = 0.0;
  double max = 0.0;
  int steps = 0;  ///< number of points, endpoints included; 0 gives an empty axis

  std::vector<double> values() const;
};

/// "power": b = b0 r^x, c = c0 r^y.  "inverse_square": b = x / r, c = y / r^2.
struct SweepParams {
  std::string family = "power";
  int dimension = 3;
  double R0 = 1.0;
  double b0 = 1.0;
  double c0 = 1.0;
  SweepAxis x;
  SweepAxis y;
  int workers = 0;  ///< 0: hardware concurrency; LIOUVILLE_WORKERS overrides
  ClassifyOptions classify;
};

using CommandParams =
    std::variant<ClassifyParams, HardyMinParams, FormMinParams, ShootParams, CutoffCheckParams, SweepParams>;

struct OutputPaths {
  std::string report;  ///< JSON report; empty: stdout
  std::string csv;     ///< sweep table or shooting trajectory
};

struct RunConfig {
  std::string command;
  std::optional<ProblemSpec> problem;  ///< required by classify, form-min, shoot
  CommandParams params;
  OutputPaths output;
};

/// Parses and validates; every invalid or unknown field is listed in the ConfigError.
RunConfig config_from_json(const Json& j);
/// Canonical form: sorted keys, every option spelled out.
Json to_json(const RunConfig& config);

// ---------------------------------------------------------------- reports

struct Report {
  Json body;
  /// 0 conclusive verdict or numeric success, 2 Inconclusive, 1 error.
  int exit_code = 0;
};

Json to_json(const Verdict& v);
Json to_json(const TraceEntry& e);

/// Dispatches to the command. Numeric failures are reported in body["error"]
/// together with whatever partial results exist.
Report run(const RunConfig& config);

// ---------------------------------------------------------------- sweeps

struct SweepRow {
  double x = 0.0;
  double y = 0.0;
  VerdictKind kind = VerdictKind::Inconclusive;
  std::string criterion;
  double margin = 0.0;
  std::string oracle;
  std::string error;
};

/// Points run concurrently; rows come back in grid order (x outer, y inner).
std::vector<SweepRow> sweep(const SweepParams& params);

ProblemSpec sweep_problem(const SweepParams& params, double x, double y);

/// Worker count: LIOUVILLE_WORKERS if set, else `requested` if positive, else hardware concurrency.
int resolve_workers(int requested);

std::string sweep_csv(const SweepParams& params, const std::vector<SweepRow>& rows);

}  // namespace liouville
