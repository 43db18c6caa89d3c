// Command-line front end: classification, eigenvalue and shooting runs, sweeps.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liouville/errors.hpp"
#include "liouville/report.hpp"

using liouville::Json;

namespace {

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw liouville::ConfigError({path}, {e.what()});
  }
}

// A config file is either a full run configuration or just its command-specific part.
Json as_run_config(const Json& file, const std::string& command, const std::string& part) {
  if (file.is_object() && file.contains("command")) return file;
  Json j{{"command", command}};
  j[part] = file;
  return j;
}

int emit(const liouville::Report& rep, const std::string& report_path) {
  const std::string text = rep.body.dump(2) + "\n";
  if (report_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(report_path);
    if (!f) {
      std::cerr << "cannot write " << report_path << "\n";
      return 1;
    }
    f << text;
  }
  return rep.exit_code;
}

int config_error(const liouville::ConfigError& e) {
  Json fields = Json::array();
  for (std::size_t i = 0; i < e.fields().size(); ++i)
    fields.push_back(Json{{"field", e.fields()[i]}, {"reason", i < e.reasons().size() ? e.reasons()[i] : ""}});
  std::cerr << Json{{"error", "invalid configuration"}, {"fields", fields}}.dump(2) << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive supersolutions of -Δu + b|∇u| = cu on exterior domains"};
  app.require_subcommand(1);
  std::string report_path;
  app.add_option("--report", report_path, "Write the JSON report here instead of stdout");

  std::string config_path;
  std::vector<double> annulus;
  int dim = 3, n = 0, workers = 0;
  double ratio = 0, R0 = 1, slope = 0, rmax = 0, u0 = 1, R = 1, gamma = 2;
  std::string out_path;
  bool stop_early = false, no_oracle = false;

  auto* classify = app.add_subcommand("classify", "Classify a problem");
  classify->add_option("--config", config_path, "Problem JSON")->required()->check(CLI::ExistingFile);
  classify->add_flag("--stop-early", stop_early, "Stop at the first conclusive criterion");
  classify->add_flag("--no-oracle", no_oracle, "Skip the shooting oracle");

  auto* hardy = app.add_subcommand("hardy-min", "Exterior Hardy minimum on an annulus");
  hardy->add_option("--dim", dim)->required();
  hardy->add_option("--ratio", ratio, "R1/R0")->required();
  hardy->add_option("--n", n, "Interior nodes")->default_val(4000);
  hardy->add_option("--R0", R0)->default_val(1.0);

  auto* form = app.add_subcommand("form-min", "Minimize the quadratic-form ratio on an annulus");
  form->add_option("--config", config_path, "Problem JSON")->required()->check(CLI::ExistingFile);
  form->add_option("--annulus", annulus, "Inner and outer radius")->expected(2)->required();
  form->add_option("--n", n, "Interior nodes")->default_val(2000);

  auto* shoot = app.add_subcommand("shoot", "Integrate the radial equation to its first zero");
  shoot->add_option("--config", config_path, "Problem JSON")->required()->check(CLI::ExistingFile);
  shoot->add_option("--slope", slope, "u'(R0)")->default_val(0.0);
  shoot->add_option("--u0", u0, "u(R0)")->default_val(1.0);
  shoot->add_option("--rmax", rmax)->required();
  shoot->add_option("--csv", out_path, "Trajectory CSV");

  auto* cutoff = app.add_subcommand("cutoff-check", "Check the cutoff energy bound");
  cutoff->add_option("--dim", dim)->required();
  cutoff->add_option("--R", R)->required();
  cutoff->add_option("--gamma", gamma)->required();

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
  sweep->add_option("--config", config_path, "Sweep JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_path, "CSV output");
  sweep->add_option("--workers", workers, "Worker threads (LIOUVILLE_WORKERS takes precedence)");

  auto* runcmd = app.add_subcommand("run", "Run a full configuration file");
  runcmd->add_option("--config", config_path, "Run configuration JSON")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Json cfg;
    if (*classify) {
      cfg = as_run_config(read_json_file(config_path), "classify", "problem");
      if (stop_early) cfg["options"]["exhaustive"] = false;
      if (no_oracle) cfg["options"]["oracle"] = false;
    } else if (*hardy) {
      cfg = Json{{"command", "hardy-min"}, {"options", {{"dimension", dim}, {"ratio", ratio}, {"n", n}, {"R0", R0}}}};
    } else if (*form) {
      cfg = as_run_config(read_json_file(config_path), "form-min", "problem");
      cfg["options"]["annulus"] = annulus;
      cfg["options"]["n"] = n;
    } else if (*shoot) {
      cfg = as_run_config(read_json_file(config_path), "shoot", "problem");
      cfg["options"]["slope"] = slope;
      cfg["options"]["u0"] = u0;
      cfg["options"]["rmax"] = rmax;
      if (!out_path.empty()) cfg["output"]["csv"] = out_path;
    } else if (*cutoff) {
      cfg = Json{{"command", "cutoff-check"}, {"options", {{"dimension", dim}, {"R", R}, {"gamma", gamma}}}};
    } else if (*sweep) {
      cfg = as_run_config(read_json_file(config_path), "sweep", "options");
      if (!out_path.empty()) cfg["output"]["csv"] = out_path;
      if (workers > 0) cfg["options"]["workers"] = workers;
    } else {
      cfg = read_json_file(config_path);
    }
    const liouville::RunConfig rc = liouville::config_from_json(cfg);
    std::string target = report_path;
    if (target.empty()) target = rc.output.report;
    return emit(liouville::run(rc), target);
  } catch (const liouville::ConfigError& e) {
    return config_error(e);
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", e.what()}}.dump(2) << "\n";
    return 1;
  }
}
