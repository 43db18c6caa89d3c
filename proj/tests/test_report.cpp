#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>

#include "liouville/errors.hpp"
#include "liouville/report.hpp"

using namespace liouville;

namespace {

Json unit_gradient_problem() {
  return Json::parse(R"({"dimension": 3, "R0": 1,
    "b": {"type": "power", "coeff": 1, "exponent": 0},
    "c": {"type": "sum", "terms": [{"coeff": 0.25, "exponent": 0}, {"coeff": 1, "exponent": -0.5}]}})");
}

std::vector<std::string> error_fields(const Json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.fields();
  }
  return {};
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

Json strip_wall_time(Json body) {
  body.erase("wall_time_seconds");
  return body;
}

SweepParams inverse_square_sweep(double theta_min, double theta_max, int steps) {
  SweepParams p;
  p.family = "inverse_square";
  p.dimension = 3;
  p.x = {0.0, 0.0, 1};
  p.y = {theta_min, theta_max, steps};
  p.workers = 2;
  p.classify.run_oracle = false;
  return p;
}

}  // namespace

TEST(WeightJson, RoundTrip) {
  for (const RadialWeight& w : {RadialWeight::power(2, -1.5), RadialWeight(SumOfPowerLaws{{{1, 0}, {0.5, -2}}}),
                                RadialWeight(Tabulated{{1, 2, 4}, {1, 0.5, 0.2}, -2})}) {
    const Json j = to_json(w);
    EXPECT_EQ(to_json(weight_from_json(j)), j);
    for (double r : {1.0, 3.0, 10.0}) EXPECT_DOUBLE_EQ(weight_from_json(j)(r), w(r));
  }
}

TEST(WeightJson, InvalidTablesNameTheField) {
  const Json bad = Json::parse(R"({"type": "table", "grid": [1, 1, 2], "values": [1, 2], "tail_exponent": 0})");
  try {
    weight_from_json(bad, "problem.c");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_FALSE(e.fields().empty());
    for (const std::string& f : e.fields()) EXPECT_EQ(f.rfind("problem.c.", 0), 0u) << f;
  }
}

TEST(RunConfigJson, CanonicalRoundTripIsByteIdentical) {
  Json j{{"command", "classify"}, {"problem", unit_gradient_problem()}, {"options", {{"doublings", 12}}}};
  const std::string once = to_json(config_from_json(j)).dump(2);
  const std::string twice = to_json(config_from_json(Json::parse(once))).dump(2);
  EXPECT_EQ(once, twice);
  EXPECT_EQ(Json::parse(once)["options"]["doublings"], 12);
  EXPECT_TRUE(Json::parse(once)["options"].contains("approximate_band"));
}

TEST(RunConfigJson, EveryCommandRoundTrips) {
  const std::vector<Json> configs = {
      {{"command", "hardy-min"}, {"options", {{"dimension", 4}, {"ratio", 20}}}},
      {{"command", "form-min"}, {"problem", unit_gradient_problem()}, {"options", {{"annulus", {1, 50}}}}},
      {{"command", "shoot"}, {"problem", unit_gradient_problem()}, {"options", {{"rmax", 100}}}},
      {{"command", "cutoff-check"}, {"options", {{"dimension", 5}, {"R", 10}, {"gamma", 4}}}},
      {{"command", "sweep"},
       {"options", {{"x", {{"min", 0}, {"max", 1}, {"steps", 3}}}, {"y", {{"min", 0}, {"max", 2}, {"steps", 2}}}}}}};
  for (const Json& j : configs) {
    const Json canon = to_json(config_from_json(j));
    EXPECT_EQ(to_json(config_from_json(canon)), canon) << j.dump();
  }
}

TEST(RunConfigJson, AllErrorsAreCollected) {
  Json j = Json::parse(R"({"command": "classify", "bogus": 1,
    "problem": {"dimension": 2, "R0": -1, "b": {"type": "spline"}, "c": {"type": "power", "coeff": 1}},
    "options": {"doublings": -3, "colour": "red"}})");
  const std::vector<std::string> f = error_fields(j);
  for (const char* want : {"bogus", "problem.dimension", "problem.R0", "problem.b.type", "problem.c.exponent",
                           "options.colour"})
    EXPECT_TRUE(contains(f, want)) << want;
  EXPECT_GE(f.size(), 7u);
}

TEST(RunConfigJson, MissingProblemAndUnknownCommand) {
  EXPECT_TRUE(contains(error_fields({{"command", "shoot"}, {"options", {{"rmax", 10}}}}), "problem"));
  EXPECT_TRUE(contains(error_fields({{"command", "integrate"}}), "command"));
  EXPECT_TRUE(contains(error_fields(Json::object()), "command"));
}

TEST(RunConfigJson, ErrorMessageListsFieldAndReason) {
  try {
    config_from_json({{"command", "hardy-min"}, {"options", {{"dimension", 2}, {"ratio", 10}}}});
    FAIL();
  } catch (const ConfigError& e) {
    ASSERT_EQ(e.fields().size(), e.reasons().size());
    EXPECT_NE(std::string(e.what()).find("options.dimension"), std::string::npos);
  }
}

TEST(Run, HardyMin) {
  const Report r = run(config_from_json({{"command", "hardy-min"},
                                         {"options", {{"dimension", 3}, {"ratio", std::exp(2 * std::numbers::pi)}}}}));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NEAR(r.body["result"]["lambda_min"].get<double>(), 0.5, 0.005);
  EXPECT_LT(r.body["result"]["error_estimate"].get<double>(), 1e-5);
  EXPECT_EQ(r.body["version"], kToolVersion);
}

TEST(Run, Shoot) {
  const Json problem = Json::parse(
      R"({"dimension": 3, "R0": 1, "b": {"type": "power", "coeff": 0, "exponent": 0},
          "c": {"type": "power", "coeff": 1, "exponent": 0}})");
  const Report r = run(config_from_json({{"command", "shoot"}, {"problem", problem}, {"options", {{"rmax", 100}}}}));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NEAR(r.body["result"]["first_zero"].get<double>(), 1 + 3 * std::numbers::pi / 4, 1e-6);
  EXPECT_EQ(r.body["result"]["status"], "zero_found");
}

TEST(Run, ShootStepLimitIsAnError) {
  const Json problem = Json::parse(
      R"({"dimension": 3, "R0": 1, "b": {"type": "power", "coeff": 0, "exponent": 0},
          "c": {"type": "power", "coeff": 0.2, "exponent": -2}})");
  const Report r = run(config_from_json(
      {{"command", "shoot"}, {"problem", problem}, {"options", {{"rmax", 1e6}, {"max_steps", 3}}}}));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.body["error"]["type"], "numerical");
  EXPECT_TRUE(r.body["result"].contains("final_radius"));
}

TEST(Run, ClassifyUnitGradient) {
  const Report r = run(config_from_json({{"command", "classify"}, {"problem", unit_gradient_problem()},
                                         {"options", {{"oracle", false}}}}));
  EXPECT_EQ(r.exit_code, 0);
  const Json& v = r.body["result"]["verdict"];
  EXPECT_EQ(v["kind"], "Nonexistence");
  bool seen = false;
  for (const Json& e : v["trace"])
    if (e["criterion"] == "simple1") {
      seen = true;
      ASSERT_TRUE(e["evidence"].contains("J"));
      EXPECT_NEAR(e["evidence"]["J"][0].get<double>(), 1.0, 1e-12);
    }
  EXPECT_TRUE(seen);
}

TEST(Run, InconclusiveExitCode) {
  const Json problem = Json::parse(
      R"({"dimension": 3, "R0": 1, "b": {"type": "power", "coeff": 1, "exponent": -1},
          "c": {"type": "power", "coeff": 1, "exponent": -2}})");
  const Report r = run(config_from_json({{"command", "classify"}, {"problem", problem},
                                         {"options", {{"oracle", false}}}}));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(r.body["result"]["verdict"]["kind"], "Inconclusive");
}

TEST(Run, DeterministicApartFromWallTime) {
  const RunConfig cfg = config_from_json({{"command", "classify"}, {"problem", unit_gradient_problem()}});
  EXPECT_EQ(strip_wall_time(run(cfg).body).dump(), strip_wall_time(run(cfg).body).dump());
}

TEST(Run, NonFiniteValuesSerializeAsStrings) {
  const Report r = run(config_from_json({{"command", "classify"}, {"problem", unit_gradient_problem()},
                                         {"options", {{"oracle", false}}}}));
  const std::string text = r.body.dump();
  EXPECT_NO_THROW(Json::parse(text));
  bool saw_inf = false;
  for (const Json& e : r.body["result"]["verdict"]["trace"])
    if (e["value"].is_string()) saw_inf |= e["value"] == "inf";
  EXPECT_TRUE(saw_inf);
}

TEST(Sweep, EmptyGrid) {
  const SweepParams p = inverse_square_sweep(0.1, 1.0, 0);
  EXPECT_TRUE(sweep(p).empty());
  const Report r = run(config_from_json(
      {{"command", "sweep"},
       {"options", {{"family", "inverse_square"}, {"x", {{"min", 0}, {"max", 0}, {"steps", 1}}},
                    {"y", {{"min", 0}, {"max", 1}, {"steps", 0}}}}}}));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.body["result"]["points"], 0);
  EXPECT_EQ(r.body["result"]["csv"], "sigma,theta,verdict,criterion,margin,oracle,error\n");
}

TEST(Sweep, InverseSquareBoundary) {
  const std::vector<SweepRow> rows = sweep(inverse_square_sweep(0.05, 0.5, 10));
  ASSERT_EQ(rows.size(), 10u);
  for (const SweepRow& r : rows) {
    EXPECT_TRUE(r.error.empty());
    if (r.y > 0.25 * 1.1) EXPECT_EQ(r.kind, VerdictKind::Nonexistence) << r.y;
    if (r.y < 0.25 * 0.9) EXPECT_EQ(r.kind, VerdictKind::ExistenceConstructed) << r.y;
  }
}

TEST(Sweep, RowsComeBackInGridOrder) {
  SweepParams p = inverse_square_sweep(0.1, 1.0, 4);
  p.x = {0.0, 1.0, 3};
  p.workers = 3;
  const std::vector<SweepRow> rows = sweep(p);
  ASSERT_EQ(rows.size(), 12u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_DOUBLE_EQ(rows[i].x, p.x.values()[i / 4]);
    EXPECT_DOUBLE_EQ(rows[i].y, p.y.values()[i % 4]);
  }
  p.workers = 1;
  const std::vector<SweepRow> serial = sweep(p);
  EXPECT_EQ(sweep_csv(p, rows), sweep_csv(p, serial));
}

TEST(Sweep, PointErrorsAreRecorded) {
  SweepParams p = inverse_square_sweep(0.1, 0.5, 2);
  p.x = {-1.0, 0.0, 2};
  const std::vector<SweepRow> rows = sweep(p);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_FALSE(rows[1].error.empty());
  EXPECT_TRUE(rows[2].error.empty());
  EXPECT_NE(sweep_csv(p, rows).find('"'), std::string::npos);
}

TEST(Sweep, WorkerResolution) {
  unsetenv("LIOUVILLE_WORKERS");
  EXPECT_EQ(resolve_workers(5), 5);
  EXPECT_GE(resolve_workers(0), 1);
  setenv("LIOUVILLE_WORKERS", "3", 1);
  EXPECT_EQ(resolve_workers(0), 3);
  EXPECT_EQ(resolve_workers(5), 3);
  setenv("LIOUVILLE_WORKERS", "zero", 1);
  EXPECT_EQ(resolve_workers(5), 5);
  unsetenv("LIOUVILLE_WORKERS");
}

TEST(Sweep, AxisValues) {
  EXPECT_TRUE((SweepAxis{0, 1, 0}.values().empty()));
  EXPECT_EQ((SweepAxis{2, 5, 1}.values()), std::vector<double>{2});
  const std::vector<double> v = SweepAxis{-2, 2, 17}.values();
  ASSERT_EQ(v.size(), 17u);
  EXPECT_DOUBLE_EQ(v.front(), -2);
  EXPECT_DOUBLE_EQ(v.back(), 2);
  EXPECT_DOUBLE_EQ(v[8], 0);
}
