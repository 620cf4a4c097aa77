#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "ulab/harness.hpp"

using namespace ulab;

namespace {

std::string error_path(const Json& j) {
  try {
    ExperimentConfig::from_json(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

ExperimentConfig gauss_config(std::vector<int> primes) {
  ExperimentConfig c;
  c.name = "gauss";
  c.primes = std::move(primes);
  c.dimension = 1;
  c.vectors = {{1}};
  c.polynomials = {{0, 0, 1}};
  FunctionRecipe down, up;
  down.kind = up.kind = "character";
  down.frequency = {-1};
  up.frequency = {1};
  c.functions = {down, up};
  c.trials = 1;
  return c;
}

ExperimentConfig constant_config(const std::string& suite, std::vector<int> primes) {
  ExperimentConfig c = default_config(suite);
  FunctionRecipe one;
  one.kind = "constant";
  c.functions = {one};
  c.primes = std::move(primes);
  return c;
}

}  // namespace

TEST(Config, ParsesFullDocument) {
  const Json j = Json::parse(R"({
    "schema_version": 1,
    "progression": {"primes": [3, 5], "dimension": 2, "vectors": [[1, 0], [0, 1]],
                    "polynomials": [[0, 0, 1], [0, 1, 1]], "theorem_mode": true},
    "functions": [{"kind": "unit_phase", "seed": 4}, {"kind": "indicator", "seed": 2, "density": 0.3}],
    "experiment": {"name": "demo", "trials": 3, "seed": 9, "cost_cap": 1e8, "tolerance": 1e-10}
  })");
  const auto c = ExperimentConfig::from_json(j);
  EXPECT_EQ(c.primes, (std::vector<int>{3, 5}));
  EXPECT_EQ(c.polynomials.size(), 2u);
  EXPECT_EQ(c.functions[1].kind, "indicator");
  EXPECT_DOUBLE_EQ(c.functions[1].density, 0.3);
  EXPECT_EQ(c.trials, 3);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_DOUBLE_EQ(*c.cost_cap, 1e8);

  const auto again = ExperimentConfig::from_json(Json::parse(c.to_json().dump()));
  EXPECT_EQ(again.to_json(), c.to_json());
}

TEST(Config, ErrorsCarryJsonPointers) {
  EXPECT_EQ(error_path(Json::parse(R"({"progression": {"primes": [3, 4]}})")), "/progression/primes/1");
  EXPECT_EQ(error_path(Json::parse(R"({"progression": {"primes": []}})")), "/progression/primes");
  EXPECT_EQ(error_path(Json::parse(R"({"progression": {"vectors": [[1, 0], [1]]}})")), "/progression/vectors/1");
  EXPECT_EQ(error_path(Json::parse(R"({"progression": {"polynomials": [[0, 1], "x"]}})")), "/progression/polynomials/1");
  EXPECT_EQ(error_path(Json::parse(R"({"functions": [{"kind": "unit_phase"}]})")), "/functions/0/seed");
  EXPECT_EQ(error_path(Json::parse(R"({"functions": [{"kind": "sparkle", "seed": 1}]})")), "/functions/0/kind");
  EXPECT_EQ(error_path(Json::parse(R"({"functions": [{"kind": "indicator", "seed": 1, "density": 2}]})")),
            "/functions/0/density");
  EXPECT_EQ(error_path(Json::parse(R"({"functions": [{"kind": "character"}]})")), "/functions/0/frequency");
  EXPECT_EQ(error_path(Json::parse(R"({"experiment": {"trials": 0}})")), "/experiment/trials");
  EXPECT_EQ(error_path(Json::parse(R"({"experiment": {"seed": "x"}})")), "/experiment/seed");
  EXPECT_EQ(error_path(Json::parse(R"({"experiment": {"bogus": 1}})")), "/experiment/bogus");
  EXPECT_EQ(error_path(Json::parse(R"({"extra": 1})")), "/extra");
  EXPECT_EQ(error_path(Json::parse(R"({"schema_version": 2})")), "/schema_version");
  EXPECT_EQ(error_path(Json::parse("[1, 2]")), "/");
  // structural problems surface at load time
  EXPECT_EQ(error_path(Json::parse(R"({"progression": {"vectors": [[1, 0]], "polynomials": [[0, 1], [0, 2]]}})")),
            "/progression");
  EXPECT_EQ(error_path(Json::parse("{}")), "<accepted>");
}

TEST(Config, Defaults) {
  const auto c = default_config("tcount");
  EXPECT_EQ(c.primes, (std::vector<int>{3, 5, 7, 11, 13}));
  EXPECT_EQ(default_config("identity").primes, (std::vector<int>{3, 5, 7}));
  EXPECT_EQ(default_config("probe").polynomials.size(), 3u);
  EXPECT_THROW(default_config("nonsense"), Error);
  EXPECT_EQ(suite_names().size(), 6u);
}

TEST(Config, RecipesBuildFunctions) {
  FieldConfig cfg(5, 2);
  FunctionRecipe r;
  r.kind = "character";
  r.frequency = {1, 2};
  const auto chi = r.build(cfg);
  for (Index x = 0; x < cfg.order(); ++x) {
    const auto c = cfg.point(x).coords;
    EXPECT_NEAR(std::abs(chi[x] - oracle::e(5, c[0] + 2 * c[1])), 0, 1e-12);
  }
  FunctionRecipe u;
  u.seed = 3;
  EXPECT_EQ(u.build(cfg, 7).values(), u.build(cfg, 7).values());
  EXPECT_NE(u.build(cfg, 7).values(), u.build(cfg, 8).values());

  ExperimentConfig e;
  FunctionRecipe one;
  one.kind = "constant";
  one.value = 0.5;
  e.functions = {u, one};
  const auto fs = e.functions_for(cfg, 4, 0);
  ASSERT_EQ(fs.size(), 4u);
  EXPECT_EQ(fs[3][0], Complex(0.5, 0));
}

TEST(Report, JsonShape) {
  Report rep;
  rep.experiment = "x";
  rep.seed = 4;
  Record a;
  a.prime = 3;
  a.name = "one";
  a.measured["v"] = 1.5;
  a.runtime_ms = 12;
  rep.add(a);
  EXPECT_TRUE(rep.pass);
  Record b = a;
  b.pass = false;
  rep.add(b);
  EXPECT_FALSE(rep.pass);

  const auto j = rep.to_json();
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["records"].size(), 2u);
  EXPECT_EQ(j["records"][0]["runtime_ms"], 12.0);
  EXPECT_FALSE(rep.to_json(false)["records"][0].contains("runtime_ms"));
  EXPECT_EQ(j["environment"]["version"], kVersion);
  EXPECT_TRUE(j["environment"].contains("cost_cap"));
}

TEST(Report, LogLogSlope) {
  const std::vector<double> ps{5, 7, 11, 13};
  std::vector<double> ys;
  for (double p : ps) ys.push_back(3 / std::sqrt(p));
  EXPECT_NEAR(*log_log_slope(ps, ys), -0.5, 1e-12);
  EXPECT_FALSE(log_log_slope({5, 7}, {0, 0}).has_value());
  EXPECT_FALSE(log_log_slope({5}, {1}).has_value());
}

TEST(Suites, IdentityIsDeterministic) {
  auto c = default_config("identity");
  c.primes = {3};
  c.trials = 2;
  const Report a = run_identity_suite(c);
  const Report b = run_identity_suite(c);
  EXPECT_TRUE(a.pass);
  EXPECT_FALSE(a.records.empty());
  EXPECT_EQ(a.to_json(false).dump(), b.to_json(false).dump());
  c.seed = 2;
  EXPECT_NE(run_identity_suite(c).to_json(false).dump(), a.to_json(false).dump());
}

TEST(Suites, CountDecayConstantFunctions) {
  const Report r = run_tcount_decay(constant_config("tcount", {3, 5, 7}));
  EXPECT_TRUE(r.pass);
  for (const auto& rec : r.records) EXPECT_LE(rec.measured["max_gap"].get<double>(), 1e-12);
}

TEST(Suites, CountDecayGaussRecipe) {
  const Report r = run_tcount_decay(gauss_config({5, 13}));
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_NEAR(r.records[0].measured["max_gap"].get<double>(), oracle::gauss_magnitude(5), 1e-9);
  EXPECT_NEAR(r.records[1].measured["max_gap"].get<double>(), oracle::gauss_magnitude(13), 1e-9);
  EXPECT_NEAR(r.summary["slope"].get<double>(), -0.5, 1e-9);
  EXPECT_TRUE(r.pass);
}

TEST(Suites, CountDecayNeedsIndependence) {
  auto c = default_config("tcount");
  c.vectors = {{1, 0}, {0, 1}, {1, 1}};
  c.polynomials = {{0, 0, 1}, {0, 1}, {0, 1, 1}};
  EXPECT_THROW(run_tcount_decay(c), Error);
}

TEST(Suites, ControlWithConstantFunctions) {
  const Report r = run_control_sanity(constant_config("control", {5}));
  EXPECT_TRUE(r.pass);
  bool orthogonal = false;
  for (const auto& rec : r.records)
    if (rec.name == "control_orthogonal") {
      orthogonal = true;
      EXPECT_LE(rec.measured["lambda"].get<double>(), rec.measured["bound"].get<double>() + 1e-9);
    }
  EXPECT_TRUE(orthogonal);
}

TEST(Suites, BoundsSearch) {
  auto c = default_config("bounds");
  c.primes = {3};
  c.dimension = 1;
  c.vectors = {{1}, {2}};
  c.densities = {0.5, 1.0};
  c.samples = 5;
  const Report r = run_bounds_search(c);
  EXPECT_TRUE(r.pass);
  ASSERT_GE(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].measured["full_set_count"], 3 * 2);
  EXPECT_EQ(r.records[0].measured["grid"][1]["containing"], 5);
  EXPECT_EQ(r.records[1].name, "exhaustive");
  EXPECT_EQ(r.records[1].measured["subsets"], 8);
}

TEST(Suites, ProbeWithConstantFunctions) {
  const Report r = run_degree_lowering_probe(constant_config("probe", {5}));
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.records.size(), 3u);
  for (const auto& rec : r.records)
    for (const auto& prof : rec.measured["profiles"])
      for (const auto& v : prof) EXPECT_NEAR(v.get<double>(), 1.0, 1e-12);
}

TEST(Suites, RunSuiteDispatch) {
  EXPECT_THROW(run_suite("nonsense"), Error);
  auto base = default_config("identity");
  base.trials = 1;
  const Report r = run_suite("identity", base, 5, std::vector<int>{3});
  EXPECT_EQ(r.seed, 5u);
  for (const auto& rec : r.records) EXPECT_EQ(rec.prime, 3);
}
