#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ulab/counting.hpp"

namespace ulab {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Thrown for malformed configuration; what() starts with the JSON pointer
// of the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : Error(ErrorCode::invalid_argument, path + ": " + message), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// kind: unit_phase | disk | indicator | character | quadratic_phase | constant
struct FunctionRecipe {
  std::string kind = "unit_phase";
  std::uint64_t seed = 0;
  double density = 0.5;
  std::vector<std::int64_t> frequency;
  std::vector<std::int64_t> quadratic;
  std::vector<std::int64_t> linear;
  double value = 1.0;

  bool random() const { return kind == "unit_phase" || kind == "disk" || kind == "indicator"; }
  GroupFunction build(const FieldConfig& cfg, std::uint64_t salt = 0) const;
};

struct ExperimentConfig {
  // progression
  std::vector<int> primes{3, 5, 7};
  int dimension = 2;
  std::vector<IntVec> vectors{{1, 0}, {0, 1}};
  std::vector<IntPoly> polynomials{{0, 0, 1}, {0, 1, 1}};
  std::vector<int> eta;
  bool theorem_mode = true;
  // one recipe per slot f_0..f_l; the last one repeats
  std::vector<FunctionRecipe> functions{FunctionRecipe{}};
  // experiment
  std::string name = "experiment";
  int trials = 10;
  std::uint64_t seed = 1;
  std::optional<double> cost_cap;
  double tolerance = kTolerance;
  std::vector<int> dimensions{1, 2};      // identity suite
  std::vector<double> densities{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};  // bounds search
  int samples = 20;                        // bounds search, per density
  bool exhaustive = true;                  // bounds search when p^D <= 16

  static ExperimentConfig from_json(const Json& j);
  OrderedJson to_json() const;

  ProgressionConfig progression(int p) const;
  std::vector<GroupFunction> functions_for(const FieldConfig& cfg, int count, std::uint64_t trial) const;
};

// Defaults for a named suite: identity, inequality, tcount, control,
// bounds, probe.
ExperimentConfig default_config(const std::string& suite);

struct Record {
  int prime = 0;
  std::string name;
  OrderedJson measured = OrderedJson::object();
  bool pass = true;
  double runtime_ms = 0;
};

struct Report {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<Record> records;
  OrderedJson summary = OrderedJson::object();
  bool pass = true;

  void add(Record r);
  OrderedJson to_json(bool include_runtime = true) const;
};

Report run_identity_suite(const ExperimentConfig& cfg);
Report run_inequality_suite(const ExperimentConfig& cfg);
Report run_tcount_decay(const ExperimentConfig& cfg);
Report run_control_sanity(const ExperimentConfig& cfg);
Report run_bounds_search(const ExperimentConfig& cfg);
Report run_degree_lowering_probe(const ExperimentConfig& cfg);

// suite: identity | inequality | tcount | control | bounds | probe | all.
// base supplies seed, primes and cost cap overrides.
Report run_suite(const std::string& suite, const std::optional<ExperimentConfig>& base = std::nullopt,
                 std::optional<std::uint64_t> seed = std::nullopt, std::optional<std::vector<int>> primes = std::nullopt);

const std::vector<std::string>& suite_names();

// Least-squares slope of log(y) against log(x), over entries with y > 0.
std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ulab
