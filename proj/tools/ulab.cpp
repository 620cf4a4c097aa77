// ulab: command-line front end for the library.
//
//   ulab norm    [--config f.json]               box or Gowers norm of one function
//   ulab pet derive [--config f.json] [--vectors] PET run, directions and audit
//   ulab count   [--config f.json]               Lambda, structured count, gap per prime
//   ulab search  --set s.json [--config f.json]  progression instances inside a set
//   ulab verify  <suite> [--json out.json]       identity | inequality | tcount | control
//                                                 | bounds | probe | all
//
// Exit status: 0 pass, 1 when an identity or inequality check fails, 2 usage
// or configuration error. Other suites record their verdict in the report only.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ulab/concat.hpp"
#include "ulab/harness.hpp"
#include "ulab/pet.hpp"
#include "ulab/types.hpp"

namespace {

using namespace ulab;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("/", std::string("malformed JSON: ") + e.what());
  }
}

struct Loaded {
  ExperimentConfig cfg;
  Json raw = Json::object();
};

Loaded load_config(const std::string& path, const std::string& suite = "identity") {
  Loaded l;
  if (path.empty()) {
    l.cfg = default_config(suite);
    return l;
  }
  l.raw = load_json(path);
  l.cfg = ExperimentConfig::from_json(l.raw);
  return l;
}

std::vector<FpPoint> read_points(const Json& arr, const FieldConfig& cfg, const std::string& path) {
  if (!arr.is_array()) throw ConfigError(path, "expected an array of coordinate tuples");
  std::vector<FpPoint> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = path + "/" + std::to_string(i);
    if (!arr[i].is_array() || static_cast<int>(arr[i].size()) != cfg.dimension())
      throw ConfigError(at, "expected a tuple of length " + std::to_string(cfg.dimension()));
    IntVec v;
    for (const auto& c : arr[i]) {
      if (!c.is_number_integer()) throw ConfigError(at, "coordinates must be integers");
      v.push_back(c.get<std::int64_t>());
    }
    out.push_back(cfg.reduce(v));
  }
  return out;
}

int cmd_norm(const std::string& config) {
  const Loaded l = load_config(config);
  const Json spec = l.raw.value("norm", Json::object());
  const int p = spec.value("prime", l.cfg.primes.front());
  const FieldConfig cfg(p, l.cfg.dimension);
  const std::string type = spec.value("type", std::string("box"));
  const GroupFunction f = l.cfg.functions.front().build(cfg);
  double value = 0;
  if (type == "gowers") {
    const auto dirs = read_points(spec.value("directions", Json::array({l.cfg.vectors.front()})), cfg, "/norm/directions");
    if (dirs.size() != 1) throw ConfigError("/norm/directions", "Gowers norms take one direction");
    value = gowers_norm(f, dirs.front(), spec.value("s", 2));
  } else if (type == "box") {
    const auto dirs = read_points(spec.value("directions", Json(l.cfg.vectors)), cfg, "/norm/directions");
    value = box_norm(f, directions(cfg, dirs));
  } else {
    throw ConfigError("/norm/type", "expected 'box' or 'gowers'");
  }
  std::printf("%s norm at p=%d: %.12f\n", type.c_str(), p, value);
  return 0;
}

int cmd_pet(const std::string& config, bool concrete) {
  const Loaded l = load_config(config);
  const ProgressionConfig pc = l.cfg.progression(l.cfg.primes.front());
  const bool symbolic = !concrete;
  const PolyFamily fam = initial_family(pc, symbolic);
  const PetResult r = pet_run(fam);
  std::cout << "family: " << format_family(fam, symbolic) << "\n";
  for (std::size_t i = 0; i < r.steps.size(); ++i)
    std::cout << "step " << i + 1 << " (m=" << r.steps[i] << "): " << format_family(r.history[i + 1], symbolic) << "\n";
  std::cout << "s' = " << r.s_prime << ", s = " << r.s << "\n";
  for (std::size_t j = 0; j < r.directions.size(); ++j)
    std::cout << "c" << j + 1 << " = " << format_poly(r.directions[j], symbolic) << "\n";
  const AuditResult audit = pet_coefficient_audit(r, fam);
  std::cout << "audit: " << (audit.ok ? "ok" : "FAILED") << "\n";
  for (const auto& [var, ws] : audit.per_variable) {
    std::cout << "  w for h" << var << ": {";
    bool first = true;
    for (int w : ws) {
      std::cout << (first ? "" : ",") << w;
      first = false;
    }
    std::cout << "}\n";
  }
  const ExtractedDirections ex = extract_directions(pc);
  std::cout << "box norm directions (multiplicity " << ex.multiplicity << "):";
  for (const auto& v : ex.vectors) std::cout << " " << format_vector(v, false);
  std::cout << "\n";
  return audit.ok ? 0 : kExitFail;
}

int cmd_count(const std::string& config, std::uint64_t trial) {
  const Loaded l = load_config(config);
  for (int p : l.cfg.primes) {
    const ProgressionConfig pc = l.cfg.progression(p);
    const auto fs = l.cfg.functions_for(pc.cfg(), pc.length() + 1, trial);
    const Complex lam = counting_operator(pc, fs);
    const Complex st = structured_count(pc, fs);
    std::printf("p=%d  Lambda=%.12f%+.12fi  structured=%.12f%+.12fi", p, lam.real(), lam.imag(), st.real(), st.imag());
    if (pc.theorem_mode() && linearly_independent(pc.polys())) std::printf("  gap=%.12f", tcount_gap(pc, fs));
    std::printf("\n");
  }
  return 0;
}

int cmd_search(const std::string& config, const std::string& set_path, std::size_t limit) {
  const Loaded l = load_config(config);
  const ProgressionConfig pc = l.cfg.progression(l.cfg.primes.front());
  const FieldConfig& cfg = pc.cfg();
  const Json set = load_json(set_path);
  std::vector<Complex> vals(cfg.order(), 0.0);
  if (set.is_array()) {
    for (const auto& x : read_points(set, cfg, "")) vals[cfg.index(x)] = 1.0;
  } else if (set.is_object() && set.contains("density")) {
    if (!set["density"].is_number() || !set.contains("seed") || !set["seed"].is_number_unsigned())
      throw ConfigError("/", "density recipe needs a number 'density' and an unsigned 'seed'");
    const auto ind = random_one_bounded(cfg, set["seed"].get<std::uint64_t>(), Indicator{set["density"].get<double>()});
    vals = ind.values();
  } else {
    throw ConfigError("/", "expected an array of points or {\"density\", \"seed\"}");
  }
  const GroupFunction ind(cfg, vals);
  std::size_t shown = 0;
  for (int n = 1; n < cfg.prime(); ++n)
    for (Index x = 0; x < cfg.order(); ++x) {
      if (ind[x].real() == 0) continue;
      bool inside = true;
      for (int j = 1; j <= pc.length() && inside; ++j)
        inside = ind[cfg.add(x, pc.shifts(j)[static_cast<std::size_t>(n)])].real() != 0;
      if (!inside || shown++ >= limit) continue;
      std::cout << "x=" << format_vector(IntVec(cfg.point(x).coords.begin(), cfg.point(x).coords.end()), false)
                << " n=" << n << "\n";
    }
  std::cout << "instances: " << progression_count(ind, pc) << "\n";
  return 0;
}

std::vector<int> parse_primes(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t used = 0;
    int p = 0;
    try {
      p = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw ConfigError("--primes", "not an integer: '" + tok + "'");
    }
    if (used != tok.size() || !is_prime(p)) throw ConfigError("--primes", "not a prime: '" + tok + "'");
    out.push_back(p);
  }
  if (out.empty()) throw ConfigError("--primes", "empty list");
  return out;
}

int cmd_verify(const std::string& suite, const std::string& config, const std::string& json_path,
               std::optional<std::uint64_t> seed, const std::string& primes) {
  std::optional<ExperimentConfig> base;
  if (!config.empty()) base = load_config(config).cfg;
  std::optional<std::vector<int>> ps;
  if (!primes.empty()) ps = parse_primes(primes);
  const Report rep = run_suite(suite, base, seed, ps);
  for (const auto& r : rep.records)
    std::printf("%s  %-40s p=%-3d %9.1f ms\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.prime, r.runtime_ms);
  std::printf("%s: %s\n", rep.experiment.c_str(), rep.pass ? "pass" : "FAIL");
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) throw ConfigError("--json", "cannot write " + json_path);
    out << rep.to_json().dump(2) << "\n";
  }
  // Only the theorem-backed suites can fail the process; the others are trend
  // or report-only experiments whose verdict lives in the report.
  bool theorem_failed = false;
  for (const auto& r : rep.records) {
    const std::string owner = suite == "all" ? r.name.substr(0, r.name.find('/')) : suite;
    if (!r.pass && (owner == "identity" || owner == "inequality")) theorem_failed = true;
  }
  return theorem_failed ? kExitFail : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ulab: uniformity norms, polynomial progressions and PET induction over F_p^D"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config;
  double cap = 0;
  app.add_option("--cost-cap", cap, "Abort computations whose estimated cost exceeds this")->check(CLI::PositiveNumber);

  auto* norm = app.add_subcommand("norm", "Compute a box or Gowers norm");
  norm->add_option("--config", config, "JSON config")->check(CLI::ExistingFile);

  auto* pet = app.add_subcommand("pet", "PET induction");
  pet->require_subcommand(1);
  auto* derive = pet->add_subcommand("derive", "Run PET on the configured family");
  bool concrete = false;
  derive->add_option("--config", config, "JSON config")->check(CLI::ExistingFile);
  derive->add_flag("--vectors", concrete, "Print coefficients as integer vectors instead of v1..vl");

  auto* count = app.add_subcommand("count", "Counting operator, structured count and their gap");
  std::uint64_t trial = 0;
  count->add_option("--config", config, "JSON config")->check(CLI::ExistingFile);
  count->add_option("--trial", trial, "Trial index mixed into random recipe seeds");

  auto* search = app.add_subcommand("search", "List progression instances inside a set");
  std::string set_path;
  std::size_t limit = 20;
  search->add_option("--set", set_path, "JSON array of points or {density, seed}")->required()->check(CLI::ExistingFile);
  search->add_option("--config", config, "JSON config")->check(CLI::ExistingFile);
  search->add_option("--limit", limit, "Maximum instances printed");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite, json_path, primes;
  std::optional<std::uint64_t> seed;
  verify->add_option("suite", suite, "identity | inequality | tcount | control | bounds | probe | all")
      ->required()
      ->check(CLI::IsMember({"identity", "inequality", "tcount", "control", "bounds", "probe", "all"}));
  verify->add_option("--config", config, "JSON config")->check(CLI::ExistingFile);
  verify->add_option("--json", json_path, "Write the report here");
  verify->add_option("--seed", seed, "Base seed");
  verify->add_option("--primes", primes, "Comma separated primes, e.g. 3,5,7");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cap > 0) set_cost_cap(cap);
    if (*norm) return cmd_norm(config);
    if (*derive) return cmd_pet(config, concrete);
    if (*count) return cmd_count(config, trial);
    if (*search) return cmd_search(config, set_path, limit);
    if (*verify) return cmd_verify(suite, config, json_path, seed, primes);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
