#include "ulab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "ulab/concat.hpp"
#include "ulab/pet.hpp"

namespace ulab {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x51ed270b27bd3f0dULL;
  for (auto p : parts) h = splitmix(h ^ p);
  return h;
}

// --- config parsing -------------------------------------------------------

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string join(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void expect_object(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; });
    if (!ok) throw ConfigError(join(path, k), "unknown field");
  }
}

std::int64_t read_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

double read_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

bool read_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected a boolean");
  return j.get<bool>();
}

std::string read_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<std::int64_t> read_int_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_int(j[i], join(path, i)));
  return out;
}

FunctionRecipe read_recipe(const Json& j, const std::string& path) {
  expect_object(j, path, {"kind", "seed", "density", "frequency", "quadratic", "linear", "value"});
  FunctionRecipe r;
  if (!j.contains("kind")) throw ConfigError(join(path, "kind"), "missing field");
  r.kind = read_string(j["kind"], join(path, "kind"));
  static const std::set<std::string> kinds{"unit_phase", "disk", "indicator", "character", "quadratic_phase", "constant"};
  if (!kinds.count(r.kind)) throw ConfigError(join(path, "kind"), "unknown function kind '" + r.kind + "'");
  if (j.contains("seed")) {
    const auto s = read_int(j["seed"], join(path, "seed"));
    if (s < 0) throw ConfigError(join(path, "seed"), "seed must be nonnegative");
    r.seed = static_cast<std::uint64_t>(s);
  } else if (r.random()) {
    throw ConfigError(join(path, "seed"), "random kinds need a seed");
  }
  if (j.contains("density")) r.density = read_number(j["density"], join(path, "density"));
  if (j.contains("frequency")) r.frequency = read_int_array(j["frequency"], join(path, "frequency"));
  if (j.contains("quadratic")) r.quadratic = read_int_array(j["quadratic"], join(path, "quadratic"));
  if (j.contains("linear")) r.linear = read_int_array(j["linear"], join(path, "linear"));
  if (j.contains("value")) r.value = read_number(j["value"], join(path, "value"));
  if (r.kind == "indicator" && !(r.density >= 0 && r.density <= 1)) throw ConfigError(join(path, "density"), "must lie in [0,1]");
  if (r.kind == "character" && r.frequency.empty()) throw ConfigError(join(path, "frequency"), "missing field");
  if (r.kind == "constant" && std::abs(r.value) > 1) throw ConfigError(join(path, "value"), "must satisfy |value| <= 1");
  return r;
}

OrderedJson recipe_json(const FunctionRecipe& r) {
  OrderedJson j;
  j["kind"] = r.kind;
  if (r.random()) j["seed"] = r.seed;
  if (r.kind == "indicator") j["density"] = r.density;
  if (r.kind == "character") j["frequency"] = r.frequency;
  if (r.kind == "quadratic_phase") {
    j["quadratic"] = r.quadratic;
    j["linear"] = r.linear;
  }
  if (r.kind == "constant") j["value"] = r.value;
  return j;
}

// --- helpers for suites ---------------------------------------------------

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Tally {
  int instances = 0;
  int violations = 0;
  double max_gap = 0;  // identities: |a - b|; inequalities: max(lhs - rhs)
  bool inequality = false;
  double worst = -1e300;

  void identity(double gap, double tol) {
    ++instances;
    max_gap = std::max(max_gap, gap);
    if (!(gap <= tol)) ++violations;
  }
  void inequality_result(double lhs, double rhs, bool ok) {
    inequality = true;
    ++instances;
    worst = std::max(worst, lhs - rhs);
    if (!ok) ++violations;
  }
  OrderedJson json() const {
    OrderedJson j;
    j["instances"] = instances;
    j["violations"] = violations;
    if (inequality)
      j["max_lhs_minus_rhs"] = instances ? worst : 0.0;
    else
      j["max_gap"] = max_gap;
    return j;
  }
};

FpPoint random_nonzero(const FieldConfig& cfg, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(0, cfg.prime() - 1);
  while (true) {
    FpPoint x;
    for (int i = 0; i < cfg.dimension(); ++i) x.coords.push_back(dist(rng));
    if (!x.is_zero()) return x;
  }
}

IntVec as_intvec(const FpPoint& x) { return IntVec(x.coords.begin(), x.coords.end()); }

GroupFunction random_phase(const FieldConfig& cfg, std::uint64_t seed) { return random_one_bounded(cfg, seed, UnitPhase{}); }

std::vector<GroupFunction> random_phases(const FieldConfig& cfg, int count, std::uint64_t seed) {
  std::vector<GroupFunction> out;
  for (int j = 0; j < count; ++j) out.push_back(random_phase(cfg, mix({seed, static_cast<std::uint64_t>(j)})));
  return out;
}

void run_record(Report& rep, int prime, const std::string& name, const std::function<void(Record&)>& body) {
  Record r;
  r.prime = prime;
  r.name = name;
  const auto t0 = Clock::now();
  body(r);
  r.runtime_ms = ms_since(t0);
  rep.add(std::move(r));
}

void tally_record(Record& r, const Tally& t) {
  r.measured = t.json();
  r.pass = t.violations == 0 && t.instances > 0;
}

}  // namespace

// --- recipes and config -----------------------------------------------------

GroupFunction FunctionRecipe::build(const FieldConfig& cfg, std::uint64_t salt) const {
  const std::uint64_t s = salt == 0 ? seed : mix({seed, salt});
  if (kind == "unit_phase") return random_one_bounded(cfg, s, UnitPhase{});
  if (kind == "disk") return random_one_bounded(cfg, s, Disk{});
  if (kind == "indicator") return random_one_bounded(cfg, s, Indicator{density});
  if (kind == "character") return random_one_bounded(cfg, s, Character{frequency});
  if (kind == "quadratic_phase") return random_one_bounded(cfg, s, QuadraticPhase{quadratic, linear});
  if (kind == "constant") return GroupFunction::constant(cfg, value);
  throw Error(ErrorCode::invalid_argument, "unknown function kind '" + kind + "'");
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  expect_object(j, "", {"schema_version", "progression", "functions", "experiment", "norm", "set"});
  ExperimentConfig c;
  if (j.contains("schema_version") && read_int(j["schema_version"], "/schema_version") != kSchemaVersion)
    throw ConfigError("/schema_version", "unsupported schema version");
  if (j.contains("progression")) {
    const Json& p = j["progression"];
    expect_object(p, "/progression", {"primes", "dimension", "vectors", "polynomials", "eta", "theorem_mode"});
    if (p.contains("primes")) {
      c.primes.clear();
      const auto ps = read_int_array(p["primes"], "/progression/primes");
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!is_prime(ps[i]) || ps[i] > 4093) throw ConfigError(join("/progression/primes", i), "expected a prime below 4096");
        c.primes.push_back(static_cast<int>(ps[i]));
      }
      if (c.primes.empty()) throw ConfigError("/progression/primes", "need at least one prime");
    }
    if (p.contains("dimension")) {
      const auto d = read_int(p["dimension"], "/progression/dimension");
      if (d < 1 || d > 8) throw ConfigError("/progression/dimension", "expected 1..8");
      c.dimension = static_cast<int>(d);
    }
    if (p.contains("vectors")) {
      if (!p["vectors"].is_array()) throw ConfigError("/progression/vectors", "expected an array");
      c.vectors.clear();
      for (std::size_t i = 0; i < p["vectors"].size(); ++i) {
        const auto v = read_int_array(p["vectors"][i], join("/progression/vectors", i));
        if (static_cast<int>(v.size()) != c.dimension)
          throw ConfigError(join("/progression/vectors", i), "length differs from dimension");
        c.vectors.push_back(v);
      }
    }
    if (p.contains("polynomials")) {
      if (!p["polynomials"].is_array()) throw ConfigError("/progression/polynomials", "expected an array");
      c.polynomials.clear();
      for (std::size_t i = 0; i < p["polynomials"].size(); ++i)
        c.polynomials.push_back(read_int_array(p["polynomials"][i], join("/progression/polynomials", i)));
    }
    if (p.contains("eta")) {
      c.eta.clear();
      for (auto e : read_int_array(p["eta"], "/progression/eta")) c.eta.push_back(static_cast<int>(e));
    }
    if (p.contains("theorem_mode")) c.theorem_mode = read_bool(p["theorem_mode"], "/progression/theorem_mode");
  }
  if (j.contains("functions")) {
    if (!j["functions"].is_array() || j["functions"].empty()) throw ConfigError("/functions", "expected a nonempty array");
    c.functions.clear();
    for (std::size_t i = 0; i < j["functions"].size(); ++i) c.functions.push_back(read_recipe(j["functions"][i], join("/functions", i)));
  }
  if (j.contains("experiment")) {
    const Json& e = j["experiment"];
    expect_object(e, "/experiment",
                  {"name", "trials", "seed", "cost_cap", "tolerance", "dimensions", "densities", "samples", "exhaustive"});
    if (e.contains("name")) c.name = read_string(e["name"], "/experiment/name");
    if (e.contains("trials")) {
      const auto t = read_int(e["trials"], "/experiment/trials");
      if (t < 1) throw ConfigError("/experiment/trials", "must be positive");
      c.trials = static_cast<int>(t);
    }
    if (e.contains("seed")) {
      const auto s = read_int(e["seed"], "/experiment/seed");
      if (s < 0) throw ConfigError("/experiment/seed", "must be nonnegative");
      c.seed = static_cast<std::uint64_t>(s);
    }
    if (e.contains("cost_cap")) {
      const double cap = read_number(e["cost_cap"], "/experiment/cost_cap");
      if (!(cap > 0)) throw ConfigError("/experiment/cost_cap", "must be positive");
      c.cost_cap = cap;
    }
    if (e.contains("tolerance")) {
      c.tolerance = read_number(e["tolerance"], "/experiment/tolerance");
      if (!(c.tolerance >= 0)) throw ConfigError("/experiment/tolerance", "must be nonnegative");
    }
    if (e.contains("dimensions")) {
      c.dimensions.clear();
      for (auto d : read_int_array(e["dimensions"], "/experiment/dimensions")) {
        if (d < 1 || d > 4) throw ConfigError("/experiment/dimensions", "expected entries in 1..4");
        c.dimensions.push_back(static_cast<int>(d));
      }
    }
    if (e.contains("densities")) {
      if (!e["densities"].is_array()) throw ConfigError("/experiment/densities", "expected an array");
      c.densities.clear();
      for (std::size_t i = 0; i < e["densities"].size(); ++i) {
        const double d = read_number(e["densities"][i], join("/experiment/densities", i));
        if (!(d >= 0 && d <= 1)) throw ConfigError(join("/experiment/densities", i), "must lie in [0,1]");
        c.densities.push_back(d);
      }
      std::sort(c.densities.begin(), c.densities.end());
    }
    if (e.contains("samples")) {
      const auto s = read_int(e["samples"], "/experiment/samples");
      if (s < 1) throw ConfigError("/experiment/samples", "must be positive");
      c.samples = static_cast<int>(s);
    }
    if (e.contains("exhaustive")) c.exhaustive = read_bool(e["exhaustive"], "/experiment/exhaustive");
  }
  // surface structural problems now rather than mid-run
  try {
    c.progression(c.primes.front());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& err) {
    throw ConfigError("/progression", err.what());
  }
  return c;
}

OrderedJson ExperimentConfig::to_json() const {
  OrderedJson j;
  j["schema_version"] = kSchemaVersion;
  OrderedJson p;
  p["primes"] = primes;
  p["dimension"] = dimension;
  p["vectors"] = vectors;
  p["polynomials"] = polynomials;
  if (!eta.empty()) p["eta"] = eta;
  p["theorem_mode"] = theorem_mode;
  j["progression"] = p;
  j["functions"] = OrderedJson::array();
  for (const auto& r : functions) j["functions"].push_back(recipe_json(r));
  OrderedJson e;
  e["name"] = name;
  e["trials"] = trials;
  e["seed"] = seed;
  if (cost_cap) e["cost_cap"] = *cost_cap;
  e["tolerance"] = tolerance;
  e["dimensions"] = dimensions;
  e["densities"] = densities;
  e["samples"] = samples;
  e["exhaustive"] = exhaustive;
  j["experiment"] = e;
  return j;
}

ProgressionConfig ExperimentConfig::progression(int p) const {
  return ProgressionConfig(FieldConfig(p, dimension), vectors, polynomials, eta, theorem_mode);
}

std::vector<GroupFunction> ExperimentConfig::functions_for(const FieldConfig& cfg, int count, std::uint64_t trial) const {
  std::vector<GroupFunction> out;
  for (int j = 0; j < count; ++j) {
    const auto& r = functions[std::min<std::size_t>(static_cast<std::size_t>(j), functions.size() - 1)];
    const std::uint64_t salt = r.random() ? mix({trial, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(cfg.prime())}) : 0;
    out.push_back(r.build(cfg, salt));
  }
  return out;
}

ExperimentConfig default_config(const std::string& suite) {
  ExperimentConfig c;
  c.name = suite;
  if (suite == "identity" || suite == "inequality") {
    c.trials = 10;
  } else if (suite == "tcount") {
    c.primes = {3, 5, 7, 11, 13};
    c.trials = 20;
  } else if (suite == "control") {
    c.primes = {5, 7};
    c.trials = 10;
  } else if (suite == "bounds") {
    c.primes = {3, 5};
    c.samples = 20;
  } else if (suite == "probe") {
    c.primes = {5};
    c.vectors = {{1, 0}, {0, 1}, {1, 1}};
    c.polynomials = {{0, 1}, {0, 0, 1}, {0, 1, 1}};
    c.trials = 3;
  } else if (suite != "all") {
    throw Error(ErrorCode::invalid_argument, "unknown suite '" + suite + "'");
  }
  return c;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identity", "inequality", "tcount", "control", "bounds", "probe"};
  return names;
}

// --- report -----------------------------------------------------------------

void Report::add(Record r) {
  pass = pass && r.pass;
  records.push_back(std::move(r));
}

OrderedJson Report::to_json(bool include_runtime) const {
  OrderedJson j;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["pass"] = pass;
  j["records"] = OrderedJson::array();
  for (const auto& r : records) {
    OrderedJson o;
    o["prime"] = r.prime;
    o["name"] = r.name;
    o["measured"] = r.measured;
    o["pass"] = r.pass;
    if (include_runtime) o["runtime_ms"] = r.runtime_ms;
    j["records"].push_back(std::move(o));
  }
  j["summary"] = summary;
  OrderedJson env;
  env["version"] = kVersion;
  env["cost_cap"] = cost_cap();
  j["environment"] = env;
  return j;
}

std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    if (y[i] > 0 && x[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  if (lx.size() < 2) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

// --- suites -----------------------------------------------------------------

Report run_identity_suite(const ExperimentConfig& c) {
  Report rep;
  rep.experiment = c.name;
  rep.seed = c.seed;
  const double tol = c.tolerance;
  for (int p : c.primes) {
    Tally weak, inductive, replacement, relation;
    const auto t0 = Clock::now();
    for (int d : c.dimensions) {
      FieldConfig cfg(p, d);
      std::vector<IntVec> vecs;
      for (std::size_t j = 0; j < c.polynomials.size(); ++j) {
        if (d == c.dimension && j < c.vectors.size()) {
          vecs.push_back(c.vectors[j]);
        } else {
          IntVec e(static_cast<std::size_t>(d), 0);
          e[j % static_cast<std::size_t>(d)] = 1;
          vecs.push_back(e);
        }
      }
      const ProgressionConfig pc(cfg, vecs, c.polynomials, {}, c.theorem_mode);
      const int l = pc.length();
      for (int t = 0; t < c.trials; ++t) {
        const std::uint64_t seed = mix({c.seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(t)});
        std::mt19937_64 rng(seed);
        const int s = 1 + t % 3;

        const GroupFunction f = random_phase(cfg, mix({seed, 1}));
        const auto wi = weak_inverse_check(f, random_nonzero(cfg, rng), s);
        weak.identity(std::abs(wi.lhs - wi.rhs), tol);

        DirectionSpec dirs;
        for (int i = 0; i < s; ++i) dirs.push_back(cyclic(cfg, random_nonzero(cfg, rng)));
        inductive.identity(std::abs(box_average(f, dirs) - box_average_direct(f, dirs)), tol);

        const auto fs = random_phases(cfg, l + 1, mix({seed, 2}));
        const auto dr = dual_replacement_check(pc, fs, t % (l + 1), random_phase(cfg, mix({seed, 3})), 1 + t % 2);
        replacement.identity(dr.ok ? dr.identity_gap : std::max(dr.identity_gap, 1.0), tol);

        const GroupFunction ind = random_one_bounded(cfg, mix({seed, 4}), Indicator{0.5});
        std::vector<GroupFunction> same(static_cast<std::size_t>(l + 1), ind);
        double size = 0;
        for (const auto& z : ind.values()) size += z.real();
        const double lam = counting_operator(pc, same).real();
        const double scale = static_cast<double>(cfg.order()) * p;
        relation.identity(std::abs(lam - (static_cast<double>(progression_count(ind, pc)) + size) / scale), tol);
      }
    }
    const double total = ms_since(t0);
    for (auto [name, tally] : {std::pair<const char*, Tally*>{"weak_inverse", &weak},
                               {"inductive_formula", &inductive},
                               {"dual_replacement", &replacement},
                               {"count_relation", &relation}}) {
      Record r;
      r.prime = p;
      r.name = name;
      tally_record(r, *tally);
      r.runtime_ms = total / 4;
      rep.add(std::move(r));
    }
  }
  return rep;
}

Report run_inequality_suite(const ExperimentConfig& c) {
  Report rep;
  rep.experiment = c.name;
  rep.seed = c.seed;
  for (int p : c.primes) {
    const FieldConfig cfg(p, c.dimension);
    const ProgressionConfig pc = c.progression(p);
    const int l = pc.length();
    std::map<std::string, Tally> tallies;
    std::map<std::string, double> times;
    auto timed = [&](const std::string& name, const std::function<void(Tally&)>& fn) {
      const auto t0 = Clock::now();
      fn(tallies[name]);
      times[name] += ms_since(t0);
    };
    for (int t = 0; t < c.trials; ++t) {
      const std::uint64_t seed = mix({c.seed, static_cast<std::uint64_t>(p), 77, static_cast<std::uint64_t>(t)});
      std::mt19937_64 rng(seed);
      auto line = [&] { return cyclic(cfg, random_nonzero(cfg, rng)); };
      const int s = 1 + t % 2;

      timed("gowers_cauchy_schwarz", [&](Tally& tl) {
        DirectionSpec dirs;
        for (int i = 0; i < s; ++i) dirs.push_back(line());
        const auto fs = random_phases(cfg, 1 << s, mix({seed, 1}));
        const auto r = gcs_check(fs, dirs);
        tl.inequality_result(r.lhs, r.rhs, r.holds);
      });
      timed("monotonicity", [&](Tally& tl) {
        DirectionSpec dirs;
        for (int i = 0; i < s; ++i) dirs.push_back(line());
        const GroupFunction f = random_phase(cfg, mix({seed, 2}));
        const double a = box_norm(f, dirs);
        dirs.push_back(line());
        const double b = box_norm(f, dirs);
        tl.inequality_result(a, b, a <= b + c.tolerance);
      });
      timed("subgroup_property", [&](Tally& tl) {
        const FpPoint u = random_nonzero(cfg, rng);
        const Subgroup h = cyclic(cfg, u);
        const Subgroup k = subgroup_span(cfg, {u, random_nonzero(cfg, rng)});
        const Subgroup other = line();
        const GroupFunction f = random_phase(cfg, mix({seed, 3}));
        // h inside k, so the larger group gives the smaller norm
        const double a = box_norm(f, {k, other});
        const double b = box_norm(f, {h, other});
        tl.inequality_result(a, b, a <= b + c.tolerance);
      });
      timed("linear_averages", [&](Tally& tl) {
        std::vector<FpPoint> vs;
        while (true) {
          vs = {random_nonzero(cfg, rng), random_nonzero(cfg, rng)};
          if (!(vs[0] == vs[1])) break;
        }
        const ProgressionConfig lin(cfg, {as_intvec(vs[0]), as_intvec(vs[1])}, {{0, 1}, {0, 1}}, {}, false);
        const auto r = linear_average_check(lin, random_phases(cfg, 3, mix({seed, 4})));
        tl.inequality_result(r.lhs, r.rhs, r.ok);
      });
      timed("concat_deg1", [&](Tally& tl) {
        SubgroupFamily fam;
        for (int i = 0; i < 4; ++i) fam.groups.push_back({line()});
        const auto r = concat_deg1_check(random_phase(cfg, mix({seed, 5})), fam);
        tl.inequality_result(r.lhs, r.rhs, r.ok);
      });
      timed("concat_main", [&](Tally& tl) {
        const int ks = t % 2;
        SubgroupFamily fam;
        std::vector<Subgroup> hs;
        for (int i = 0; i < 3; ++i) {
          std::vector<Subgroup> row;
          for (int k = 0; k < ks; ++k) row.push_back(line());
          fam.groups.push_back(row);
          hs.push_back(line());
        }
        const auto r = concat_main_check(random_phase(cfg, mix({seed, 6})), fam, hs);
        tl.inequality_result(r.lhs, r.rhs, r.ok);
      });
      timed("polynomial_concat", [&](Tally& tl) {
        MultiPoly cdir(static_cast<std::size_t>(cfg.dimension()));
        cdir.add_term({}, as_intvec(random_nonzero(cfg, rng)));
        cdir.add_term({0, 1}, as_intvec(random_nonzero(cfg, rng)));
        if (t % 2) cdir.add_term({0, 2}, as_intvec(random_nonzero(cfg, rng)));
        const auto r = polynomial_concat_check(random_phase(cfg, mix({seed, 7})), {cdir});
        tl.inequality_result(r.lhs, r.rhs + r.exception_fraction, r.ok);
      });
      timed("removing_duals", [&](Tally& tl) {
        std::vector<std::pair<DualSpec, IntVecPoly>> duals;
        const int count = 1 + t % 2;
        for (int i = 0; i < count; ++i) {
          DualSpec spec{random_nonzero(cfg, rng), 1 + (t + i) % 2, random_phase(cfg, mix({seed, 8, static_cast<std::uint64_t>(i)}))};
          const IntVec v = as_intvec(random_nonzero(cfg, rng));
          IntVecPoly q = IntVecPoly::scaled(v, i == 0 ? std::vector<std::int64_t>{0, 1} : std::vector<std::int64_t>{0, 0, 1});
          duals.emplace_back(std::move(spec), std::move(q));
        }
        const auto r = removing_duals_check(SpaceTimeFunction::random(cfg, mix({seed, 9})), duals);
        tl.inequality_result(r.lhs, r.rhs, r.ok);
      });
      timed("dual_difference_interchange", [&](Tally& tl) {
        std::vector<FpPoint> betas;
        for (int i = 0; i < s; ++i) betas.push_back(random_nonzero(cfg, rng));
        std::size_t hs = 1;
        for (int i = 0; i < s; ++i) hs *= static_cast<std::size_t>(p);
        const auto us = random_phases(cfg, static_cast<int>(hs), mix({seed, 10}));
        const auto r = dual_difference_interchange_check(pc, random_phases(cfg, l + 1, mix({seed, 11})), t % (l + 1), betas, us);
        tl.inequality_result(std::pow(std::abs(r.premise), std::ldexp(1.0, s)), r.conclusion, r.ok);
      });
      timed("low_complexity", [&](Tally& tl) {
        std::size_t sub = 1;
        for (int i = 1; i < s; ++i) sub *= static_cast<std::size_t>(p);
        std::vector<std::vector<GroupFunction>> gs;
        for (int j = 0; j < s; ++j)
          gs.push_back(random_phases(cfg, static_cast<int>(sub), mix({seed, 12, static_cast<std::uint64_t>(j)})));
        const auto r = low_complexity_check(random_phase(cfg, mix({seed, 13})), random_nonzero(cfg, rng), s, gs);
        tl.inequality_result(r.lhs, r.rhs, r.ok);
      });
    }
    for (const auto& [name, tally] : tallies) {
      Record r;
      r.prime = p;
      r.name = name;
      tally_record(r, tally);
      r.runtime_ms = times[name];
      rep.add(std::move(r));
    }
  }
  return rep;
}

Report run_tcount_decay(const ExperimentConfig& c) {
  Report rep;
  rep.experiment = c.name;
  rep.seed = c.seed;
  if (!c.theorem_mode) throw Error(ErrorCode::invalid_argument, "count decay needs theorem mode");
  if (!linearly_independent(c.polynomials)) throw Error(ErrorCode::not_independent, "polynomials not linearly independent");
  std::vector<double> ps, gaps;
  for (int p : c.primes) {
    run_record(rep, p, "tcount_gap", [&](Record& r) {
      const ProgressionConfig pc = c.progression(p);
      double worst = 0, mean = 0;
      for (int t = 0; t < c.trials; ++t) {
        const auto fs = c.functions_for(pc.cfg(), pc.length() + 1, mix({c.seed, static_cast<std::uint64_t>(t)}));
        const double g = tcount_gap(pc, fs);
        worst = std::max(worst, g);
        mean += g;
      }
      r.measured["trials"] = c.trials;
      r.measured["max_gap"] = worst;
      r.measured["mean_gap"] = mean / c.trials;
      ps.push_back(p);
      gaps.push_back(worst);
    });
  }
  const bool all_zero = std::all_of(gaps.begin(), gaps.end(), [&](double g) { return g <= c.tolerance; });
  const auto slope = log_log_slope(ps, gaps);
  bool monotone = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) monotone = monotone && gaps[i] <= gaps[i - 1] + c.tolerance;
  const bool endpoints = gaps.size() < 2 || gaps.back() <= gaps.front() + c.tolerance;
  rep.summary["slope"] = slope ? OrderedJson(*slope) : OrderedJson(nullptr);
  rep.summary["monotone"] = monotone;
  rep.summary["endpoints_decrease"] = endpoints;
  rep.pass = all_zero || (endpoints && slope && *slope < 0);
  return rep;
}

Report run_control_sanity(const ExperimentConfig& c) {
  Report rep;
  rep.experiment = c.name;
  rep.seed = c.seed;
  if (!pairwise_independent(c.polynomials)) throw Error(ErrorCode::not_independent, "polynomials not pairwise independent");
  for (int p : c.primes) {
    const ProgressionConfig pc = c.progression(p);
    const FieldConfig& cfg = pc.cfg();
    const int l = pc.length();
    const int s = pet_run(initial_family(pc, false)).s;
    const FpPoint vl = cfg.reduce(pc.vector_for(l));

    run_record(rep, p, "control_scatter", [&](Record& r) {
      const double threshold = std::pow(static_cast<double>(p), -0.25);
      double c_fit = 0;
      int small = 0;
      OrderedJson pairs = OrderedJson::array();
      for (int t = 0; t < c.trials; ++t) {
        const std::uint64_t seed = mix({c.seed, static_cast<std::uint64_t>(p), 31, static_cast<std::uint64_t>(t)});
        auto fs = random_phases(cfg, l + 1, seed);
        switch (t % 3) {
          case 1: {
            const GroupFunction ind = random_one_bounded(cfg, mix({seed, 1}), Indicator{0.5});
            const Complex mean = ind.mean();
            std::vector<Complex> vals(ind.values());
            for (auto& z : vals) z = (z - mean) / (1.0 + std::abs(mean));
            fs.back() = GroupFunction(cfg, vals);
            break;
          }
          case 2:
            fs.back() = random_one_bounded(cfg, mix({seed, 2}), Disk{});
            break;
          default:
            break;
        }
        const double norm = gowers_norm(fs.back(), vl, s);
        const double lam = std::abs(counting_operator(pc, fs));
        pairs.push_back({norm, lam});
        if (norm <= threshold) {
          ++small;
          c_fit = std::max(c_fit, (lam - std::sqrt(norm)) / threshold);
        }
      }
      r.measured["s"] = s;
      r.measured["pairs"] = pairs;
      r.measured["small_norm_instances"] = small;
      r.measured["best_fit_c"] = c_fit;
      r.pass = c_fit <= 10;
    });

    run_record(rep, p, "control_orthogonal", [&](Record& r) {
      IntVec u(static_cast<std::size_t>(cfg.dimension()), 0);
      for (std::size_t i = 0; i < u.size(); ++i)
        if (vl.coords[i] != 0) {
          u[i] = 1;
          break;
        }
      IntVec neg(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) neg[i] = -u[i];
      std::vector<GroupFunction> fs(static_cast<std::size_t>(l + 1), GroupFunction::constant(cfg, 1.0));
      fs.back() = random_one_bounded(cfg, 0, Character{u});
      fs.front() = random_one_bounded(cfg, 0, Character{neg});
      const double lam = std::abs(counting_operator(pc, fs));
      const double bound = (pc.degree() - 1) / std::sqrt(static_cast<double>(p));
      r.measured["lambda"] = lam;
      r.measured["bound"] = bound;
      r.pass = lam <= bound + c.tolerance;
    });
  }
  return rep;
}

Report run_bounds_search(const ExperimentConfig& c) {
  Report rep;
  rep.experiment = c.name;
  rep.seed = c.seed;
  if (!c.theorem_mode) throw Error(ErrorCode::invalid_argument, "bounds search needs theorem mode");
  for (int p : c.primes) {
    const ProgressionConfig pc = c.progression(p);
    const FieldConfig& cfg = pc.cfg();
    run_record(rep, p, "density_search", [&](Record& r) {
      OrderedJson grid = OrderedJson::array();
      std::vector<bool> all_contain;
      for (double d : c.densities) {
        int hits = 0;
        for (int k = 0; k < c.samples; ++k) {
          const auto ind = random_one_bounded(cfg, mix({c.seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k),
                                                         static_cast<std::uint64_t>(std::llround(d * 1e6))}),
                                              Indicator{d});
          if (progression_count(ind, pc) > 0) ++hits;
        }
        all_contain.push_back(hits == c.samples);
        grid.push_back({{"density", d}, {"samples", c.samples}, {"containing", hits}});
      }
      std::optional<double> threshold;
      for (std::size_t i = c.densities.size(); i-- > 0;) {
        if (!all_contain[i]) break;
        threshold = c.densities[i];
      }
      const auto full = GroupFunction::constant(cfg, 1.0);
      const std::int64_t full_count = progression_count(full, pc);
      const std::int64_t expected = static_cast<std::int64_t>(cfg.order()) * (p - 1);
      r.measured["grid"] = grid;
      r.measured["threshold_density"] = threshold ? OrderedJson(*threshold) : OrderedJson(nullptr);
      r.measured["full_set_count"] = full_count;
      r.pass = full_count == expected;
    });
    if (c.exhaustive && cfg.order() <= 16) {
      run_record(rep, p, "exhaustive", [&](Record& r) {
        const std::size_t n = cfg.order();
        check_cost(std::ldexp(1.0, static_cast<int>(n)) * static_cast<double>(n) * p * (pc.length() + 1), "exhaustive subsets");
        int largest_free = 0;
        std::int64_t free_sets = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
          std::vector<Complex> vals(n);
          for (std::size_t i = 0; i < n; ++i) vals[i] = (mask >> i & 1) ? 1.0 : 0.0;
          if (progression_count(GroupFunction(cfg, vals), pc) == 0) {
            ++free_sets;
            largest_free = std::max(largest_free, std::popcount(mask));
          }
        }
        r.measured["subsets"] = std::uint64_t{1} << n;
        r.measured["pattern_free_subsets"] = free_sets;
        r.measured["largest_pattern_free_size"] = largest_free;
        r.pass = largest_free < static_cast<int>(n);
      });
    }
  }
  return rep;
}

Report run_degree_lowering_probe(const ExperimentConfig& c) {
  Report rep;
  rep.experiment = c.name;
  rep.seed = c.seed;
  if (!pairwise_independent(c.polynomials)) throw Error(ErrorCode::not_independent, "polynomials not pairwise independent");
  for (int p : c.primes) {
    const ProgressionConfig pc = c.progression(p);
    const FieldConfig& cfg = pc.cfg();
    const int l = pc.length();
    for (int m = 1; m <= l; ++m) {
      run_record(rep, p, "profile_m" + std::to_string(m), [&](Record& r) {
        const FpPoint vm = cfg.reduce(pc.vector_for(m));
        OrderedJson profiles = OrderedJson::array();
        bool monotone = true;
        for (int t = 0; t < c.trials; ++t) {
          const auto fs = c.functions_for(cfg, l + 1, mix({c.seed, static_cast<std::uint64_t>(t), 5}));
          const GroupFunction tilde = tilde_dual(pc, fs, m);
          std::vector<double> prof;
          for (int s = 1; s <= 4; ++s) prof.push_back(gowers_norm(tilde, vm, s));
          for (std::size_t i = 1; i < prof.size(); ++i) monotone = monotone && prof[i - 1] <= prof[i] + c.tolerance;
          profiles.push_back(prof);
        }
        r.measured["direction"] = vm.coords;
        r.measured["profiles"] = profiles;
        r.measured["monotone"] = monotone;
        r.pass = monotone;
      });
    }
  }
  return rep;
}

Report run_suite(const std::string& suite, const std::optional<ExperimentConfig>& base, std::optional<std::uint64_t> seed,
                 std::optional<std::vector<int>> primes) {
  auto prepare = [&](const std::string& name, bool use_base) {
    ExperimentConfig c = use_base && base ? *base : default_config(name);
    if (!use_base && base) {
      c.seed = base->seed;
      c.cost_cap = base->cost_cap;
    }
    if (seed) c.seed = *seed;
    if (primes) c.primes = *primes;
    if (c.cost_cap) set_cost_cap(*c.cost_cap);
    return c;
  };
  auto dispatch = [](const std::string& name, const ExperimentConfig& c) {
    if (name == "identity") return run_identity_suite(c);
    if (name == "inequality") return run_inequality_suite(c);
    if (name == "tcount") return run_tcount_decay(c);
    if (name == "control") return run_control_sanity(c);
    if (name == "bounds") return run_bounds_search(c);
    if (name == "probe") return run_degree_lowering_probe(c);
    throw Error(ErrorCode::invalid_argument, "unknown suite '" + name + "'");
  };
  if (suite != "all") return dispatch(suite, prepare(suite, true));

  Report all;
  all.experiment = "all";
  for (const auto& name : suite_names()) {
    const ExperimentConfig c = prepare(name, false);
    all.seed = c.seed;
    Report part = dispatch(name, c);
    for (auto& r : part.records) {
      r.name = name + "/" + r.name;
      all.add(std::move(r));
    }
    OrderedJson sum = part.summary;
    sum["pass"] = part.pass;
    all.summary[name] = sum;
    all.pass = all.pass && part.pass;
  }
  return all;
}

}  // namespace ulab
