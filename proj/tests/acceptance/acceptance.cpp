// Acceptance suite: one PASS/FAIL line per criterion. The first argument is
// the path to the ulab executable, used by the command-line criterion.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ulab/concat.hpp"
#include "ulab/harness.hpp"
#include "ulab/pet.hpp"
#include "ulab/types.hpp"

using namespace ulab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Every record of the report ran enough instances and none violated.
void check_tallies(Outcome& o, const Report& rep, int min_instances, std::size_t expect_records) {
  o.require(rep.records.size() == expect_records,
            "expected " + std::to_string(expect_records) + " records, got " + std::to_string(rep.records.size()));
  for (const auto& r : rep.records) {
    const int n = r.measured.value("instances", 0);
    const int bad = r.measured.value("violations", -1);
    const std::string tag = r.name + "@" + std::to_string(r.prime);
    o.require(n >= min_instances, tag + " ran " + std::to_string(n) + " instances");
    o.require(bad == 0, tag + " has " + std::to_string(bad) + " violations");
  }
}

Outcome identities() {
  Outcome o;
  ExperimentConfig c = default_config("identity");
  c.primes = {3, 5, 7};
  c.dimensions = {1, 2};
  c.trials = 25;
  const Report rep = run_identity_suite(c);
  check_tallies(o, rep, 50, 12);
  double worst = 0;
  for (const auto& r : rep.records) worst = std::max(worst, r.measured.value("max_gap", 0.0));
  o.detail = o.pass ? "4 identities x 3 primes, 50 instances each, max gap " + fmt(worst) : o.detail;
  return o;
}

Outcome inequalities() {
  Outcome o;
  ExperimentConfig c = default_config("inequality");
  c.primes = {3, 5, 7};
  c.trials = 30;
  const Report rep = run_inequality_suite(c);
  check_tallies(o, rep, 30, 30);
  if (o.pass) o.detail = "10 inequalities x 3 primes, 30 instances each, 0 violations";
  return o;
}

MultiPoly h_term(int k, IntVec c) {
  MultiPoly::Exponent e(static_cast<std::size_t>(k + 1), 0);
  e[static_cast<std::size_t>(k)] = 1;
  return MultiPoly::monomial(c.size(), e, c);
}

Outcome golden_pet() {
  Outcome o;
  const ProgressionConfig pc(FieldConfig(5, 2), {{1, 0}, {0, 1}}, {{0, 0, 1}, {0, 1, 1}});
  const PetResult r = pet_run(initial_family(pc, true));
  o.require(r.s_prime == 3, "s' = " + std::to_string(r.s_prime));

  // c_1..c_7 as printed in the paper, with v1, v2 the basis of Z^2
  const IntVec a{0, 2};   // 2 v2
  const IntVec b{-2, 2};  // 2 (v2 - v1)
  const std::vector<MultiPoly> expect{
      h_term(2, b) + h_term(3, b) + h_term(1, a),
      h_term(2, b) + h_term(1, a),
      h_term(3, b) + h_term(1, a),
      h_term(1, a),
      h_term(2, b) + h_term(3, b),
      h_term(2, b),
      h_term(3, b),
  };
  o.require(r.directions == expect, "direction polynomials differ from c_1..c_7");

  const AuditResult audit = pet_coefficient_audit(r, pc);
  o.require(audit.ok, "coefficient audit failed");
  o.require(audit.per_variable.count(1) && audit.per_variable.at(1) == std::set<int>{0, 2}, "w for h1 is not {0,2}");
  o.require(audit.per_variable.count(2) && audit.per_variable.at(2) == std::set<int>{1, 2}, "w for h2 is not {1,2}");
  o.require(audit.per_variable.count(3) && audit.per_variable.at(3) == std::set<int>{1, 2}, "w for h3 is not {1,2}");

  const auto ex = extract_directions(pc);
  o.require(ex.vectors == std::vector<IntVec>{{0, 1}, {-1, 1}}, "extracted directions are not {v2, v2 - v1}");
  if (o.pass) o.detail = "s'=3, c1 = " + format_poly(r.directions[0]) + ", audit ok, directions {v2, v2-v1}";
  return o;
}

Outcome pet_bound() {
  Outcome o;
  const ProgressionConfig pc(FieldConfig(3, 2), {{1, 0}, {0, 1}}, {{0, 0, 1}, {0, 1, 1}});
  double max_lhs = 0, min_rhs = 1;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::vector<GroupFunction> fs;
    for (std::uint64_t j = 0; j < 3; ++j) fs.push_back(random_one_bounded(pc.cfg(), seed * 100 + j, UnitPhase{}));
    const auto r = pet_bound_check(pc, fs);
    o.require(r.ok, "seed " + std::to_string(seed) + ": lhs " + fmt(r.lhs) + " rhs " + fmt(r.rhs_norm));
    max_lhs = std::max(max_lhs, r.lhs);
    min_rhs = std::min(min_rhs, r.rhs_norm);
  }
  if (o.pass) o.detail = "10 seeds at p=3, max |Lambda|^8 = " + fmt(max_lhs) + ", min E_h norm = " + fmt(min_rhs);
  return o;
}

Outcome types() {
  Outcome o;
  const ProgressionConfig pc(FieldConfig(5, 1), {{1}, {2}, {3}, {1}, {3}},
                             {{0, 0, 1}, {0, 1}, {0, 1, 1}, {0, 2, 1}, {0, 1, 2}}, {1, 2, 3, 1, 3});
  o.require(compute_type(pc).w == std::vector<int>{2, 0, 2, 0, 0}, "type is not (2,0,2,0,0)");
  o.require(sigma(TypeTuple::of({2, 3, 7}), 1, 2).w == std::vector<int>{1, 4, 7}, "sigma_12(2,3,7) is not (1,4,7)");
  const std::vector<std::vector<std::vector<int>>> chains{{{4, 0, 0}, {3, 1, 0}, {2, 2, 0}, {2, 1, 1}},
                                                          {{0, 4, 0}, {1, 3, 0}, {2, 2, 0}, {2, 1, 1}}};
  for (const auto& chain : chains)
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      o.require(type_less(TypeTuple::of(chain[i]), TypeTuple::of(chain[i + 1])), "chain link " + std::to_string(i) + " not ordered");
      o.require(!type_less(TypeTuple::of(chain[i + 1]), TypeTuple::of(chain[i])), "chain link " + std::to_string(i) + " reversed");
    }
  if (o.pass) o.detail = "(2,0,2,0,0), sigma_12 = (1,4,7), both chains ordered";
  return o;
}

Outcome gauss() {
  Outcome o;
  for (int p : {5, 13}) {
    const FieldConfig cfg(p, 1);
    const ProgressionConfig pc(cfg, {{1}}, {{0, 0, 1}});
    const auto down = random_one_bounded(cfg, 0, Character{{-1}});
    const auto up = random_one_bounded(cfg, 0, Character{{1}});
    const double lam = std::abs(counting_operator(pc, {down, up}));
    o.require(std::abs(lam - 1 / std::sqrt(static_cast<double>(p))) <= 1e-9, "|Lambda| at p=" + std::to_string(p) + " is " + fmt(lam));
  }
  const FieldConfig f5(5, 1);
  const auto q = GroupFunction::from(f5, [&](const FpPoint& x) { return f5.ep(x.coords[0] * x.coords[0]); });
  const double u2 = gowers_norm(q, FpPoint{{1}}, 2);
  o.require(std::abs(u2 - std::pow(5.0, -0.25)) <= 1e-9, "U2 norm of e5(x^2) is " + fmt(u2));

  int checked = 0;
  for (int p : {5, 7}) {
    const FieldConfig cfg(p, 1);
    const std::vector<std::vector<IntPoly>> families{{{0, 1}}, {{0, 1}, {0, 0, 1}}, {{0, 1}, {0, 0, 1}, {0, 0, 0, 1}}};
    for (const auto& polys : families) {
      const ProgressionConfig pc(cfg, std::vector<IntVec>(polys.size(), IntVec{1}), polys);
      std::vector<std::int64_t> phi(polys.size(), 0);
      while (true) {
        const auto r = weil_gap(pc, phi);
        ++checked;
        o.require(r.ok, "Weil bound violated at p=" + std::to_string(p));
        std::size_t i = 0;
        while (i < phi.size() && ++phi[i] == p) phi[i++] = 0;
        if (i == phi.size()) break;
      }
    }
  }
  if (o.pass) o.detail = "|Lambda| = p^-1/2 at 5, 13; U2 = 5^-1/4; " + std::to_string(checked) + " Weil sums within bound";
  return o;
}

Outcome count_decay() {
  Outcome o;
  ExperimentConfig c = default_config("tcount");
  c.primes = {5, 7, 11, 13};
  c.trials = 20;
  const Report rep = run_tcount_decay(c);
  o.require(rep.records.size() == 4, "expected 4 records");
  if (rep.records.size() != 4) return o;
  const double g5 = rep.records.front().measured["max_gap"].get<double>();
  const double g13 = rep.records.back().measured["max_gap"].get<double>();
  const auto slope = rep.summary["slope"];
  o.require(g13 < g5, "gap at 13 (" + fmt(g13) + ") not below gap at 5 (" + fmt(g5) + ")");
  o.require(slope.is_number() && slope.get<double>() < -0.2, "slope " + slope.dump());
  if (o.pass) o.detail = "gap 5: " + fmt(g5) + ", gap 13: " + fmt(g13) + ", slope " + fmt(slope.get<double>());
  return o;
}

Outcome u2_inverse_criterion() {
  Outcome o;
  int count = 0;
  for (int p : {5, 7}) {
    const FieldConfig cfg(p, 2);
    std::mt19937_64 rng(static_cast<std::uint64_t>(p));
    for (int t = 0; t < 50; ++t) {
      FpPoint v;
      do {
        v.coords = {static_cast<int>(rng() % static_cast<unsigned>(p)), static_cast<int>(rng() % static_cast<unsigned>(p))};
      } while (v.is_zero());
      const auto f = random_one_bounded(cfg, rng(), t % 2 ? Disk{} : FunctionKind{UnitPhase{}});
      const auto r = u2_inverse(f, v);
      const double n4 = std::pow(gowers_norm(f, v, 2), 4);
      o.require(r.correlation >= n4 - 1e-9, "correlation below ||f||^4 at p=" + std::to_string(p));
      o.require(eigen_defects(r.chi).ok(), "eigenfunction invariants fail at p=" + std::to_string(p));

      // E(chi | v) = chi 1_{phi = 0}
      const auto proj = conditional_expectation(r.chi.chi, cyclic(cfg, v));
      double gap = 0;
      for (Index x = 0; x < cfg.order(); ++x) {
        const Complex expect = r.chi.phi[x] == 0 ? r.chi.chi[x] : Complex(0, 0);
        gap = std::max(gap, std::abs(proj[x] - expect));
      }
      o.require(gap <= 1e-9, "projection identity off by " + fmt(gap));
      ++count;
    }
  }
  if (o.pass) o.detail = std::to_string(count) + " functions at p=5,7, D=2";
  return o;
}

int run_command(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string without_runtime(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("\"runtime_ms\"") == std::string::npos) out += line + "\n";
  return out;
}

Outcome cli(const std::string& exe) {
  Outcome o;
  if (exe.empty()) {
    o.require(false, "no ulab executable given");
    return o;
  }
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("ulab_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string q = "'" + exe + "'";

  const int a = run_command(q + " verify all --seed 7 --json " + (dir / "a.json").string());
  const int b = run_command(q + " verify all --seed 7 --json " + (dir / "b.json").string());
  o.require(a == 0 && b == 0, "verify all exited " + std::to_string(a) + ", " + std::to_string(b));
  const std::string ra = without_runtime(dir / "a.json"), rb = without_runtime(dir / "b.json");
  o.require(!ra.empty() && ra == rb, "verify all reports differ beyond runtime fields");

  o.require(run_command(q + " verify identity --primes 3,5") == 0, "verify identity --primes 3,5 did not exit 0");
  {
    std::ofstream bad(dir / "bad.json");
    bad << "{\"progression\": {\"primes\": [3, 5}";
  }
  o.require(run_command(q + " verify identity --config " + (dir / "bad.json").string()) == 2, "malformed config did not exit 2");
  {
    std::ofstream wrong(dir / "wrong.json");
    wrong << R"({"progression": {"primes": [4]}})";
  }
  o.require(run_command(q + " verify identity --config " + (dir / "wrong.json").string()) == 2, "invalid prime did not exit 2");
  o.require(run_command(q + " verify nonsense") == 2, "unknown suite did not exit 2");
  o.require(run_command(q) == 2, "missing subcommand did not exit 2");
  fs::remove_all(dir);
  if (o.pass) o.detail = "verify all reproducible (" + std::to_string(ra.size()) + " bytes), exit codes 0/2 as specified";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "exact identities", 120, identities},
      {2, "theorem-backed inequalities", 300, inequalities},
      {3, "golden PET run", 1, golden_pet},
      {4, "PET bound numeric", 180, pet_bound},
      {5, "type formalism", 1, types},
      {6, "Gauss calibration", 60, gauss},
      {7, "count decay trend", 300, count_decay},
      {8, "U2 inverse", 120, u2_inverse_criterion},
      {9, "determinism and CLI", 600, [&] { return cli(exe); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) o.require(false, "took " + fmt(secs) + " s, limit " + fmt(c.limit_s) + " s");
    std::printf("%s [%d] %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
