#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ulab/counting.hpp"
#include "ulab/multipoly.hpp"

namespace ulab {

struct PolyFamily {
  std::vector<MultiPoly> members;
  std::vector<int> provenance;  // index j in [0, l] of the attached function
  int h_count = 0;

  std::size_t size() const noexcept { return members.size(); }
  void validate() const;
};

// Members v_{eta_j} p_j(n), j = 1..l. Symbolic mode replaces v_t by the
// basis vector e_t of Z^l so results print as combinations of v1..vl.
PolyFamily initial_family(const ProgressionConfig& pc, bool symbolic);

// m is 1-based. Interleaved order: for each j, tilde q_j - tilde q_m then
// tilde(T q_j - q_m); zeros dropped, first copy of duplicates kept.
PolyFamily vdc_step(const PolyFamily& f, int m);

bool is_nice(const PolyFamily& f);

// Per degree from highest down: number of distinct leading-coefficient
// classes. Compared lexicographically.
std::vector<int> pet_weight(const PolyFamily& f);

// Lowest-index member of minimal positive n-degree; the last member only if
// nothing else qualifies. Returns 0 when all members are linear.
int choose_m(const PolyFamily& f);

struct PetResult {
  std::vector<int> steps;
  std::vector<PolyFamily> history;  // history[0] is the input
  PolyFamily final_family;
  std::vector<MultiPoly> directions;  // polynomials in h only
  int s = 0;
  int s_prime = 0;
  int distinguished = 0;  // provenance of the f_l slot
};

// Degree-3 families can double in size for thousands of steps; the run is
// abandoned with Error(cost_cap) once a family outgrows max_members.
PetResult pet_run(const PolyFamily& f, int max_steps = 64, std::size_t max_members = 4096);

struct AuditResult {
  bool ok = false;
  // allowed[j][support] = indices w valid for direction j on that support class
  std::vector<std::map<std::vector<int>, std::set<int>>> allowed;
  // union over directions for each single-variable class {h_i}
  std::map<int, std::set<int>> per_variable;
};

AuditResult pet_coefficient_audit(const PetResult& result, const PolyFamily& initial);
AuditResult pet_coefficient_audit(const PetResult& result, const ProgressionConfig& pc);

struct ExtractedDirections {
  std::vector<IntVec> vectors;  // over Z^D
  std::vector<FpPoint> reduced;
  int multiplicity = 0;
};
ExtractedDirections extract_directions(const ProgressionConfig& pc);

struct PetBoundResult {
  double lambda_abs = 0;
  int s = 0;
  int s_prime = 0;
  double lhs = 0;            // |Lambda|^(2^s')
  double rhs = 0;            // E_h ||f_l||^(2^s) over the evaluated directions
  double rhs_norm = 0;       // E_h ||f_l||
  double lhs_holder = 0;     // |Lambda|^(2^(s'+s))
  bool norm_form_ok = false;    // lhs <= rhs_norm
  bool holder_form_ok = false;  // lhs_holder <= rhs
  bool literal_ok = false;      // lhs <= rhs
  bool ok = false;
};
PetBoundResult pet_bound_check(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs);

// |E_x E_n f_0(x) prod f_j(x + a_j v_j n)| <= ||f_l||_{w_l, w_l - w_1, ..., w_l - w_{l-1}}
// with w_j = a_j v_j; every polynomial must be linear with zero constant term.
InequalityResult linear_average_check(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs);

std::string format_family(const PolyFamily& f, bool symbolic = true);

}  // namespace ulab
