#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ulab/field.hpp"
#include "ulab/norms.hpp"

namespace ulab {

using IntPoly = std::vector<std::int64_t>;  // a_0, a_1, ..., a_d

IntPoly trim(IntPoly p);
int degree(const IntPoly& p);  // -1 for the zero polynomial

// Rank over Q of integer rows, by fraction-free elimination.
int rational_rank(std::vector<std::vector<std::int64_t>> rows);
bool linearly_independent(const std::vector<IntPoly>& polys);
bool pairwise_independent(const std::vector<IntPoly>& polys);

// Pattern x, x + v_{eta_1} p_1(n), ..., x + v_{eta_l} p_l(n) over F_p^D.
class ProgressionConfig {
 public:
  ProgressionConfig(FieldConfig cfg, std::vector<IntVec> vectors, std::vector<IntPoly> polys,
                    std::vector<int> eta = {}, bool theorem_mode = true);

  const FieldConfig& cfg() const noexcept { return cfg_; }
  int length() const noexcept { return static_cast<int>(polys_.size()); }
  int degree() const noexcept { return degree_; }
  bool theorem_mode() const noexcept { return theorem_mode_; }
  const std::vector<IntVec>& vectors() const noexcept { return vectors_; }
  const std::vector<IntPoly>& polys() const noexcept { return polys_; }
  const std::vector<int>& eta() const noexcept { return eta_; }

  // v_{eta_j} for j in 1..l; the zero vector for j = 0.
  IntVec vector_for(int j) const;
  // p_j, with p_0 = 0.
  IntPoly poly(int j) const;
  // v_{eta_j} p_j(n) as an integer vector polynomial.
  IntVecPoly offset(int j) const;
  // index of v_{eta_j} p_j(n) mod p, shift(j)[n].
  const std::vector<Index>& shifts(int j) const { return shifts_[static_cast<std::size_t>(j)]; }

  ProgressionConfig with_field(const FieldConfig& cfg) const;

 private:
  FieldConfig cfg_;
  std::vector<IntVec> vectors_;
  std::vector<IntPoly> polys_;
  std::vector<int> eta_;
  bool theorem_mode_;
  int degree_ = 0;
  std::vector<std::vector<Index>> shifts_;
};

Complex counting_operator(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs);
Complex structured_count(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs);
double tcount_gap(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs);

// tilde f_m(x) = E_n prod_{j != m} conj f_j(x + v_j p_j(n) - v_m p_m(n)),
// so that Lambda(fs) = E_x f_m(x) conj(tilde f_m(x)).
GroupFunction tilde_dual(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs, int m);

struct BoundCheck {
  double value = 0;
  double bound = 0;
  bool ok = true;
};

struct DualReplacementResult {
  double identity_gap = 0;
  bool ok = false;
  BoundCheck tilde_part;  // Lambda(.., tilde f_m, ..) >= |Lambda|^2
  std::optional<BoundCheck> u1_part;  // Lambda(.., E(tilde f_m | v_m), ..) >= ||tilde f_m||_{U^1}^2
  std::optional<BoundCheck> us_part;  // Lambda(.., conj D tilde f_m, ..) >= ||tilde f_m||_{U^s}^{2^s}
};
// Parts (ii) and (iii) need v_m != 0, so they are skipped for m = 0.
DualReplacementResult dual_replacement_check(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs,
                                             int m, const GroupFunction& g, int s = 2);

// Pairs (x, n), n != 0, with x and every x + v_{eta_j} p_j(n) in S.
std::int64_t progression_count(const GroupFunction& indicator, const ProgressionConfig& pc);

struct WeilResult {
  double value = 0;
  double bound = 0;
  bool applicable = false;  // sum phi_j p_j nonconstant mod p
  bool ok = true;
};
WeilResult weil_gap(const ProgressionConfig& pc, const std::vector<std::int64_t>& phis);

// A : F_p^D x F_p -> C stored at x + n p^D.
class SpaceTimeFunction {
 public:
  SpaceTimeFunction(FieldConfig cfg, std::vector<Complex> values);
  static SpaceTimeFunction random(const FieldConfig& cfg, std::uint64_t seed);
  static SpaceTimeFunction constant(const FieldConfig& cfg, Complex c);
  const FieldConfig& cfg() const noexcept { return cfg_; }
  Complex operator()(Index x, int n) const { return values_[x + static_cast<std::size_t>(n) * cfg_.order()]; }
  const std::vector<Complex>& values() const noexcept { return values_; }

 private:
  FieldConfig cfg_;
  std::vector<Complex> values_;
};

// An element of the dual class along u of degree at most s.
struct DualSpec {
  FpPoint u;
  int s = 1;
  GroupFunction base;
  GroupFunction realize() const { return dual_function(base, u, s); }
};

struct InequalityResult {
  double lhs = 0;
  double rhs = 0;
  bool ok = false;
};

int default_removing_duals_s(const std::vector<std::pair<DualSpec, IntVecPoly>>& duals);
InequalityResult removing_duals_check(const SpaceTimeFunction& a,
                                      const std::vector<std::pair<DualSpec, IntVecPoly>>& duals,
                                      std::optional<int> s = std::nullopt);

// us[h] indexed by h in F_p^s in mixed radix (h_1 least significant).
struct InterchangeResult {
  Complex premise;
  double conclusion = 0;
  bool ok = false;
};
InterchangeResult dual_difference_interchange_check(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs,
                                                     int m, const std::vector<FpPoint>& betas,
                                                     const std::vector<GroupFunction>& us);

// gs[j][k]: g_{j,h} where k indexes h with coordinate h_j removed
// (remaining coordinates in order, mixed radix).
InequalityResult low_complexity_check(const GroupFunction& f, const FpPoint& v, int s,
                                      const std::vector<std::vector<GroupFunction>>& gs);

}  // namespace ulab
