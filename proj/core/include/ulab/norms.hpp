#pragma once

#include <vector>

#include "ulab/field.hpp"

namespace ulab {

// Ordered list of subgroups H_1..H_s; a direction v stands for <v>.
// Repeating an entry gives the H^{xs} notation.
using DirectionSpec = std::vector<Subgroup>;

DirectionSpec directions(const FieldConfig& cfg, const std::vector<FpPoint>& vs);
DirectionSpec repeated(const Subgroup& h, int s);

GroupFunction mult_derivative(const GroupFunction& f, Index h);
GroupFunction mult_derivative(const GroupFunction& f, const FpPoint& h);

// E_x E_{h in H_1 x ... x H_s} Delta_{h_1..h_s} f(x), i.e. the norm to the power 2^s.
// Inductive path: recursion on the first direction, closed form at the last.
double box_average(const GroupFunction& f, const DirectionSpec& dirs);
// The plain 2^s-fold product sum. Kept as an oracle.
double box_average_direct(const GroupFunction& f, const DirectionSpec& dirs);

double box_norm(const GroupFunction& f, const DirectionSpec& dirs);
double box_norm_direct(const GroupFunction& f, const DirectionSpec& dirs);

double gowers_average(const GroupFunction& f, const FpPoint& v, int s);
double gowers_norm(const GroupFunction& f, const FpPoint& v, int s);

// fs[e] is f_eps with bit i of e holding eps_{i+1}.
Complex box_inner_product(const std::vector<GroupFunction>& fs, const DirectionSpec& dirs);

struct GcsResult {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};
GcsResult gcs_check(const std::vector<GroupFunction>& fs, const DirectionSpec& dirs);

// D_{s,v} f(x) = E_{h in F_p^s} prod_{eps != 0} C^{|eps|} f(x + (eps.h) v)
GroupFunction dual_function(const GroupFunction& f, const FpPoint& v, int s);

struct WeakInverseResult {
  double lhs = 0;
  Complex rhs;
  bool ok = false;
};
WeakInverseResult weak_inverse_check(const GroupFunction& f, const FpPoint& v, int s);

struct Eigenfunction {
  GroupFunction chi;
  FpPoint v;
  std::vector<int> phi;  // full table over F_p^D, constant on <v>-cosets
};

struct EigenDefects {
  double modulus = 0;     // max over x of dist(|chi(x)|, {0,1})
  double eigen = 0;       // max |chi(x+v) - e_p(phi(x)) chi(x)|
  bool invariant = true;  // phi(x+v) == phi(x)
  bool ok() const { return modulus <= kTolerance && eigen <= kTolerance && invariant; }
};
EigenDefects eigen_defects(const Eigenfunction& e);

// Coset representatives of <v>, each the lexicographically smallest
// member by (x_1, ..., x_D); listed in lexicographic order.
std::vector<Index> transversal(const FieldConfig& cfg, const FpPoint& v);

// chi(x' + v n) = 1_E(x') lambda e_p(phi(x') n + psi(x')), tables indexed
// by position in transversal(cfg, v).
Eigenfunction make_eigenfunction(const FieldConfig& cfg, const FpPoint& v, const std::vector<int>& phi,
                                 const std::vector<int>& psi, Complex lambda, const std::vector<bool>& support);

struct U2InverseResult {
  Eigenfunction chi;
  double correlation = 0;
};
U2InverseResult u2_inverse(const GroupFunction& f, const FpPoint& v);

}  // namespace ulab
