#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ulab/multipoly.hpp"
#include "ulab/norms.hpp"

namespace ulab {

// groups[i] = (H_i1, ..., H_is) for each index i of a finite family.
struct SubgroupFamily {
  std::vector<std::vector<Subgroup>> groups;

  std::size_t size() const noexcept { return groups.size(); }
  int s() const { return groups.empty() ? 0 : static_cast<int>(groups.front().size()); }
  void validate() const;
};

struct ConcatResult {
  double lhs = 0;
  double rhs = 0;
  bool ok = false;
};

// (E_i ||f||^2_{H_i})^2 <= E_{i,i'} ||f||^2_{H_i + H_i'}
ConcatResult concat_deg1_check(const GroupFunction& f, const SubgroupFamily& fam);

// (E_i ||f||^{2^{s+1}}_{H_i,K_i1..K_is})^{2^{2s+1}}
//   <= E_{i,i'} ||f||^{2^{2s+1}}_{K_i1..K_is,K_i'1..K_i's,H_i+H_i'}
ConcatResult concat_main_check(const GroupFunction& f, const SubgroupFamily& ks, const std::vector<Subgroup>& hs);

enum class ConcatPattern {
  prefix,    // eps, eps' agree on the first s-j coordinates and differ at s+1-j
  distinct,  // all eps != eps'
};

// Pairs (eps, eps') in {0,1}^s, eps < eps' as integers, for direction j
// (1-based). Bit t-1 of an integer eps holds eps_t.
std::vector<std::pair<int, int>> concat_pairs(int s, int j, ConcatPattern pattern);

struct ConcatWalkResult {
  double delta = 0;      // E_i ||f||^{2^s}_{H_i1..H_is}
  long exponent = 0;     // power of delta on the left, replayed from the proof
  int rhs_power = 0;     // power of the norm on the right
  double lhs = 0;        // delta^exponent
  double rhs = 0;
  std::vector<std::string> ledger;  // one line per application of the lemma
  bool ok = false;
};

// Full concatenation over index tuples (i_eps), s <= 2. The distinct pattern
// reports E ||f|| to the first power; the prefix pattern is the sharper
// variant and keeps the norm power 2^{#groups} from the proof.
ConcatWalkResult concat_walk_check(const GroupFunction& f, const SubgroupFamily& fam,
                                   ConcatPattern pattern = ConcatPattern::distinct);

// Number of zeros of a scalar polynomial in h_1..h_s over F_p^s.
std::int64_t zero_set_count(const MultiPoly& g, int p);

struct ZeroSetReport {
  std::int64_t count = 0;
  int variables = 0;
  int degree = 0;
  double bound = 0;       // s * d * p^{s-1}
  double measured_c = 0;  // count / p^{s-1}
  bool ok = false;
};
ZeroSetReport zero_set_report(const MultiPoly& g, int p);

// Monomials of A_{d,s'} ordered by degree descending, then exponent
// descending: for d = s' = 2 this is h1^2, h1h2, h2^2, h1, h2, 1.
std::vector<MultiPoly::Exponent> monomials_up_to(int d, int s_prime);

// det(h_j^{u_i}) for j = 1..|A_{d,s'}|, variable h_{j,t} numbered (j-1)s'+t.
MultiPoly exponent_matrix_determinant(int d, int s_prime);

// Canonical reduced row echelon form of the span, used as a cache key.
std::vector<FpPoint> rref_mod_p(const FieldConfig& cfg, std::vector<FpPoint> vectors);

struct PolyConcatResult {
  int k = 0;                     // concatenation depth
  long exponent = 0;             // power of the h-average on the left
  double lhs = 0;                // (E_h ||f||^{2^s}_{c(h)})^exponent
  double middle = 0;             // the concatenated average before discarding bad tuples
  double rhs = 0;                // norm along the principal groups G_j
  double exception_fraction = 0;
  double measured_c = 0;         // exception_fraction * p
  std::vector<Subgroup> principal;  // G_j
  bool ok = false;
};

// s = dirs.size() in {1, 2}. Directions are polynomials in h only with
// coefficients in Z^D. For s = 2 each direction may carry at most two
// monomials, so that sums of two lines already reach G_j.
PolyConcatResult polynomial_concat_check(const GroupFunction& f, const std::vector<MultiPoly>& dirs);

}  // namespace ulab
