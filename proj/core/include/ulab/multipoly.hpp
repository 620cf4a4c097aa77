#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ulab/field.hpp"

namespace ulab {

// Vector-valued polynomial in Z[n, h_1, h_2, ...]^D. Variable 0 is n,
// variable k >= 1 is h_k. Exponents carry no trailing zeros, so the map
// order is canonical regardless of how many h variables are in play.
class MultiPoly {
 public:
  using Exponent = std::vector<int>;

  explicit MultiPoly(std::size_t dimension = 1) : dim_(dimension) {}

  static MultiPoly monomial(std::size_t dimension, Exponent e, IntVec coeff);
  static MultiPoly from_vec_poly(const IntVecPoly& q);
  // Scalar polynomial x_var (var 0 = n).
  static MultiPoly variable(int var);
  static MultiPoly constant(const IntVec& c);

  std::size_t dimension() const noexcept { return dim_; }
  const std::map<Exponent, IntVec>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  int n_degree() const;
  int total_degree() const;
  int h_count() const;  // largest h index in use
  bool is_constant_in_n() const { return n_degree() <= 0; }

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator-() const;
  MultiPoly scaled(std::int64_t k) const;
  // this * s where s is scalar-valued (dimension 1).
  MultiPoly times(const MultiPoly& s) const;
  bool operator==(const MultiPoly& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

  // n -> n + h_k
  MultiPoly shift_n(int k) const;
  // Coefficient of n^power, as a polynomial in the h variables.
  MultiPoly n_coefficient(int power) const;
  // Coefficient vector of the monomial with exponent e (e[0] is the power of n).
  IntVec coefficient(const Exponent& e) const;

  // Values for variables 0..k; missing variables are 0.
  IntVec evaluate_mod(const std::vector<std::int64_t>& values, int p) const;
  // Substitutes given variables mod p and reduces remaining coefficients mod p.
  MultiPoly substitute_mod(const std::map<int, std::int64_t>& values, int p) const;
  // Renumbers the h variables in use to h_1..h_k in order.
  MultiPoly compact_h() const;

  void add_term(const Exponent& e, const IntVec& c);

 private:
  std::size_t dim_;
  std::map<Exponent, IntVec> terms_;
};

MultiPoly tilde(const MultiPoly& q);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

// Printing in the paper's notation. In symbolic mode coefficient vectors
// are read as combinations of v1..vD, otherwise printed as tuples.
std::string format_poly(const MultiPoly& q, bool symbolic = true);
std::string format_vector(const IntVec& c, bool symbolic = true);

}  // namespace ulab
