#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "ulab/error.hpp"

namespace ulab {

using Complex = std::complex<double>;
using Index = std::uint32_t;
using IntVec = std::vector<std::int64_t>;

inline constexpr double kTolerance = 1e-9;

bool is_prime(std::int64_t p);

// A point of F_p^D, coordinates in [0, p).
struct FpPoint {
  std::vector<int> coords;

  bool operator==(const FpPoint&) const = default;
  bool is_zero() const;
};

class FieldConfig {
 public:
  FieldConfig(int prime, int dimension);

  int prime() const noexcept { return p_; }
  int dimension() const noexcept { return d_; }
  std::size_t order() const noexcept { return order_; }

  // index(x) = sum_i x_i p^(i-1)
  Index index(const FpPoint& x) const;
  FpPoint point(Index idx) const;
  FpPoint reduce(const IntVec& v) const;

  Index add(Index a, Index b) const;
  Index sub(Index a, Index b) const;
  Index neg(Index a) const;
  Index scale(Index a, std::int64_t k) const;

  // e_p(a) for any integer a (reduced mod p first).
  Complex ep(std::int64_t a) const { return roots_[mod(a)]; }
  int mod(std::int64_t a) const {
    std::int64_t r = a % p_;
    return static_cast<int>(r < 0 ? r + p_ : r);
  }

  // perm[x] = index(x + s)
  std::vector<Index> translation(Index s) const;

  bool operator==(const FieldConfig& o) const { return p_ == o.p_ && d_ == o.d_; }

 private:
  int p_;
  int d_;
  std::size_t order_;
  std::vector<Complex> roots_;
};

Complex ep(const FieldConfig& cfg, int a);

class GroupFunction {
 public:
  GroupFunction(FieldConfig cfg, std::vector<Complex> values, double sup_bound = 1.0);

  static GroupFunction constant(const FieldConfig& cfg, Complex c);
  static GroupFunction from(const FieldConfig& cfg, const std::function<Complex(const FpPoint&)>& fn,
                            double sup_bound = 1.0);

  const FieldConfig& cfg() const noexcept { return cfg_; }
  const std::vector<Complex>& values() const noexcept { return values_; }
  double sup_bound() const noexcept { return sup_; }
  std::size_t size() const noexcept { return values_.size(); }
  Complex operator[](Index i) const { return values_[i]; }
  Complex at(const FpPoint& x) const { return values_[cfg_.index(x)]; }

  Complex mean() const;
  GroupFunction conj() const;
  GroupFunction translate(Index s) const;  // x -> f(x + s)

 private:
  FieldConfig cfg_;
  std::vector<Complex> values_;
  double sup_;
};

GroupFunction multiply(const GroupFunction& f, const GroupFunction& g);
GroupFunction linear_combination(Complex a, const GroupFunction& f, Complex b, const GroupFunction& g);
void require_same_field(const FieldConfig& a, const FieldConfig& b);

class Subgroup {
 public:
  const FieldConfig& cfg() const noexcept { return cfg_; }
  const std::vector<FpPoint>& generators() const noexcept { return gens_; }
  const std::vector<Index>& elements() const noexcept { return elems_; }
  std::size_t size() const noexcept { return elems_.size(); }
  bool contains(Index x) const;
  bool is_trivial() const noexcept { return elems_.size() == 1; }

  // Cosets in order of their smallest member; members sorted.
  std::size_t coset_count() const noexcept { return coset_rep_.size(); }
  Index coset_of(Index x) const { return coset_id_[x]; }
  const std::vector<Index>& coset_members() const noexcept { return coset_members_; }

  bool operator==(const Subgroup& o) const { return cfg_ == o.cfg_ && elems_ == o.elems_; }

 private:
  friend Subgroup subgroup_span(const FieldConfig&, const std::vector<FpPoint>&);
  explicit Subgroup(FieldConfig cfg) : cfg_(std::move(cfg)) {}

  FieldConfig cfg_;
  std::vector<FpPoint> gens_;
  std::vector<Index> elems_;
  std::vector<Index> coset_id_;
  std::vector<Index> coset_rep_;
  std::vector<Index> coset_members_;  // coset k occupies [k*|H|, (k+1)*|H|)
};

Subgroup subgroup_span(const FieldConfig& cfg, const std::vector<FpPoint>& generators);
Subgroup cyclic(const FieldConfig& cfg, const FpPoint& v);
Subgroup subgroup_sum(const Subgroup& h, const Subgroup& k);

GroupFunction conditional_expectation(const GroupFunction& f, const Subgroup& h);

// a_0 + a_1 n + ... + a_d n^d with a_i in Z^D.
class IntVecPoly {
 public:
  IntVecPoly(std::size_t dimension, std::vector<IntVec> coefficients);
  static IntVecPoly scaled(const IntVec& v, const std::vector<std::int64_t>& scalar_coeffs);

  std::size_t dimension() const noexcept { return dim_; }
  const std::vector<IntVec>& coefficients() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool vanishes_mod(int p) const;

 private:
  std::size_t dim_;
  std::vector<IntVec> coeffs_;
};

FpPoint eval_vec_poly(const IntVecPoly& q, std::int64_t n, const FieldConfig& cfg);

// Warning sink; defaults to stderr. Used for lossy mod-p reductions.
void set_warning_handler(std::function<void(const std::string&)> handler);
void warn(const std::string& message);

struct UnitPhase {};
struct Disk {};
struct Indicator {
  double density = 0.5;
};
struct Character {
  std::vector<std::int64_t> frequency;
};
// e_p(x^T A x + b.x), A given row-major D x D.
struct QuadraticPhase {
  std::vector<std::int64_t> quadratic;
  std::vector<std::int64_t> linear;
};
using FunctionKind = std::variant<UnitPhase, Disk, Indicator, Character, QuadraticPhase>;

GroupFunction random_one_bounded(const FieldConfig& cfg, std::uint64_t seed, const FunctionKind& kind);

}  // namespace ulab
