#include "ulab/field.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace ulab {

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool FpPoint::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](int c) { return c == 0; });
}

FieldConfig::FieldConfig(int prime, int dimension) : p_(prime), d_(dimension), order_(1) {
  if (!is_prime(prime)) throw Error(ErrorCode::invalid_argument, std::to_string(prime) + " is not prime");
  if (dimension < 1) throw Error(ErrorCode::invalid_argument, "dimension must be at least 1");
  constexpr std::size_t limit = std::size_t{1} << 31;
  for (int i = 0; i < dimension; ++i) {
    if (order_ > limit / static_cast<std::size_t>(prime))
      throw Error(ErrorCode::invalid_argument, "p^D exceeds the index width");
    order_ *= static_cast<std::size_t>(prime);
  }
  roots_.resize(static_cast<std::size_t>(prime));
  for (int a = 0; a < prime; ++a) {
    double t = 2.0 * std::numbers::pi * a / prime;
    roots_[static_cast<std::size_t>(a)] = Complex(std::cos(t), std::sin(t));
  }
}

Index FieldConfig::index(const FpPoint& x) const {
  if (static_cast<int>(x.coords.size()) != d_) throw Error(ErrorCode::size_mismatch, "point has wrong dimension");
  Index r = 0;
  for (int i = d_ - 1; i >= 0; --i) r = r * static_cast<Index>(p_) + static_cast<Index>(mod(x.coords[i]));
  return r;
}

FpPoint FieldConfig::point(Index idx) const {
  FpPoint x;
  x.coords.resize(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) {
    x.coords[i] = static_cast<int>(idx % static_cast<Index>(p_));
    idx /= static_cast<Index>(p_);
  }
  return x;
}

FpPoint FieldConfig::reduce(const IntVec& v) const {
  if (static_cast<int>(v.size()) != d_) throw Error(ErrorCode::size_mismatch, "vector has wrong dimension");
  FpPoint x;
  for (auto c : v) x.coords.push_back(mod(c));
  return x;
}

Index FieldConfig::add(Index a, Index b) const {
  const Index p = static_cast<Index>(p_);
  Index r = 0, mul = 1;
  for (int i = 0; i < d_; ++i) {
    Index s = a % p + b % p;
    if (s >= p) s -= p;
    r += s * mul;
    mul *= p;
    a /= p;
    b /= p;
  }
  return r;
}

Index FieldConfig::neg(Index a) const {
  const Index p = static_cast<Index>(p_);
  Index r = 0, mul = 1;
  for (int i = 0; i < d_; ++i) {
    Index da = a % p;
    r += (da == 0 ? 0 : p - da) * mul;
    mul *= p;
    a /= p;
  }
  return r;
}

Index FieldConfig::sub(Index a, Index b) const { return add(a, neg(b)); }

Index FieldConfig::scale(Index a, std::int64_t k) const {
  const Index p = static_cast<Index>(p_);
  const Index kk = static_cast<Index>(mod(k));
  Index r = 0, mul = 1;
  for (int i = 0; i < d_; ++i) {
    r += (a % p) * kk % p * mul;
    mul *= p;
    a /= p;
  }
  return r;
}

std::vector<Index> FieldConfig::translation(Index s) const {
  std::vector<Index> perm(order_);
  for (std::size_t x = 0; x < order_; ++x) perm[x] = add(static_cast<Index>(x), s);
  return perm;
}

Complex ep(const FieldConfig& cfg, int a) {
  if (a < 0 || a >= cfg.prime()) throw Error(ErrorCode::invalid_argument, "residue out of range");
  return cfg.ep(a);
}

void require_same_field(const FieldConfig& a, const FieldConfig& b) {
  if (!(a == b)) throw Error(ErrorCode::size_mismatch, "functions live on different groups");
}

GroupFunction::GroupFunction(FieldConfig cfg, std::vector<Complex> values, double sup_bound)
    : cfg_(std::move(cfg)), values_(std::move(values)), sup_(sup_bound) {
  if (values_.size() != cfg_.order()) throw Error(ErrorCode::size_mismatch, "table length must be p^D");
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::invalid_argument, "non-finite function value");
    if (std::abs(v) > sup_ + 1e-12) throw Error(ErrorCode::invalid_argument, "value exceeds declared sup bound");
  }
}

GroupFunction GroupFunction::constant(const FieldConfig& cfg, Complex c) {
  return GroupFunction(cfg, std::vector<Complex>(cfg.order(), c), std::abs(c));
}

GroupFunction GroupFunction::from(const FieldConfig& cfg, const std::function<Complex(const FpPoint&)>& fn,
                                  double sup_bound) {
  std::vector<Complex> v(cfg.order());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(cfg.point(static_cast<Index>(i)));
  return GroupFunction(cfg, std::move(v), sup_bound);
}

Complex GroupFunction::mean() const {
  Complex s = 0;
  for (const auto& v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

GroupFunction GroupFunction::conj() const {
  std::vector<Complex> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](Complex z) { return std::conj(z); });
  return GroupFunction(cfg_, std::move(v), sup_);
}

GroupFunction GroupFunction::translate(Index s) const {
  std::vector<Complex> v(values_.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = values_[cfg_.add(static_cast<Index>(x), s)];
  return GroupFunction(cfg_, std::move(v), sup_);
}

GroupFunction multiply(const GroupFunction& f, const GroupFunction& g) {
  require_same_field(f.cfg(), g.cfg());
  std::vector<Complex> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.values()[i] * g.values()[i];
  return GroupFunction(f.cfg(), std::move(v), f.sup_bound() * g.sup_bound());
}

GroupFunction linear_combination(Complex a, const GroupFunction& f, Complex b, const GroupFunction& g) {
  require_same_field(f.cfg(), g.cfg());
  std::vector<Complex> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * f.values()[i] + b * g.values()[i];
  return GroupFunction(f.cfg(), std::move(v), std::abs(a) * f.sup_bound() + std::abs(b) * g.sup_bound());
}

bool Subgroup::contains(Index x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

Subgroup subgroup_span(const FieldConfig& cfg, const std::vector<FpPoint>& generators) {
  Subgroup h(cfg);
  h.gens_ = generators;
  std::vector<char> member(cfg.order(), 0);
  std::vector<Index> elems{0};
  member[0] = 1;
  for (const auto& g : generators) {
    const Index gi = cfg.index(g);
    if (member[gi]) continue;
    // span(S u {g}) = S + <g> since S is already a subgroup
    const std::size_t base = elems.size();
    Index step = gi;
    for (int k = 1; k < cfg.prime(); ++k) {
      for (std::size_t i = 0; i < base; ++i) {
        Index y = cfg.add(elems[i], step);
        member[y] = 1;
        elems.push_back(y);
      }
      step = cfg.add(step, gi);
    }
  }
  std::sort(elems.begin(), elems.end());
  h.elems_ = std::move(elems);

  const std::size_t n = cfg.order();
  constexpr Index unset = std::numeric_limits<Index>::max();
  h.coset_id_.assign(n, unset);
  h.coset_members_.reserve(n);
  std::vector<Index> members(h.elems_.size());
  for (std::size_t x = 0; x < n; ++x) {
    if (h.coset_id_[x] != unset) continue;
    const Index id = static_cast<Index>(h.coset_rep_.size());
    h.coset_rep_.push_back(static_cast<Index>(x));
    for (std::size_t i = 0; i < h.elems_.size(); ++i) members[i] = cfg.add(static_cast<Index>(x), h.elems_[i]);
    std::sort(members.begin(), members.end());
    for (Index y : members) {
      h.coset_id_[y] = id;
      h.coset_members_.push_back(y);
    }
  }
  return h;
}

Subgroup cyclic(const FieldConfig& cfg, const FpPoint& v) { return subgroup_span(cfg, {v}); }

Subgroup subgroup_sum(const Subgroup& h, const Subgroup& k) {
  require_same_field(h.cfg(), k.cfg());
  std::vector<FpPoint> gens = h.generators();
  gens.insert(gens.end(), k.generators().begin(), k.generators().end());
  return subgroup_span(h.cfg(), gens);
}

GroupFunction conditional_expectation(const GroupFunction& f, const Subgroup& h) {
  require_same_field(f.cfg(), h.cfg());
  const std::size_t m = h.size();
  const auto& members = h.coset_members();
  std::vector<Complex> out(f.size());
  for (std::size_t c = 0; c < h.coset_count(); ++c) {
    const Index* cos = members.data() + c * m;
    const Complex first = f[cos[0]];
    bool uniform = true;
    Complex sum = 0;
    for (std::size_t i = 0; i < m; ++i) {
      sum += f[cos[i]];
      uniform = uniform && f[cos[i]] == first;
    }
    // an already invariant coset is copied so the projection is exactly idempotent
    const Complex avg = uniform ? first : sum / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) out[cos[i]] = avg;
  }
  return GroupFunction(f.cfg(), std::move(out), f.sup_bound());
}

IntVecPoly::IntVecPoly(std::size_t dimension, std::vector<IntVec> coefficients)
    : dim_(dimension), coeffs_(std::move(coefficients)) {
  for (const auto& c : coeffs_)
    if (c.size() != dim_) throw Error(ErrorCode::size_mismatch, "coefficient vector has wrong dimension");
  while (!coeffs_.empty() && std::all_of(coeffs_.back().begin(), coeffs_.back().end(), [](auto c) { return c == 0; }))
    coeffs_.pop_back();
}

IntVecPoly IntVecPoly::scaled(const IntVec& v, const std::vector<std::int64_t>& scalar_coeffs) {
  std::vector<IntVec> cs;
  for (auto a : scalar_coeffs) {
    IntVec c(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (__builtin_mul_overflow(a, v[i], &c[i])) throw Error(ErrorCode::overflow, "coefficient overflow");
    }
    cs.push_back(std::move(c));
  }
  return IntVecPoly(v.size(), std::move(cs));
}

bool IntVecPoly::vanishes_mod(int p) const {
  for (const auto& c : coeffs_)
    for (auto a : c)
      if (a % p != 0) return false;
  return true;
}

FpPoint eval_vec_poly(const IntVecPoly& q, std::int64_t n, const FieldConfig& cfg) {
  if (static_cast<int>(q.dimension()) != cfg.dimension())
    throw Error(ErrorCode::size_mismatch, "polynomial dimension differs from field dimension");
  const std::int64_t p = cfg.prime();
  const std::int64_t nn = cfg.mod(n);
  std::vector<std::int64_t> acc(q.dimension(), 0);
  const auto& cs = q.coefficients();
  for (auto it = cs.rbegin(); it != cs.rend(); ++it)
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = (acc[i] * nn + cfg.mod((*it)[i])) % p;
  FpPoint x;
  for (auto a : acc) x.coords.push_back(static_cast<int>(a));
  return x;
}

namespace {
std::function<void(const std::string&)>& warning_handler() {
  static std::function<void(const std::string&)> h = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
  return h;
}
}  // namespace

void set_warning_handler(std::function<void(const std::string&)> handler) { warning_handler() = std::move(handler); }
void warn(const std::string& message) {
  if (warning_handler()) warning_handler()(message);
}

GroupFunction random_one_bounded(const FieldConfig& cfg, std::uint64_t seed, const FunctionKind& kind) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = cfg.order();
  const int d = cfg.dimension();
  std::vector<Complex> v(n);

  if (std::holds_alternative<UnitPhase>(kind)) {
    for (auto& z : v) z = std::polar(1.0, 2.0 * std::numbers::pi * unit(rng));
  } else if (std::holds_alternative<Disk>(kind)) {
    for (auto& z : v) {
      double r = std::sqrt(unit(rng));
      z = std::polar(r, 2.0 * std::numbers::pi * unit(rng));
    }
  } else if (const auto* ind = std::get_if<Indicator>(&kind)) {
    if (!(ind->density >= 0.0 && ind->density <= 1.0))
      throw Error(ErrorCode::invalid_argument, "indicator density must lie in [0,1]");
    for (auto& z : v) z = unit(rng) < ind->density ? 1.0 : 0.0;
  } else if (const auto* ch = std::get_if<Character>(&kind)) {
    if (static_cast<int>(ch->frequency.size()) != d) throw Error(ErrorCode::size_mismatch, "frequency has wrong dimension");
    for (std::size_t i = 0; i < n; ++i) {
      FpPoint x = cfg.point(static_cast<Index>(i));
      std::int64_t a = 0;
      for (int k = 0; k < d; ++k) a += cfg.mod(ch->frequency[k]) * x.coords[k];
      v[i] = cfg.ep(a);
    }
  } else {
    const auto& q = std::get<QuadraticPhase>(kind);
    if (static_cast<int>(q.quadratic.size()) != d * d || static_cast<int>(q.linear.size()) != d)
      throw Error(ErrorCode::size_mismatch, "quadratic phase needs a DxD matrix and a length-D vector");
    for (std::size_t i = 0; i < n; ++i) {
      FpPoint x = cfg.point(static_cast<Index>(i));
      std::int64_t a = 0;
      for (int r = 0; r < d; ++r) {
        a += cfg.mod(q.linear[r]) * x.coords[r];
        for (int c = 0; c < d; ++c) a += cfg.mod(q.quadratic[r * d + c]) * x.coords[r] % cfg.prime() * x.coords[c];
        a %= cfg.prime();
      }
      v[i] = cfg.ep(a);
    }
  }
  return GroupFunction(cfg, std::move(v), 1.0);
}

}  // namespace ulab
