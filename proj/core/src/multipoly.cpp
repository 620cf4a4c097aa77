#include "ulab/multipoly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ulab {
namespace {

void strip(MultiPoly::Exponent& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

bool all_zero(const IntVec& c) {
  return std::all_of(c.begin(), c.end(), [](auto v) { return v == 0; });
}

std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = checked_mul(r, n - k + i) / i;
  return r;
}

std::int64_t mod_p(std::int64_t a, int p) {
  a %= p;
  return a < 0 ? a + p : a;
}

}  // namespace

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::overflow, "integer overflow in polynomial arithmetic");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::overflow, "integer overflow in polynomial arithmetic");
  return r;
}

void MultiPoly::add_term(const Exponent& e0, const IntVec& c) {
  if (c.size() != dim_) throw Error(ErrorCode::size_mismatch, "coefficient has wrong dimension");
  Exponent e = e0;
  strip(e);
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted)
    for (std::size_t i = 0; i < dim_; ++i) it->second[i] = checked_add(it->second[i], c[i]);
  if (all_zero(it->second)) terms_.erase(it);
}

MultiPoly MultiPoly::monomial(std::size_t dimension, Exponent e, IntVec coeff) {
  MultiPoly q(dimension);
  q.add_term(e, coeff);
  return q;
}

MultiPoly MultiPoly::from_vec_poly(const IntVecPoly& v) {
  MultiPoly q(v.dimension());
  for (std::size_t i = 0; i < v.coefficients().size(); ++i) q.add_term({static_cast<int>(i)}, v.coefficients()[i]);
  return q;
}

MultiPoly MultiPoly::variable(int var) {
  Exponent e(static_cast<std::size_t>(var + 1), 0);
  e.back() = 1;
  return monomial(1, e, {1});
}

MultiPoly MultiPoly::constant(const IntVec& c) { return monomial(c.size(), {}, c); }

int MultiPoly::n_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.empty() ? 0 : e[0]);
  return d;
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

int MultiPoly::h_count() const {
  int k = 0;
  for (const auto& [e, c] : terms_) k = std::max(k, static_cast<int>(e.size()) - 1);
  return k;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  if (o.dim_ != dim_) throw Error(ErrorCode::size_mismatch, "polynomial dimensions differ");
  MultiPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MultiPoly MultiPoly::operator-() const { return scaled(-1); }

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::scaled(std::int64_t k) const {
  MultiPoly r(dim_);
  if (k == 0) return r;
  for (const auto& [e, c] : terms_) {
    IntVec v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = checked_mul(c[i], k);
    r.terms_.emplace(e, std::move(v));
  }
  return r;
}

MultiPoly MultiPoly::times(const MultiPoly& s) const {
  if (s.dim_ != 1) throw Error(ErrorCode::size_mismatch, "multiplier must be scalar-valued");
  MultiPoly r(dim_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : s.terms_) {
      Exponent e(std::max(e1.size(), e2.size()), 0);
      for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = (i < e1.size() ? e1[i] : 0) + (i < e2.size() ? e2[i] : 0);
      IntVec c(c1.size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked_mul(c1[i], c2[0]);
      r.add_term(e, c);
    }
  return r;
}

MultiPoly MultiPoly::shift_n(int k) const {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "shift variable must be some h_k, k >= 1");
  MultiPoly r(dim_);
  for (const auto& [e, c] : terms_) {
    const int a = e.empty() ? 0 : e[0];
    for (int i = 0; i <= a; ++i) {
      Exponent f = e;
      if (f.size() < static_cast<std::size_t>(k + 1)) f.resize(static_cast<std::size_t>(k + 1), 0);
      f[0] = a - i;
      f[static_cast<std::size_t>(k)] += i;
      const std::int64_t b = binomial(a, i);
      IntVec v(c.size());
      for (std::size_t t = 0; t < c.size(); ++t) v[t] = checked_mul(c[t], b);
      r.add_term(f, v);
    }
  }
  return r;
}

MultiPoly MultiPoly::n_coefficient(int power) const {
  MultiPoly r(dim_);
  for (const auto& [e, c] : terms_) {
    const int a = e.empty() ? 0 : e[0];
    if (a != power) continue;
    Exponent f = e;
    if (!f.empty()) f[0] = 0;
    r.add_term(f, c);
  }
  return r;
}

IntVec MultiPoly::coefficient(const Exponent& e0) const {
  Exponent e = e0;
  strip(e);
  auto it = terms_.find(e);
  return it == terms_.end() ? IntVec(dim_, 0) : it->second;
}

IntVec MultiPoly::evaluate_mod(const std::vector<std::int64_t>& values, int p) const {
  IntVec acc(dim_, 0);
  for (const auto& [e, c] : terms_) {
    std::int64_t m = 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::int64_t x = i < values.size() ? mod_p(values[i], p) : 0;
      for (int t = 0; t < e[i]; ++t) m = m * x % p;
    }
    for (std::size_t i = 0; i < dim_; ++i) acc[i] = (acc[i] + mod_p(c[i], p) * m) % p;
  }
  return acc;
}

MultiPoly MultiPoly::substitute_mod(const std::map<int, std::int64_t>& values, int p) const {
  MultiPoly r(dim_);
  for (const auto& [e, c] : terms_) {
    std::int64_t m = 1;
    Exponent f = e;
    for (std::size_t i = 0; i < f.size(); ++i) {
      auto it = values.find(static_cast<int>(i));
      if (it == values.end()) continue;
      for (int t = 0; t < f[i]; ++t) m = m * mod_p(it->second, p) % p;
      f[i] = 0;
    }
    IntVec v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = mod_p(c[i], p) * m % p;
    r.add_term(f, v);
  }
  MultiPoly reduced(dim_);
  for (const auto& [e, c] : r.terms_) {
    IntVec v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = mod_p(c[i], p);
    reduced.add_term(e, v);
  }
  return reduced;
}

MultiPoly MultiPoly::compact_h() const {
  std::vector<char> used(static_cast<std::size_t>(h_count() + 1), 0);
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i]) used[i] = 1;
  std::vector<int> slot(used.size(), 0);
  int next = 1;
  for (std::size_t i = 1; i < used.size(); ++i)
    if (used[i]) slot[i] = next++;
  MultiPoly r(dim_);
  for (const auto& [e, c] : terms_) {
    Exponent f(static_cast<std::size_t>(next), 0);
    if (!e.empty()) f[0] = e[0];
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i]) f[static_cast<std::size_t>(slot[i])] = e[i];
    r.add_term(f, c);
  }
  return r;
}

MultiPoly tilde(const MultiPoly& q) {
  MultiPoly r(q.dimension());
  for (const auto& [e, c] : q.terms())
    if (!e.empty() && e[0] > 0) r.add_term(e, c);
  return r;
}

namespace {

std::int64_t vec_gcd(const IntVec& c) {
  std::int64_t g = 0;
  for (auto v : c) g = std::gcd(g, v < 0 ? -v : v);
  return g;
}

// Sign chosen so the highest nonzero entry is positive.
std::int64_t normalizer(const IntVec& c) {
  const std::int64_t g = vec_gcd(c);
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    if (*it != 0) return *it < 0 ? -g : g;
  return 1;
}

std::string combo(const IntVec& prim, bool symbolic, bool& compound) {
  std::ostringstream os;
  if (!symbolic) {
    os << '(';
    for (std::size_t i = 0; i < prim.size(); ++i) os << (i ? "," : "") << prim[i];
    os << ')';
    compound = false;
    return os.str();
  }
  int nonzero = 0;
  bool first = true;
  auto emit = [&](std::size_t i) {
    const auto c = prim[i];
    if (c > 0 && !first) os << '+';
    if (c < 0) os << '-';
    const auto a = c < 0 ? -c : c;
    if (a != 1) os << a;
    os << 'v' << i + 1;
    first = false;
    ++nonzero;
  };
  for (std::size_t i = 0; i < prim.size(); ++i)
    if (prim[i] > 0) emit(i);
  for (std::size_t i = 0; i < prim.size(); ++i)
    if (prim[i] < 0) emit(i);
  compound = nonzero > 1 || (nonzero == 1 && std::any_of(prim.begin(), prim.end(), [](auto v) { return v != 1 && v != 0; }));
  return os.str();
}

std::string monomial_text(const MultiPoly::Exponent& e) {
  std::vector<std::string> parts;
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (!e[i]) continue;
    std::string s = "h" + std::to_string(i);
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
    parts.push_back(s);
  }
  if (!e.empty() && e[0]) parts.push_back(e[0] > 1 ? "n^" + std::to_string(e[0]) : "n");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
  return out;
}

// n-degree descending, then h_1 before h_2 and so on.
bool print_before(const MultiPoly::Exponent& a, const MultiPoly::Exponent& b) {
  const int an = a.empty() ? 0 : a[0], bn = b.empty() ? 0 : b[0];
  if (an != bn) return an > bn;
  const int ta = std::accumulate(a.begin(), a.end(), 0) - an, tb = std::accumulate(b.begin(), b.end(), 0) - bn;
  if (ta != tb) return ta > tb;
  const std::size_t len = std::max(a.size(), b.size());
  for (std::size_t i = 1; i < len; ++i) {
    const int x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
    if (x != y) return x > y;
  }
  return false;
}

}  // namespace

std::string format_vector(const IntVec& c, bool symbolic) {
  if (all_zero(c)) return "0";
  const std::int64_t k = normalizer(c);
  IntVec prim(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) prim[i] = c[i] / k;
  bool compound = false;
  std::string body = combo(prim, symbolic, compound);
  std::string lead = k == 1 ? "" : k == -1 ? "-" : std::to_string(k);
  if (lead.empty()) return body;
  return lead + (compound ? "(" + body + ")" : body);
}

std::string format_poly(const MultiPoly& q, bool symbolic) {
  if (q.is_zero()) return "0";
  std::vector<MultiPoly::Exponent> order;
  for (const auto& [e, c] : q.terms()) order.push_back(e);
  std::stable_sort(order.begin(), order.end(), print_before);

  // group terms sharing a direction up to scalar
  struct Group {
    IntVec prim;
    std::vector<std::pair<MultiPoly::Exponent, std::int64_t>> scalars;
  };
  std::vector<Group> groups;
  for (const auto& e : order) {
    const IntVec& c = q.terms().at(e);
    const std::int64_t k = normalizer(c);
    IntVec prim(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) prim[i] = c[i] / k;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.prim == prim; });
    if (it == groups.end()) {
      groups.push_back({prim, {}});
      it = groups.end() - 1;
    }
    it->scalars.emplace_back(e, k);
  }

  std::string out;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto& g = groups[gi];
    std::int64_t common = 0;
    for (const auto& [e, k] : g.scalars) common = std::gcd(common, k < 0 ? -k : k);
    if (g.scalars.front().second < 0) common = -common;
    bool compound = false;
    const std::string dir = combo(g.prim, symbolic, compound);
    const std::string dir_text = compound ? "(" + dir + ")" : dir;

    std::string scalar;
    if (g.scalars.size() == 1) {
      scalar = monomial_text(g.scalars[0].first);
    } else {
      std::string inner;
      for (std::size_t i = 0; i < g.scalars.size(); ++i) {
        const auto k = g.scalars[i].second / common;
        const std::string mono = monomial_text(g.scalars[i].first);
        if (i > 0) inner += k < 0 ? "-" : "+";
        else if (k < 0) inner += "-";
        const auto a = k < 0 ? -k : k;
        if (a != 1 || mono.empty()) inner += std::to_string(a);
        inner += mono;
      }
      scalar = "(" + inner + ")";
    }
    std::string lead = common == 1 ? "" : common == -1 ? "-" : std::to_string(common);
    std::string term = lead + scalar;
    if (!scalar.empty()) term += "*";
    term += dir_text;
    if (scalar.empty() && !lead.empty() && !compound) term = lead + dir;

    if (gi == 0) out = term;
    else if (term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out;
}

}  // namespace ulab
