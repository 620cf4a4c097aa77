#include "ulab/concat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace ulab {
namespace {

int inv_mod(int a, int p) {
  int r = 1, b = a, e = p - 2;
  while (e > 0) {
    if (e & 1) r = static_cast<int>(static_cast<std::int64_t>(r) * b % p);
    b = static_cast<int>(static_cast<std::int64_t>(b) * b % p);
    e >>= 1;
  }
  return r;
}

using SpanKey = std::vector<int>;

SpanKey key_of(const std::vector<FpPoint>& rref) {
  SpanKey k;
  for (const auto& r : rref) k.insert(k.end(), r.coords.begin(), r.coords.end());
  return k;
}

// Subgroups keyed by their reduced echelon basis.
class SpanCache {
 public:
  explicit SpanCache(FieldConfig cfg) : cfg_(std::move(cfg)) {}

  const SpanKey& key(const std::vector<FpPoint>& gens) {
    auto rref = rref_mod_p(cfg_, gens);
    SpanKey k = key_of(rref);
    auto it = groups_.find(k);
    if (it == groups_.end()) it = groups_.emplace(k, subgroup_span(cfg_, rref)).first;
    return it->first;
  }
  const Subgroup& group(const SpanKey& k) const { return groups_.at(k); }

 private:
  FieldConfig cfg_;
  std::map<SpanKey, Subgroup> groups_;
};

// E over all tuples in I^{2^s}, tuples encoded little-endian in base |I|.
template <typename Fn>
void for_each_tuple(std::size_t base, int len, Fn&& fn) {
  std::vector<std::size_t> t(static_cast<std::size_t>(len), 0);
  while (true) {
    fn(t);
    int pos = 0;
    while (pos < len && ++t[static_cast<std::size_t>(pos)] == base) t[static_cast<std::size_t>(pos++)] = 0;
    if (pos == len) return;
  }
}

std::vector<FpPoint> generators_of(const Subgroup& h) { return h.generators(); }

}  // namespace

void SubgroupFamily::validate() const {
  if (groups.empty()) throw Error(ErrorCode::invalid_argument, "empty subgroup family");
  const std::size_t s = groups.front().size();
  for (const auto& row : groups) {
    if (row.size() != s) throw Error(ErrorCode::size_mismatch, "family must use the same s for every index");
    for (const auto& h : row) require_same_field(h.cfg(), row.front().cfg());
  }
}

ConcatResult concat_deg1_check(const GroupFunction& f, const SubgroupFamily& fam) {
  fam.validate();
  if (fam.s() != 1) throw Error(ErrorCode::invalid_argument, "degree 1 concatenation needs s = 1");
  std::vector<Subgroup> hs;
  for (const auto& row : fam.groups) hs.push_back(row.front());
  SubgroupFamily empty;
  empty.groups.assign(hs.size(), {});
  return concat_main_check(f, empty, hs);
}

ConcatResult concat_main_check(const GroupFunction& f, const SubgroupFamily& ks, const std::vector<Subgroup>& hs) {
  if (ks.size() != hs.size() || hs.empty()) throw Error(ErrorCode::size_mismatch, "one extra subgroup per index");
  const int s = ks.s();
  const double n = static_cast<double>(hs.size());
  check_cost(n * n * static_cast<double>(f.size()) * std::pow(static_cast<double>(f.size()), 2 * s), "concatenation lemma");

  double avg = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    DirectionSpec d{hs[i]};
    d.insert(d.end(), ks.groups[i].begin(), ks.groups[i].end());
    avg += box_average(f, d);
  }
  avg /= n;
  const double power = std::ldexp(1.0, 2 * s + 1);

  double rhs = 0;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = 0; j < hs.size(); ++j) {
      DirectionSpec d = ks.groups[i];
      d.insert(d.end(), ks.groups[j].begin(), ks.groups[j].end());
      d.push_back(subgroup_sum(hs[i], hs[j]));
      rhs += box_average(f, d);
    }
  ConcatResult r;
  r.lhs = std::pow(avg, power);
  r.rhs = rhs / (n * n);
  r.ok = r.lhs <= r.rhs + kTolerance;
  return r;
}

std::vector<std::pair<int, int>> concat_pairs(int s, int j, ConcatPattern pattern) {
  if (j < 1 || j > s) throw Error(ErrorCode::invalid_argument, "direction index out of range");
  std::vector<std::pair<int, int>> out;
  const int n = 1 << s;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (pattern == ConcatPattern::prefix) {
        const int prefix = s - j;
        const int mask = (1 << prefix) - 1;
        if ((a & mask) != (b & mask)) continue;
        if (((a >> prefix) & 1) == ((b >> prefix) & 1)) continue;
      }
      out.emplace_back(a, b);
    }
  return out;
}

ConcatWalkResult concat_walk_check(const GroupFunction& f, const SubgroupFamily& fam, ConcatPattern pattern) {
  fam.validate();
  const int s = fam.s();
  if (s < 1 || s > 2) throw Error(ErrorCode::invalid_argument, "concatenation walk supports s = 1 or 2");
  ConcatWalkResult r;
  if (s == 1) {
    r.exponent = 2;
    r.ledger = {"degree 1 concatenation: delta^2"};
  } else {
    r.exponent = 2048;
    r.ledger = {"lemma with s=1 on H_i2: delta^8", "lemma with s=1 on H_{i0,1}, i1 and h fixed: delta^64",
                "lemma with s=2 on H_{i1,1}, i00, i01 and h fixed: delta^2048"};
  }
  std::vector<std::vector<std::pair<int, int>>> pairs;
  int groups = 0;
  for (int j = 1; j <= s; ++j) {
    pairs.push_back(concat_pairs(s, j, pattern));
    groups += static_cast<int>(pairs.back().size());
  }
  r.rhs_power = pattern == ConcatPattern::prefix ? (1 << groups) : 1;

  const std::size_t n = fam.size();
  const int len = 1 << s;
  check_cost(std::pow(static_cast<double>(n), len) * static_cast<double>(f.size()) *
                 std::pow(static_cast<double>(f.size()), groups - 1),
             "concatenation walk");

  for (const auto& row : fam.groups) r.delta += box_average(f, row);
  r.delta /= static_cast<double>(n);
  r.lhs = std::pow(r.delta, static_cast<double>(r.exponent));

  SpanCache spans(f.cfg());
  std::vector<std::vector<SpanKey>> base(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& h : fam.groups[i]) base[i].push_back(spans.key(generators_of(h)));
  std::map<std::vector<SpanKey>, double> norms;
  double total = 0;
  for_each_tuple(n, len, [&](const std::vector<std::size_t>& t) {
    std::vector<SpanKey> keys;
    for (int j = 0; j < s; ++j)
      for (auto [a, b] : pairs[static_cast<std::size_t>(j)]) {
        auto gens = spans.group(base[t[static_cast<std::size_t>(a)]][static_cast<std::size_t>(j)]).generators();
        const auto& other = spans.group(base[t[static_cast<std::size_t>(b)]][static_cast<std::size_t>(j)]).generators();
        gens.insert(gens.end(), other.begin(), other.end());
        keys.push_back(spans.key(gens));
      }
    std::sort(keys.begin(), keys.end());
    auto it = norms.find(keys);
    if (it == norms.end()) {
      DirectionSpec d;
      for (const auto& k : keys) d.push_back(spans.group(k));
      const double v = pattern == ConcatPattern::prefix ? box_average(f, d) : box_norm(f, d);
      it = norms.emplace(keys, v).first;
    }
    total += it->second;
  });
  r.rhs = total / std::pow(static_cast<double>(n), len);
  r.ok = r.lhs <= r.rhs + kTolerance;
  return r;
}

std::int64_t zero_set_count(const MultiPoly& g, int p) { return zero_set_report(g, p).count; }

ZeroSetReport zero_set_report(const MultiPoly& g, int p) {
  if (!is_prime(p)) throw Error(ErrorCode::invalid_argument, "p must be prime");
  if (g.dimension() != 1) throw Error(ErrorCode::size_mismatch, "zero sets need a scalar polynomial");
  for (const auto& [e, c] : g.terms())
    if (!e.empty() && e[0] != 0) throw Error(ErrorCode::invalid_argument, "zero sets are taken in the h variables only");
  const MultiPoly reduced = g.substitute_mod({}, p);
  bool constant = true;
  for (const auto& [e, c] : reduced.terms())
    if (std::any_of(e.begin(), e.end(), [](int x) { return x != 0; })) constant = false;
  if (constant) throw Error(ErrorCode::invalid_argument, "polynomial is constant mod p");

  ZeroSetReport r;
  r.variables = reduced.h_count();
  r.degree = reduced.total_degree();
  const double cells = std::pow(static_cast<double>(p), r.variables);
  check_cost(cells * static_cast<double>(reduced.terms().size()), "zero set enumeration");

  std::vector<std::int64_t> vals(static_cast<std::size_t>(r.variables + 1), 0);
  const std::size_t total = static_cast<std::size_t>(cells);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t t = k;
    for (int i = 1; i <= r.variables; ++i) {
      vals[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(t % static_cast<std::size_t>(p));
      t /= static_cast<std::size_t>(p);
    }
    if (reduced.evaluate_mod(vals, p)[0] == 0) ++r.count;
  }
  const double scale = std::pow(static_cast<double>(p), r.variables - 1);
  r.bound = static_cast<double>(r.variables) * r.degree * scale;
  r.measured_c = static_cast<double>(r.count) / scale;
  r.ok = static_cast<double>(r.count) <= r.bound;
  return r;
}

std::vector<MultiPoly::Exponent> monomials_up_to(int d, int s_prime) {
  if (d < 0 || s_prime < 0) throw Error(ErrorCode::invalid_argument, "negative degree or variable count");
  std::vector<MultiPoly::Exponent> out;
  for (int deg = d; deg >= 0; --deg) {
    std::vector<MultiPoly::Exponent> level;
    MultiPoly::Exponent u(static_cast<std::size_t>(s_prime), 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == s_prime - 1 || s_prime == 0) {
        if (s_prime > 0) u[static_cast<std::size_t>(i)] = left;
        if (s_prime > 0 || left == 0) level.push_back(u);
        return;
      }
      for (int e = left; e >= 0; --e) {
        u[static_cast<std::size_t>(i)] = e;
        rec(i + 1, left - e);
      }
    };
    rec(0, deg);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

MultiPoly exponent_matrix_determinant(int d, int s_prime) {
  const auto mons = monomials_up_to(d, s_prime);
  const std::size_t n = mons.size();
  if (n > 8) throw Error(ErrorCode::cost_cap, "determinant expansion limited to 8 x 8");
  auto entry = [&](std::size_t row, std::size_t col) {
    MultiPoly::Exponent e(row * static_cast<std::size_t>(s_prime) + static_cast<std::size_t>(s_prime) + 1, 0);
    for (int t = 0; t < s_prime; ++t) e[row * static_cast<std::size_t>(s_prime) + static_cast<std::size_t>(t) + 1] = mons[col][static_cast<std::size_t>(t)];
    return e;
  };
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  MultiPoly det(1);
  do {
    int inversions = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (perm[a] > perm[b]) ++inversions;
    MultiPoly::Exponent e;
    for (std::size_t row = 0; row < n; ++row) {
      const auto term = entry(row, perm[row]);
      if (e.size() < term.size()) e.resize(term.size(), 0);
      for (std::size_t t = 0; t < term.size(); ++t) e[t] += term[t];
    }
    det.add_term(e, {inversions % 2 ? -1 : 1});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

std::vector<FpPoint> rref_mod_p(const FieldConfig& cfg, std::vector<FpPoint> rows) {
  const int p = cfg.prime();
  const std::size_t dim = static_cast<std::size_t>(cfg.dimension());
  std::size_t rank = 0;
  for (std::size_t col = 0; col < dim && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv].coords[col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    const int inv = inv_mod(rows[rank].coords[col], p);
    for (auto& x : rows[rank].coords) x = static_cast<int>(static_cast<std::int64_t>(x) * inv % p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r].coords[col] == 0) continue;
      const int factor = rows[r].coords[col];
      for (std::size_t t = 0; t < dim; ++t)
        rows[r].coords[t] = cfg.mod(rows[r].coords[t] - static_cast<std::int64_t>(factor) * rows[rank].coords[t]);
    }
    ++rank;
  }
  rows.resize(rank);
  return rows;
}

PolyConcatResult polynomial_concat_check(const GroupFunction& f, const std::vector<MultiPoly>& dirs) {
  const FieldConfig& cfg = f.cfg();
  const int p = cfg.prime();
  const int s = static_cast<int>(dirs.size());
  if (s < 1 || s > 2) throw Error(ErrorCode::invalid_argument, "polynomial concatenation supports s = 1 or 2");
  int sp = 0;
  std::vector<std::vector<FpPoint>> coeffs(dirs.size());
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    if (dirs[j].dimension() != static_cast<std::size_t>(cfg.dimension()))
      throw Error(ErrorCode::size_mismatch, "direction dimension differs from the field");
    for (const auto& [e, c] : dirs[j].terms()) {
      if (!e.empty() && e[0] != 0) throw Error(ErrorCode::invalid_argument, "directions must not depend on n");
      FpPoint v = cfg.reduce(c);
      if (!v.is_zero()) coeffs[j].push_back(v);
    }
    sp = std::max(sp, dirs[j].h_count());
    if (s == 2 && coeffs[j].size() > 2)
      throw Error(ErrorCode::invalid_argument, "for s = 2 each direction may have at most two monomials");
  }

  PolyConcatResult r;
  SpanCache spans(cfg);
  std::vector<SpanKey> gkeys;
  for (const auto& c : coeffs) {
    gkeys.push_back(spans.key(c));
    r.principal.push_back(spans.group(gkeys.back()));
  }

  // c_j(h) mod p for every h in F_p^{s'}
  const std::size_t nh = static_cast<std::size_t>(std::llround(std::pow(p, sp)));
  std::vector<std::vector<SpanKey>> lines(nh);
  std::vector<std::int64_t> vals(static_cast<std::size_t>(sp + 1), 0);
  for (std::size_t k = 0; k < nh; ++k) {
    std::size_t t = k;
    for (int i = 1; i <= sp; ++i) {
      vals[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(t % static_cast<std::size_t>(p));
      t /= static_cast<std::size_t>(p);
    }
    for (const auto& c : dirs) {
      const FpPoint x = cfg.reduce(c.evaluate_mod(vals, p));
      lines[k].push_back(spans.key(x.is_zero() ? std::vector<FpPoint>{} : std::vector<FpPoint>{x}));
    }
  }

  double base = 0;
  for (const auto& ks : lines) {
    DirectionSpec d;
    for (const auto& k : ks) d.push_back(spans.group(k));
    base += box_average(f, d);
  }
  base /= static_cast<double>(nh);

  std::vector<std::vector<std::pair<int, int>>> pairs;
  int len = 0;
  if (s == 1) {
    const std::size_t m = std::max<std::size_t>(coeffs[0].size(), 1);
    while ((std::size_t{1} << r.k) < m) ++r.k;
    r.exponent = 1L << r.k;
    len = 1 << r.k;
  } else {
    r.k = 1;
    r.exponent = 2048;
    len = 4;
    for (int j = 1; j <= 2; ++j) pairs.push_back(concat_pairs(2, j, ConcatPattern::prefix));
  }
  r.lhs = std::pow(base, static_cast<double>(r.exponent));
  check_cost(std::pow(static_cast<double>(nh), len) * static_cast<double>(len) * cfg.dimension(), "polynomial concatenation");

  std::map<std::vector<SpanKey>, double> cache;
  std::size_t bad = 0;
  double total = 0;
  for_each_tuple(nh, len, [&](const std::vector<std::size_t>& t) {
    std::vector<SpanKey> keys;
    bool good = true;
    if (s == 1) {
      std::vector<FpPoint> gens;
      for (auto i : t) {
        const auto& g = spans.group(lines[i][0]).generators();
        gens.insert(gens.end(), g.begin(), g.end());
      }
      keys.push_back(spans.key(gens));
      good = keys.back() == gkeys[0];
    } else {
      for (std::size_t j = 0; j < 2; ++j)
        for (auto [a, b] : pairs[j]) {
          auto gens = spans.group(lines[t[static_cast<std::size_t>(a)]][j]).generators();
          const auto& other = spans.group(lines[t[static_cast<std::size_t>(b)]][j]).generators();
          gens.insert(gens.end(), other.begin(), other.end());
          keys.push_back(spans.key(gens));
          good = good && keys.back() == gkeys[j];
        }
      std::sort(keys.begin(), keys.end());
    }
    if (!good) ++bad;
    auto it = cache.find(keys);
    if (it == cache.end()) {
      DirectionSpec d;
      for (const auto& k : keys) d.push_back(spans.group(k));
      it = cache.emplace(keys, box_average(f, d)).first;
    }
    total += it->second;
  });
  const double tuples = std::pow(static_cast<double>(nh), len);
  r.middle = total / tuples;
  r.exception_fraction = static_cast<double>(bad) / tuples;
  r.measured_c = r.exception_fraction * p;

  DirectionSpec principal;
  if (s == 1) {
    principal.push_back(r.principal[0]);
  } else {
    principal = {r.principal[0], r.principal[0], r.principal[1], r.principal[1], r.principal[1], r.principal[1]};
  }
  r.rhs = box_average(f, principal);
  r.ok = r.lhs <= r.middle + kTolerance && r.middle <= r.rhs + r.exception_fraction + kTolerance;
  return r;
}

}  // namespace ulab
