#include "ulab/counting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace ulab {
namespace {

void require_functions(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs) {
  if (fs.size() != static_cast<std::size_t>(pc.length() + 1))
    throw Error(ErrorCode::size_mismatch, "expected l+1 functions");
  for (const auto& f : fs) require_same_field(pc.cfg(), f.cfg());
}

void require_slot(const ProgressionConfig& pc, int m) {
  if (m < 0 || m > pc.length()) throw Error(ErrorCode::invalid_argument, "function index out of range");
}

std::size_t pow_size(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Decodes a mixed-radix index into digits base p.
void digits(std::size_t k, int p, std::vector<int>& out) {
  for (auto& d : out) {
    d = static_cast<int>(k % static_cast<std::size_t>(p));
    k /= static_cast<std::size_t>(p);
  }
}

}  // namespace

IntPoly trim(IntPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

int degree(const IntPoly& p) { return static_cast<int>(trim(p).size()) - 1; }

int rational_rank(std::vector<std::vector<std::int64_t>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = std::max_element(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.size() < b.size(); })->size();
  std::vector<std::vector<__int128>> m(rows.size(), std::vector<__int128>(cols, 0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m[i][j] = rows[i][j];
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[static_cast<std::size_t>(rank)]);
    const auto& pr = m[static_cast<std::size_t>(rank)];
    for (std::size_t i = static_cast<std::size_t>(rank) + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      const __int128 a = pr[c], b = m[i][c];
      __int128 g = 0;
      for (std::size_t j = c; j < cols; ++j) {
        m[i][j] = m[i][j] * a - pr[j] * b;
        __int128 v = m[i][j] < 0 ? -m[i][j] : m[i][j];
        while (v) std::swap(g, v), v %= g;  // gcd(g, v)
      }
      if (g > 1)
        for (std::size_t j = c; j < cols; ++j) m[i][j] /= g;
    }
    ++rank;
  }
  return rank;
}

bool linearly_independent(const std::vector<IntPoly>& polys) {
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& p : polys) rows.push_back(trim(p));
  return rational_rank(rows) == static_cast<int>(polys.size());
}

bool pairwise_independent(const std::vector<IntPoly>& polys) {
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = i + 1; j < polys.size(); ++j)
      if (!linearly_independent({polys[i], polys[j]})) return false;
  return true;
}

ProgressionConfig::ProgressionConfig(FieldConfig cfg, std::vector<IntVec> vectors, std::vector<IntPoly> polys,
                                     std::vector<int> eta, bool theorem_mode)
    : cfg_(std::move(cfg)), vectors_(std::move(vectors)), eta_(std::move(eta)), theorem_mode_(theorem_mode) {
  const int l = static_cast<int>(polys.size());
  if (l < 1) throw Error(ErrorCode::invalid_argument, "progression needs at least one polynomial");
  if (static_cast<int>(vectors_.size()) != l) throw Error(ErrorCode::size_mismatch, "need one vector per polynomial");
  if (eta_.empty()) {
    eta_.resize(static_cast<std::size_t>(l));
    std::iota(eta_.begin(), eta_.end(), 1);
  }
  if (static_cast<int>(eta_.size()) != l) throw Error(ErrorCode::size_mismatch, "eta must have length l");
  for (int e : eta_)
    if (e < 1 || e > l) throw Error(ErrorCode::invalid_argument, "eta entries must lie in [1, l]");
  for (const auto& v : vectors_) {
    if (static_cast<int>(v.size()) != cfg_.dimension()) throw Error(ErrorCode::size_mismatch, "vector has wrong dimension");
    if (std::all_of(v.begin(), v.end(), [](auto c) { return c == 0; }))
      throw Error(ErrorCode::zero_direction, "zero direction");
  }
  for (auto& p : polys) {
    p = trim(p);
    if (p.empty()) throw Error(ErrorCode::invalid_argument, "zero polynomial in progression");
    if (theorem_mode_ && p[0] != 0) throw Error(ErrorCode::invalid_argument, "theorem mode requires zero constant terms");
    degree_ = std::max(degree_, static_cast<int>(p.size()) - 1);
  }
  polys_ = std::move(polys);

  shifts_.resize(static_cast<std::size_t>(l + 1));
  for (int j = 0; j <= l; ++j) {
    const IntVecPoly q = offset(j);
    if (j > 0 && q.vanishes_mod(cfg_.prime())) {
      std::ostringstream os;
      os << "v_" << eta_[static_cast<std::size_t>(j - 1)] << " p_" << j << " is nonzero over Z but vanishes mod "
         << cfg_.prime();
      warn(os.str());
    }
    auto& s = shifts_[static_cast<std::size_t>(j)];
    for (int n = 0; n < cfg_.prime(); ++n) s.push_back(cfg_.index(eval_vec_poly(q, n, cfg_)));
  }
}

IntVec ProgressionConfig::vector_for(int j) const {
  if (j == 0) return IntVec(static_cast<std::size_t>(cfg_.dimension()), 0);
  return vectors_.at(static_cast<std::size_t>(eta_.at(static_cast<std::size_t>(j - 1)) - 1));
}

IntPoly ProgressionConfig::poly(int j) const {
  if (j == 0) return {};
  return polys_.at(static_cast<std::size_t>(j - 1));
}

IntVecPoly ProgressionConfig::offset(int j) const {
  if (j == 0) return IntVecPoly(static_cast<std::size_t>(cfg_.dimension()), {});
  return IntVecPoly::scaled(vector_for(j), poly(j));
}

ProgressionConfig ProgressionConfig::with_field(const FieldConfig& cfg) const {
  return ProgressionConfig(cfg, vectors_, polys_, eta_, theorem_mode_);
}

Complex counting_operator(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs) {
  require_functions(pc, fs);
  const auto& cfg = pc.cfg();
  const int p = cfg.prime();
  const std::size_t n_pts = cfg.order();
  check_cost(static_cast<double>(n_pts) * p * (pc.length() + 1), "counting operator");
  Complex total = 0;
  for (int n = 0; n < p; ++n) {
    Complex acc = 0;
    for (std::size_t x = 0; x < n_pts; ++x) {
      Complex prod = fs[0][static_cast<Index>(x)];
      for (int j = 1; j <= pc.length() && prod != Complex(0); ++j)
        prod *= fs[static_cast<std::size_t>(j)][cfg.add(static_cast<Index>(x), pc.shifts(j)[static_cast<std::size_t>(n)])];
      acc += prod;
    }
    total += acc;
  }
  return total / (static_cast<double>(n_pts) * p);
}

Complex structured_count(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs) {
  require_functions(pc, fs);
  const auto& cfg = pc.cfg();
  std::vector<Complex> prod(fs[0].values());
  for (int j = 1; j <= pc.length(); ++j) {
    const Subgroup line = cyclic(cfg, cfg.reduce(pc.vector_for(j)));
    const GroupFunction e = conditional_expectation(fs[static_cast<std::size_t>(j)], line);
    for (std::size_t x = 0; x < prod.size(); ++x) prod[x] *= e[static_cast<Index>(x)];
  }
  Complex s = 0;
  for (const auto& z : prod) s += z;
  return s / static_cast<double>(prod.size());
}

double tcount_gap(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs) {
  if (!pc.theorem_mode()) throw Error(ErrorCode::invalid_argument, "tcount_gap requires theorem mode");
  if (!linearly_independent(pc.polys())) throw Error(ErrorCode::not_independent, "polynomials not linearly independent");
  return std::abs(counting_operator(pc, fs) - structured_count(pc, fs));
}

GroupFunction tilde_dual(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs, int m) {
  require_functions(pc, fs);
  require_slot(pc, m);
  const auto& cfg = pc.cfg();
  const int p = cfg.prime();
  const std::size_t n_pts = cfg.order();
  check_cost(static_cast<double>(n_pts) * p * (pc.length() + 1), "tilde dual");
  double sup = 1;
  for (int j = 0; j <= pc.length(); ++j)
    if (j != m) sup *= fs[static_cast<std::size_t>(j)].sup_bound();
  std::vector<Complex> out(n_pts, 0.0);
  std::vector<Index> rel(static_cast<std::size_t>(pc.length() + 1));
  for (int n = 0; n < p; ++n) {
    const Index sm = pc.shifts(m)[static_cast<std::size_t>(n)];
    for (int j = 0; j <= pc.length(); ++j) rel[static_cast<std::size_t>(j)] = cfg.sub(pc.shifts(j)[static_cast<std::size_t>(n)], sm);
    for (std::size_t x = 0; x < n_pts; ++x) {
      Complex prod = 1;
      for (int j = 0; j <= pc.length(); ++j) {
        if (j == m) continue;
        prod *= std::conj(fs[static_cast<std::size_t>(j)][cfg.add(static_cast<Index>(x), rel[static_cast<std::size_t>(j)])]);
      }
      out[x] += prod;
    }
  }
  for (auto& z : out) z /= static_cast<double>(p);
  return GroupFunction(cfg, std::move(out), sup);
}

DualReplacementResult dual_replacement_check(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs, int m,
                                             const GroupFunction& g, int s) {
  const GroupFunction t = tilde_dual(pc, fs, m);
  auto with_slot = [&](const GroupFunction& h) {
    std::vector<GroupFunction> copy = fs;
    copy[static_cast<std::size_t>(m)] = h;
    return counting_operator(pc, copy);
  };
  DualReplacementResult r;
  const Complex lambda = counting_operator(pc, fs);
  const double gap0 = std::abs(lambda - multiply(fs[static_cast<std::size_t>(m)], t.conj()).mean());
  const double gap1 = std::abs(with_slot(g.conj()) - std::conj(multiply(t, g).mean()));
  r.identity_gap = std::max(gap0, gap1);
  r.ok = r.identity_gap <= kTolerance;

  const Complex part_i = with_slot(t);
  r.tilde_part = {part_i.real(), std::norm(lambda), part_i.real() >= std::norm(lambda) - kTolerance &&
                                                        std::abs(part_i.imag()) <= kTolerance};
  r.ok = r.ok && r.tilde_part.ok;

  const FpPoint vm = pc.cfg().reduce(pc.vector_for(m));
  if (m > 0 && !vm.is_zero()) {
    const Subgroup line = cyclic(pc.cfg(), vm);
    const Complex part_ii = with_slot(conditional_expectation(t, line));
    const double d1 = gowers_average(t, vm, 1);
    r.u1_part = BoundCheck{part_ii.real(), d1, part_ii.real() >= d1 - kTolerance && std::abs(part_ii.imag()) <= kTolerance};
    const Complex part_iii = with_slot(dual_function(t, vm, s).conj());
    const double ds = gowers_average(t, vm, s);
    r.us_part = BoundCheck{part_iii.real(), ds, part_iii.real() >= ds - kTolerance && std::abs(part_iii.imag()) <= kTolerance};
    r.ok = r.ok && r.u1_part->ok && r.us_part->ok;
  }
  return r;
}

std::int64_t progression_count(const GroupFunction& indicator, const ProgressionConfig& pc) {
  require_same_field(pc.cfg(), indicator.cfg());
  const auto& cfg = pc.cfg();
  std::vector<char> in(cfg.order());
  for (std::size_t x = 0; x < in.size(); ++x) {
    const Complex z = indicator[static_cast<Index>(x)];
    if (z != Complex(0) && z != Complex(1)) throw Error(ErrorCode::invalid_argument, "set must be {0,1}-valued");
    in[x] = z == Complex(1);
  }
  std::int64_t count = 0;
  for (int n = 1; n < cfg.prime(); ++n) {
    for (std::size_t x = 0; x < in.size(); ++x) {
      if (!in[x]) continue;
      bool all = true;
      for (int j = 1; j <= pc.length() && all; ++j) all = in[cfg.add(static_cast<Index>(x), pc.shifts(j)[static_cast<std::size_t>(n)])];
      count += all;
    }
  }
  return count;
}

WeilResult weil_gap(const ProgressionConfig& pc, const std::vector<std::int64_t>& phis) {
  if (static_cast<int>(phis.size()) != pc.length()) throw Error(ErrorCode::size_mismatch, "need one phase per polynomial");
  const auto& cfg = pc.cfg();
  const int p = cfg.prime();
  if (pc.degree() >= p) throw Error(ErrorCode::weil_hypothesis, "Weil hypothesis violated: degree >= p");
  std::vector<std::int64_t> combined(static_cast<std::size_t>(pc.degree() + 1), 0);
  bool all_zero = true;
  for (int j = 0; j < pc.length(); ++j) {
    const std::int64_t phi = cfg.mod(phis[static_cast<std::size_t>(j)]);
    all_zero = all_zero && phi == 0;
    const auto& q = pc.polys()[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < q.size(); ++i) combined[i] = (combined[i] + phi * cfg.mod(q[i])) % p;
  }
  Complex sum = 0;
  for (int n = 0; n < p; ++n) {
    std::int64_t val = 0;
    for (auto it = combined.rbegin(); it != combined.rend(); ++it) val = (val * n + *it) % p;
    sum += cfg.ep(val);
  }
  sum /= static_cast<double>(p);
  WeilResult r;
  r.value = std::abs(sum - (all_zero ? 1.0 : 0.0));
  r.bound = (pc.degree() - 1) / std::sqrt(static_cast<double>(p));
  r.applicable = std::any_of(combined.begin() + 1, combined.end(), [](auto c) { return c != 0; });
  r.ok = !r.applicable || r.value <= r.bound + kTolerance;
  return r;
}

SpaceTimeFunction::SpaceTimeFunction(FieldConfig cfg, std::vector<Complex> values)
    : cfg_(std::move(cfg)), values_(std::move(values)) {
  if (values_.size() != cfg_.order() * static_cast<std::size_t>(cfg_.prime()))
    throw Error(ErrorCode::size_mismatch, "space-time table must have p^(D+1) entries");
  for (const auto& z : values_)
    if (std::abs(z) > 1 + 1e-12) throw Error(ErrorCode::invalid_argument, "space-time function must be 1-bounded");
}

SpaceTimeFunction SpaceTimeFunction::random(const FieldConfig& cfg, std::uint64_t seed) {
  const FieldConfig big(cfg.prime(), cfg.dimension() + 1);
  auto f = random_one_bounded(big, seed, UnitPhase{});
  return SpaceTimeFunction(cfg, f.values());
}

SpaceTimeFunction SpaceTimeFunction::constant(const FieldConfig& cfg, Complex c) {
  return SpaceTimeFunction(cfg, std::vector<Complex>(cfg.order() * static_cast<std::size_t>(cfg.prime()), c));
}

int default_removing_duals_s(const std::vector<std::pair<DualSpec, IntVecPoly>>& duals) {
  const int count = static_cast<int>(duals.size());
  int d = 0, phase = 1;
  for (const auto& [spec, q] : duals) {
    d = std::max({d, spec.s, q.degree()});
    phase = std::max(phase, (spec.s - 1) * std::max(q.degree(), 0) + 1);
  }
  return std::max({1, count * (d + 1), phase});
}

InequalityResult removing_duals_check(const SpaceTimeFunction& a,
                                      const std::vector<std::pair<DualSpec, IntVecPoly>>& duals, std::optional<int> s_opt) {
  const auto& cfg = a.cfg();
  const int p = cfg.prime();
  const std::size_t n_pts = cfg.order();
  const int s = s_opt.value_or(default_removing_duals_s(duals));
  if (s < 1) throw Error(ErrorCode::invalid_argument, "s must be positive");
  check_cost(std::pow(static_cast<double>(p), s + 1) * static_cast<double>(n_pts) * 2, "removing duals");

  std::vector<Complex> twist(n_pts * static_cast<std::size_t>(p), 1.0);
  for (const auto& [spec, q] : duals) {
    require_same_field(cfg, spec.base.cfg());
    const GroupFunction dual = spec.realize();
    for (int n = 0; n < p; ++n) {
      const Index off = cfg.index(eval_vec_poly(q, n, cfg));
      for (std::size_t x = 0; x < n_pts; ++x) twist[x + n * n_pts] *= dual[cfg.add(static_cast<Index>(x), off)];
    }
  }
  Complex lhs = 0;
  for (std::size_t i = 0; i < twist.size(); ++i) lhs += a.values()[i] * twist[i];
  lhs /= static_cast<double>(twist.size());

  // depth-first over h, one differenced table per level
  std::vector<std::vector<Complex>> level(static_cast<std::size_t>(s + 1));
  level[0] = a.values();
  double rhs = 0;
  auto rec = [&](auto&& self, int k) -> void {
    if (k == s) {
      Complex m = 0;
      for (const auto& z : level[static_cast<std::size_t>(s)]) m += z;
      rhs += std::abs(m / static_cast<double>(n_pts * static_cast<std::size_t>(p)));
      return;
    }
    const auto& prev = level[static_cast<std::size_t>(k)];
    auto& next = level[static_cast<std::size_t>(k + 1)];
    next.resize(prev.size());
    for (int h = 0; h < p; ++h) {
      for (int n = 0; n < p; ++n) {
        const std::size_t row = static_cast<std::size_t>(n) * n_pts;
        const std::size_t shifted = static_cast<std::size_t>((n + h) % p) * n_pts;
        for (std::size_t x = 0; x < n_pts; ++x) next[row + x] = prev[row + x] * std::conj(prev[shifted + x]);
      }
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  InequalityResult r;
  r.lhs = std::pow(std::abs(lhs), std::ldexp(1.0, s));
  r.rhs = rhs / std::pow(static_cast<double>(p), s);
  r.ok = r.lhs <= r.rhs + kTolerance;
  return r;
}

InterchangeResult dual_difference_interchange_check(const ProgressionConfig& pc, const std::vector<GroupFunction>& fs,
                                                     int m, const std::vector<FpPoint>& betas,
                                                     const std::vector<GroupFunction>& us) {
  require_functions(pc, fs);
  require_slot(pc, m);
  const auto& cfg = pc.cfg();
  const int p = cfg.prime();
  const int s = static_cast<int>(betas.size());
  const std::size_t n_pts = cfg.order();
  const std::size_t hs = pow_size(static_cast<std::size_t>(p), s);
  const std::size_t corners = std::size_t{1} << s;
  const int l = pc.length();
  const double estimate = static_cast<double>(hs) * static_cast<double>(hs) * static_cast<double>(n_pts) *
                          (static_cast<double>(corners) * (l + 1) + p * (l + 1));
  if (s < 1 || s > 3) {
    std::ostringstream os;
    os << "dual-difference interchange supports 1 <= s <= 3 (estimated cost " << estimate << ")";
    throw Error(ErrorCode::cost_cap, os.str());
  }
  check_cost(estimate, "dual-difference interchange");
  if (us.size() != hs) throw Error(ErrorCode::size_mismatch, "need one u_h per h in F_p^s");
  std::vector<Index> beta;
  for (const auto& b : betas) beta.push_back(cfg.index(b));

  // combination index of sum_i k_i beta_i
  std::vector<int> dig(static_cast<std::size_t>(s));
  auto combo = [&](const std::vector<int>& k) {
    Index r = 0;
    for (int i = 0; i < s; ++i) r = cfg.add(r, cfg.scale(beta[static_cast<std::size_t>(i)], k[static_cast<std::size_t>(i)]));
    return r;
  };
  auto cube = [&](const GroupFunction& f, const std::vector<int>& k, std::vector<Complex>& out) {
    std::vector<Index> off(corners, 0);
    std::vector<int> part(static_cast<std::size_t>(s));
    for (std::size_t e = 0; e < corners; ++e) {
      for (int i = 0; i < s; ++i) part[static_cast<std::size_t>(i)] = (e >> i & 1) ? k[static_cast<std::size_t>(i)] : 0;
      off[e] = combo(part);
    }
    out.assign(n_pts, 1.0);
    for (std::size_t x = 0; x < n_pts; ++x)
      for (std::size_t e = 0; e < corners; ++e) {
        const Complex z = f[cfg.add(static_cast<Index>(x), off[e])];
        out[x] *= (std::popcount(e) & 1) ? std::conj(z) : z;
      }
  };

  InterchangeResult r;
  const GroupFunction plain = tilde_dual(pc, fs, m).conj();
  std::vector<Complex> tab;
  Complex premise = 0;
  for (std::size_t h = 0; h < hs; ++h) {
    digits(h, p, dig);
    cube(plain, dig, tab);
    Complex acc = 0;
    for (std::size_t x = 0; x < n_pts; ++x) acc += tab[x] * us[h][static_cast<Index>(x)];
    premise += acc / static_cast<double>(n_pts);
  }
  r.premise = premise / static_cast<double>(hs);

  std::vector<int> hd(static_cast<std::size_t>(s)), hpd(static_cast<std::size_t>(s)), kd(static_cast<std::size_t>(s));
  std::vector<std::vector<Complex>> diffs(static_cast<std::size_t>(l + 1));
  std::vector<Complex> u(n_pts);
  Complex conclusion = 0;
  for (std::size_t h = 0; h < hs; ++h) {
    digits(h, p, hd);
    for (std::size_t hp = 0; hp < hs; ++hp) {
      digits(hp, p, hpd);
      for (int i = 0; i < s; ++i) kd[static_cast<std::size_t>(i)] = (hd[static_cast<std::size_t>(i)] - hpd[static_cast<std::size_t>(i)] + p) % p;
      for (int j = 0; j <= l; ++j)
        if (j != m) cube(fs[static_cast<std::size_t>(j)], kd, diffs[static_cast<std::size_t>(j)]);
      // u_{h,h'}(y) = prod_eps C^{|eps|} u_{h^eps}(y - h'.beta)
      const Index back = cfg.neg(combo(hpd));
      std::fill(u.begin(), u.end(), Complex(1));
      for (std::size_t e = 0; e < corners; ++e) {
        std::size_t idx = 0, mul = 1;
        for (int i = 0; i < s; ++i) {
          idx += static_cast<std::size_t>((e >> i & 1) ? hpd[static_cast<std::size_t>(i)] : hd[static_cast<std::size_t>(i)]) * mul;
          mul *= static_cast<std::size_t>(p);
        }
        const bool odd = std::popcount(e) & 1;
        for (std::size_t y = 0; y < n_pts; ++y) {
          const Complex z = us[idx][cfg.add(static_cast<Index>(y), back)];
          u[y] *= odd ? std::conj(z) : z;
        }
      }
      Complex acc = 0;
      for (int n = 0; n < p; ++n) {
        for (std::size_t x = 0; x < n_pts; ++x) {
          Complex prod = u[cfg.add(static_cast<Index>(x), pc.shifts(m)[static_cast<std::size_t>(n)])];
          for (int j = 0; j <= l; ++j) {
            if (j == m) continue;
            prod *= diffs[static_cast<std::size_t>(j)][cfg.add(static_cast<Index>(x), pc.shifts(j)[static_cast<std::size_t>(n)])];
          }
          acc += prod;
        }
      }
      conclusion += acc;
    }
  }
  conclusion /= static_cast<double>(hs) * static_cast<double>(hs) * static_cast<double>(n_pts) * p;
  r.conclusion = conclusion.real();
  r.ok = std::abs(conclusion.imag()) <= kTolerance &&
         r.conclusion >= std::pow(std::abs(r.premise), std::ldexp(1.0, s)) - kTolerance;
  return r;
}

InequalityResult low_complexity_check(const GroupFunction& f, const FpPoint& v, int s,
                                      const std::vector<std::vector<GroupFunction>>& gs) {
  if (v.is_zero()) throw Error(ErrorCode::zero_direction, "zero direction");
  const auto& cfg = f.cfg();
  const int p = cfg.prime();
  const std::size_t n_pts = cfg.order();
  if (s < 1 || static_cast<int>(gs.size()) != s) throw Error(ErrorCode::size_mismatch, "need s families g_j");
  const std::size_t sub = pow_size(static_cast<std::size_t>(p), s - 1);
  for (const auto& fam : gs)
    if (fam.size() != sub) throw Error(ErrorCode::size_mismatch, "each g_j is indexed by F_p^(s-1)");
  const std::size_t hs = sub * static_cast<std::size_t>(p);
  const std::size_t corners = std::size_t{1} << s;
  check_cost(static_cast<double>(hs) * static_cast<double>(n_pts) * static_cast<double>(corners + s), "low complexity");

  const Index vi = cfg.index(v);
  std::vector<int> h(static_cast<std::size_t>(s));
  std::vector<Index> off(corners);
  Complex total = 0;
  for (std::size_t hi = 0; hi < hs; ++hi) {
    digits(hi, p, h);
    for (std::size_t e = 0; e < corners; ++e) {
      int k = 0;
      for (int i = 0; i < s; ++i)
        if (e >> i & 1) k += h[static_cast<std::size_t>(i)];
      off[e] = cfg.scale(vi, k);
    }
    std::vector<std::size_t> gidx(static_cast<std::size_t>(s));
    for (int j = 0; j < s; ++j) {
      std::size_t idx = 0, mul = 1;
      for (int i = 0; i < s; ++i) {
        if (i == j) continue;
        idx += static_cast<std::size_t>(h[static_cast<std::size_t>(i)]) * mul;
        mul *= static_cast<std::size_t>(p);
      }
      gidx[static_cast<std::size_t>(j)] = idx;
    }
    Complex acc = 0;
    for (std::size_t x = 0; x < n_pts; ++x) {
      Complex prod = 1;
      for (std::size_t e = 0; e < corners; ++e) {
        const Complex z = f[cfg.add(static_cast<Index>(x), off[e])];
        prod *= (std::popcount(e) & 1) ? std::conj(z) : z;
      }
      for (int j = 0; j < s; ++j) prod *= gs[static_cast<std::size_t>(j)][gidx[static_cast<std::size_t>(j)]][static_cast<Index>(x)];
      acc += prod;
    }
    total += acc;
  }
  InequalityResult r;
  r.lhs = std::abs(total) / (static_cast<double>(hs) * static_cast<double>(n_pts));
  r.rhs = gowers_norm(f, v, s);
  r.ok = r.lhs <= r.rhs + kTolerance;
  return r;
}

}  // namespace ulab
