#include "ulab/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace ulab {
namespace {

void require_nonzero(const FpPoint& v) {
  if (v.is_zero()) throw Error(ErrorCode::zero_direction, "zero direction");
}

void require_dirs(const GroupFunction& f, const DirectionSpec& dirs) {
  if (dirs.empty()) throw Error(ErrorCode::invalid_argument, "direction list is empty");
  for (const auto& h : dirs) require_same_field(f.cfg(), h.cfg());
}

double product_of_sizes(const DirectionSpec& dirs, std::size_t skip_last) {
  double c = 1;
  for (std::size_t i = 0; i + skip_last < dirs.size(); ++i) c *= static_cast<double>(dirs[i].size());
  return c;
}

// |E(g|H)|^2 averaged over x; equals E_x E_h g(x) conj g(x+h).
double last_level(const GroupFunction& g, const Subgroup& h) {
  const std::size_t m = h.size();
  const auto& members = h.coset_members();
  double total = 0;
  for (std::size_t c = 0; c < h.coset_count(); ++c) {
    Complex s = 0;
    for (std::size_t i = 0; i < m; ++i) s += g[members[c * m + i]];
    s /= static_cast<double>(m);
    total += std::norm(s) * static_cast<double>(m);
  }
  return total / static_cast<double>(g.size());
}

double inductive(const GroupFunction& g, const DirectionSpec& dirs, std::size_t k) {
  if (k + 1 == dirs.size()) return last_level(g, dirs[k]);
  double acc = 0;
  for (Index h : dirs[k].elements()) acc += inductive(mult_derivative(g, h), dirs, k + 1);
  return acc / static_cast<double>(dirs[k].size());
}

// Calls fn(offsets) for every tuple h in H_1 x ... x H_s, where
// offsets[e] = index(sum_i e_i h_i).
template <class Fn>
void for_each_box(const FieldConfig& cfg, const DirectionSpec& dirs, Fn&& fn) {
  const std::size_t s = dirs.size();
  std::vector<std::size_t> pos(s, 0);
  std::vector<Index> offsets(std::size_t{1} << s, 0);
  while (true) {
    for (std::size_t e = 1; e < offsets.size(); ++e) {
      const std::size_t low = static_cast<std::size_t>(std::countr_zero(e));
      offsets[e] = cfg.add(offsets[e & (e - 1)], dirs[low].elements()[pos[low]]);
    }
    fn(offsets);
    std::size_t i = 0;
    while (i < s && ++pos[i] == dirs[i].size()) pos[i++] = 0;
    if (i == s) break;
  }
}

}  // namespace

DirectionSpec directions(const FieldConfig& cfg, const std::vector<FpPoint>& vs) {
  DirectionSpec out;
  for (const auto& v : vs) out.push_back(cyclic(cfg, v));
  return out;
}

DirectionSpec repeated(const Subgroup& h, int s) { return DirectionSpec(static_cast<std::size_t>(s), h); }

GroupFunction mult_derivative(const GroupFunction& f, Index h) {
  const auto& cfg = f.cfg();
  std::vector<Complex> v(f.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = f[static_cast<Index>(x)] * std::conj(f[cfg.add(static_cast<Index>(x), h)]);
  return GroupFunction(cfg, std::move(v), f.sup_bound() * f.sup_bound());
}

GroupFunction mult_derivative(const GroupFunction& f, const FpPoint& h) { return mult_derivative(f, f.cfg().index(h)); }

double box_average(const GroupFunction& f, const DirectionSpec& dirs) {
  require_dirs(f, dirs);
  // permutation invariance lets the largest subgroup take the closed-form last slot
  DirectionSpec ordered = dirs;
  std::stable_sort(ordered.begin(), ordered.end(), [](const Subgroup& a, const Subgroup& b) { return a.size() < b.size(); });
  check_cost(product_of_sizes(ordered, 1) * static_cast<double>(f.size()) * static_cast<double>(ordered.size()),
             "box norm");
  return std::max(0.0, inductive(f, ordered, 0));
}

double box_average_direct(const GroupFunction& f, const DirectionSpec& dirs) {
  require_dirs(f, dirs);
  const std::size_t s = dirs.size();
  check_cost(product_of_sizes(dirs, 0) * static_cast<double>(f.size()) * static_cast<double>(std::size_t{1} << s),
             "direct box norm");
  const auto& cfg = f.cfg();
  Complex acc = 0;
  for_each_box(cfg, dirs, [&](const std::vector<Index>& off) {
    for (std::size_t x = 0; x < f.size(); ++x) {
      Complex prod = 1;
      for (std::size_t e = 0; e < off.size(); ++e) {
        Complex z = f[cfg.add(static_cast<Index>(x), off[e])];
        prod *= (std::popcount(e) & 1) ? std::conj(z) : z;
      }
      acc += prod;
    }
  });
  return std::max(0.0, acc.real() / (product_of_sizes(dirs, 0) * static_cast<double>(f.size())));
}

double box_norm(const GroupFunction& f, const DirectionSpec& dirs) {
  return std::pow(box_average(f, dirs), 1.0 / std::ldexp(1.0, static_cast<int>(dirs.size())));
}

double box_norm_direct(const GroupFunction& f, const DirectionSpec& dirs) {
  return std::pow(box_average_direct(f, dirs), 1.0 / std::ldexp(1.0, static_cast<int>(dirs.size())));
}

double gowers_average(const GroupFunction& f, const FpPoint& v, int s) {
  require_nonzero(v);
  if (s < 1) throw Error(ErrorCode::invalid_argument, "Gowers degree must be positive");
  return box_average(f, repeated(cyclic(f.cfg(), v), s));
}

double gowers_norm(const GroupFunction& f, const FpPoint& v, int s) {
  return std::pow(gowers_average(f, v, s), 1.0 / std::ldexp(1.0, s));
}

Complex box_inner_product(const std::vector<GroupFunction>& fs, const DirectionSpec& dirs) {
  if (fs.empty()) throw Error(ErrorCode::size_mismatch, "no functions");
  require_dirs(fs[0], dirs);
  if (fs.size() != (std::size_t{1} << dirs.size())) throw Error(ErrorCode::size_mismatch, "need 2^s functions");
  for (const auto& f : fs) require_same_field(fs[0].cfg(), f.cfg());
  const auto& cfg = fs[0].cfg();
  const std::size_t n = cfg.order();
  check_cost(product_of_sizes(dirs, 0) * static_cast<double>(n) * static_cast<double>(fs.size()), "box inner product");
  Complex acc = 0;
  for_each_box(cfg, dirs, [&](const std::vector<Index>& off) {
    for (std::size_t x = 0; x < n; ++x) {
      Complex prod = 1;
      for (std::size_t e = 0; e < off.size(); ++e) {
        Complex z = fs[e][cfg.add(static_cast<Index>(x), off[e])];
        prod *= (std::popcount(e) & 1) ? std::conj(z) : z;
      }
      acc += prod;
    }
  });
  return acc / (product_of_sizes(dirs, 0) * static_cast<double>(n));
}

GcsResult gcs_check(const std::vector<GroupFunction>& fs, const DirectionSpec& dirs) {
  GcsResult r;
  r.lhs = std::abs(box_inner_product(fs, dirs));
  r.rhs = 1;
  for (const auto& f : fs) r.rhs *= box_norm(f, dirs);
  r.holds = r.lhs <= r.rhs + kTolerance;
  return r;
}

GroupFunction dual_function(const GroupFunction& f, const FpPoint& v, int s) {
  require_nonzero(v);
  if (s < 1) throw Error(ErrorCode::invalid_argument, "dual degree must be positive");
  const auto& cfg = f.cfg();
  const int p = cfg.prime();
  const std::size_t n = cfg.order();
  const std::size_t corners = std::size_t{1} << s;
  double count = std::pow(static_cast<double>(p), s);
  check_cost(count * static_cast<double>(n) * static_cast<double>(corners), "dual function");

  std::vector<Index> multiple(static_cast<std::size_t>(p));
  const Index vi = cfg.index(v);
  for (int k = 0; k < p; ++k) multiple[static_cast<std::size_t>(k)] = cfg.scale(vi, k);

  std::vector<Complex> acc(n, 0.0);
  std::vector<int> h(static_cast<std::size_t>(s), 0);
  std::vector<Index> off(corners);
  while (true) {
    for (std::size_t e = 1; e < corners; ++e) {
      int k = 0;
      for (int i = 0; i < s; ++i)
        if (e >> i & 1) k += h[static_cast<std::size_t>(i)];
      off[e] = multiple[static_cast<std::size_t>(k % p)];
    }
    for (std::size_t x = 0; x < n; ++x) {
      Complex prod = 1;
      for (std::size_t e = 1; e < corners; ++e) {
        Complex z = f[cfg.add(static_cast<Index>(x), off[e])];
        prod *= (std::popcount(e) & 1) ? std::conj(z) : z;
      }
      acc[x] += prod;
    }
    int i = 0;
    while (i < s && ++h[static_cast<std::size_t>(i)] == p) h[static_cast<std::size_t>(i++)] = 0;
    if (i == s) break;
  }
  for (auto& z : acc) z /= count;
  const double sup = std::pow(f.sup_bound(), static_cast<double>(corners - 1));
  return GroupFunction(cfg, std::move(acc), sup);
}

WeakInverseResult weak_inverse_check(const GroupFunction& f, const FpPoint& v, int s) {
  WeakInverseResult r;
  r.lhs = gowers_average(f, v, s);
  r.rhs = multiply(f, dual_function(f, v, s)).mean();
  r.ok = std::abs(r.lhs - r.rhs) <= kTolerance && std::abs(r.rhs.imag()) <= kTolerance;
  return r;
}

std::vector<Index> transversal(const FieldConfig& cfg, const FpPoint& v) {
  require_nonzero(v);
  const Subgroup line = cyclic(cfg, v);
  auto lex_less = [&](Index a, Index b) {
    FpPoint x = cfg.point(a), y = cfg.point(b);
    return x.coords < y.coords;
  };
  std::vector<Index> reps;
  const std::size_t m = line.size();
  for (std::size_t c = 0; c < line.coset_count(); ++c) {
    const Index* cos = line.coset_members().data() + c * m;
    reps.push_back(*std::min_element(cos, cos + m, lex_less));
  }
  std::sort(reps.begin(), reps.end(), lex_less);
  return reps;
}

EigenDefects eigen_defects(const Eigenfunction& e) {
  EigenDefects d;
  const auto& cfg = e.chi.cfg();
  const Index vi = cfg.index(e.v);
  for (std::size_t x = 0; x < cfg.order(); ++x) {
    const Complex c = e.chi[static_cast<Index>(x)];
    const double r = std::abs(c);
    d.modulus = std::max(d.modulus, std::min(r, std::abs(r - 1.0)));
    const Index y = cfg.add(static_cast<Index>(x), vi);
    d.eigen = std::max(d.eigen, std::abs(e.chi[y] - cfg.ep(e.phi[x]) * c));
    if (e.phi[y] != e.phi[x]) d.invariant = false;
  }
  return d;
}

namespace {

// Builds chi(x' + v n) = amp(x') e_p(phi(x') n) from per-representative data.
Eigenfunction assemble(const FieldConfig& cfg, const FpPoint& v, const std::vector<Index>& reps,
                       const std::vector<int>& phi, const std::vector<Complex>& amp) {
  const Index vi = cfg.index(v);
  const int p = cfg.prime();
  std::vector<Complex> chi(cfg.order());
  std::vector<int> phi_full(cfg.order());
  for (std::size_t r = 0; r < reps.size(); ++r) {
    Index x = reps[r];
    for (int n = 0; n < p; ++n) {
      chi[x] = amp[r] * cfg.ep(static_cast<std::int64_t>(phi[r]) * n);
      phi_full[x] = phi[r];
      x = cfg.add(x, vi);
    }
  }
  return Eigenfunction{GroupFunction(cfg, std::move(chi), 1.0), v, std::move(phi_full)};
}

}  // namespace

Eigenfunction make_eigenfunction(const FieldConfig& cfg, const FpPoint& v, const std::vector<int>& phi,
                                 const std::vector<int>& psi, Complex lambda, const std::vector<bool>& support) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12) throw Error(ErrorCode::invalid_argument, "lambda must have modulus 1");
  const auto reps = transversal(cfg, v);
  if (phi.size() != reps.size() || psi.size() != reps.size() || support.size() != reps.size())
    throw Error(ErrorCode::size_mismatch, "phi, psi and support must have one entry per coset of <v>");
  std::vector<int> ph(reps.size());
  std::vector<Complex> amp(reps.size());
  for (std::size_t r = 0; r < reps.size(); ++r) {
    ph[r] = cfg.mod(phi[r]);
    amp[r] = support[r] ? lambda * cfg.ep(psi[r]) : Complex(0);
  }
  Eigenfunction e = assemble(cfg, v, reps, ph, amp);
  if (!eigen_defects(e).ok()) throw Error(ErrorCode::invalid_argument, "eigenfunction invariants failed");
  return e;
}

U2InverseResult u2_inverse(const GroupFunction& f, const FpPoint& v) {
  const auto& cfg = f.cfg();
  const auto reps = transversal(cfg, v);
  const Index vi = cfg.index(v);
  const int p = cfg.prime();
  std::vector<int> phi(reps.size());
  std::vector<Complex> amp(reps.size());
  std::vector<Complex> line(static_cast<std::size_t>(p));
  for (std::size_t r = 0; r < reps.size(); ++r) {
    Index x = reps[r];
    for (int n = 0; n < p; ++n) {
      line[static_cast<std::size_t>(n)] = f[x];
      x = cfg.add(x, vi);
    }
    // F(xi) = E_n f(x' + v n) e_p(xi n); keep the first maximiser
    double best = -1;
    Complex best_val = 0;
    for (int xi = 0; xi < p; ++xi) {
      Complex s = 0;
      for (int n = 0; n < p; ++n) s += line[static_cast<std::size_t>(n)] * cfg.ep(static_cast<std::int64_t>(xi) * n);
      s /= static_cast<double>(p);
      if (std::abs(s) > best + 1e-12) {
        best = std::abs(s);
        best_val = s;
        phi[r] = xi;
      }
    }
    amp[r] = best_val == Complex(0) ? Complex(1) : std::conj(best_val) / std::abs(best_val);
  }
  U2InverseResult out{assemble(cfg, v, reps, phi, amp), 0.0};
  out.correlation = multiply(f, out.chi.chi).mean().real();
  return out;
}

}  // namespace ulab
