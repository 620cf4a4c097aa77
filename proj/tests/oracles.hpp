#pragma once
// Brute-force reference computations. Nothing here calls into the library
// except for reading values out of its containers; points are handled as
// plain coordinate vectors with their own little-endian indexing.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Table = std::vector<C>;
using Point = std::vector<int>;

inline const double kPi = std::acos(-1.0);

inline C e(int p, std::int64_t a) {
  std::int64_t r = a % p;
  if (r < 0) r += p;
  return std::polar(1.0, 2 * kPi * static_cast<double>(r) / p);
}

struct Space {
  int p;
  int D;

  std::size_t order() const {
    std::size_t n = 1;
    for (int i = 0; i < D; ++i) n *= static_cast<std::size_t>(p);
    return n;
  }
  Point point(std::size_t idx) const {
    Point x(static_cast<std::size_t>(D));
    for (int i = 0; i < D; ++i) {
      x[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(p));
      idx /= static_cast<std::size_t>(p);
    }
    return x;
  }
  std::size_t index(const Point& x) const {
    std::size_t idx = 0;
    for (int i = D - 1; i >= 0; --i) {
      int c = x[static_cast<std::size_t>(i)] % p;
      if (c < 0) c += p;
      idx = idx * static_cast<std::size_t>(p) + static_cast<std::size_t>(c);
    }
    return idx;
  }
  Point add(const Point& a, const Point& b, std::int64_t k = 1) const {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::int64_t v = (a[i] + k * b[i]) % p;
      r[i] = static_cast<int>(v < 0 ? v + p : v);
    }
    return r;
  }
};

// All integer combinations of the generators, by repeated closure.
inline std::vector<Point> span(const Space& sp, const std::vector<Point>& gens) {
  std::set<std::size_t> seen{0};
  std::vector<Point> out{Point(static_cast<std::size_t>(sp.D), 0)};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& g : gens) {
      Point y = sp.add(out[i], g);
      if (seen.insert(sp.index(y)).second) out.push_back(y);
    }
  return out;
}

// E_x E_{h in H_1 x ... x H_s} prod_eps C^{|eps|} f(x + eps.h), straight from the definition.
inline double box_average(const Space& sp, const Table& f, const std::vector<std::vector<Point>>& groups) {
  const std::size_t s = groups.size();
  std::vector<std::size_t> pick(s, 0);
  C total = 0;
  std::size_t count = 0;
  while (true) {
    for (std::size_t xi = 0; xi < sp.order(); ++xi) {
      const Point x = sp.point(xi);
      C prod = 1;
      for (std::size_t eps = 0; eps < (std::size_t{1} << s); ++eps) {
        Point y = x;
        int bits = 0;
        for (std::size_t i = 0; i < s; ++i)
          if (eps >> i & 1) {
            y = sp.add(y, groups[i][pick[i]]);
            ++bits;
          }
        const C v = f[sp.index(y)];
        prod *= bits % 2 ? std::conj(v) : v;
      }
      total += prod;
      ++count;
    }
    std::size_t i = 0;
    while (i < s && ++pick[i] == groups[i].size()) pick[i++] = 0;
    if (i == s) break;
  }
  return (total / static_cast<double>(count)).real();
}

inline std::int64_t eval(const std::vector<std::int64_t>& poly, std::int64_t n) {
  std::int64_t r = 0, pw = 1;
  for (auto a : poly) {
    r += a * pw;
    pw *= n;
  }
  return r;
}

// E_x E_n f_0(x) prod_j f_j(x + v_j p_j(n)).
inline C lambda(const Space& sp, const std::vector<Point>& vs, const std::vector<std::vector<std::int64_t>>& polys,
                const std::vector<Table>& fs) {
  C total = 0;
  for (std::size_t xi = 0; xi < sp.order(); ++xi) {
    const Point x = sp.point(xi);
    for (int n = 0; n < sp.p; ++n) {
      C prod = fs[0][xi];
      for (std::size_t j = 0; j < polys.size(); ++j)
        prod *= fs[j + 1][sp.index(sp.add(x, vs[j], eval(polys[j], n)))];
      total += prod;
    }
  }
  return total / static_cast<double>(sp.order() * static_cast<std::size_t>(sp.p));
}

inline std::int64_t progression_count(const Space& sp, const std::vector<Point>& vs,
                                      const std::vector<std::vector<std::int64_t>>& polys,
                                      const std::function<bool(const Point&)>& in_set) {
  std::int64_t count = 0;
  for (std::size_t xi = 0; xi < sp.order(); ++xi) {
    const Point x = sp.point(xi);
    if (!in_set(x)) continue;
    for (int n = 1; n < sp.p; ++n) {
      bool all = true;
      for (std::size_t j = 0; j < polys.size() && all; ++j) all = in_set(sp.add(x, vs[j], eval(polys[j], n)));
      if (all) ++count;
    }
  }
  return count;
}

// E(f | H)(x) by averaging over the coset.
inline Table conditional_expectation(const Space& sp, const Table& f, const std::vector<Point>& h) {
  Table out(f.size());
  for (std::size_t xi = 0; xi < sp.order(); ++xi) {
    C sum = 0;
    for (const auto& g : h) sum += f[sp.index(sp.add(sp.point(xi), g))];
    out[xi] = sum / static_cast<double>(h.size());
  }
  return out;
}

// |E_n e_p(n^2)| for odd p, from the closed form of the quadratic Gauss sum.
inline double gauss_magnitude(int p) { return 1.0 / std::sqrt(static_cast<double>(p)); }

}  // namespace oracle
