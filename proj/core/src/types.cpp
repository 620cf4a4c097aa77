#include "ulab/types.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

namespace ulab {

TypeTuple TypeTuple::of(std::vector<int> w) {
  TypeTuple t;
  for (int x : w)
    if (x < 0) throw Error(ErrorCode::invalid_argument, "type entries must be nonnegative");
  t.K = std::accumulate(w.begin(), w.end(), 0);
  t.basic = std::count(w.begin(), w.end(), t.K) == 1 && std::count(w.begin(), w.end(), 0) == static_cast<long>(w.size()) - 1;
  t.w = std::move(w);
  return t;
}

TypeTuple compute_type(const ProgressionConfig& pc) {
  std::vector<int> w(static_cast<std::size_t>(pc.length()), 0);
  for (int j = 1; j <= pc.length(); ++j)
    if (degree(pc.poly(j)) == pc.degree()) ++w[static_cast<std::size_t>(pc.eta()[static_cast<std::size_t>(j - 1)] - 1)];
  return TypeTuple::of(std::move(w));
}

TypeTuple sigma(const TypeTuple& w, int m, int i) {
  const int l = static_cast<int>(w.w.size());
  if (m < 1 || m > l || i < 1 || i > l || m == i) throw Error(ErrorCode::invalid_argument, "sigma needs distinct slots in range");
  if (w.w[static_cast<std::size_t>(m - 1)] == 0) throw Error(ErrorCode::invalid_argument, "m is not in the support of w");
  std::vector<int> v = w.w;
  --v[static_cast<std::size_t>(m - 1)];
  ++v[static_cast<std::size_t>(i - 1)];
  return TypeTuple::of(std::move(v));
}

bool type_less(const TypeTuple& lower, const TypeTuple& upper) {
  if (lower.w.size() != upper.w.size() || lower.K != upper.K || lower == upper) return false;
  // every admissible step raises sum w_t^2, so the search is finite
  std::set<std::vector<int>> seen{upper.w};
  std::queue<std::vector<int>> todo;
  todo.push(upper.w);
  const std::size_t l = upper.w.size();
  while (!todo.empty()) {
    const auto cur = todo.front();
    todo.pop();
    for (std::size_t m = 0; m < l; ++m) {
      if (cur[m] == 0) continue;
      for (std::size_t i = 0; i < l; ++i) {
        if (i == m || cur[m] > cur[i]) continue;
        auto next = cur;
        --next[m];
        ++next[i];
        if (next == lower.w) return true;
        if (seen.insert(next).second) todo.push(next);
      }
    }
  }
  return false;
}

}  // namespace ulab
