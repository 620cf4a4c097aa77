#pragma once

#include <vector>

#include "ulab/counting.hpp"

namespace ulab {

struct TypeTuple {
  std::vector<int> w;
  int K = 0;
  bool basic = false;

  static TypeTuple of(std::vector<int> w);
  bool operator==(const TypeTuple& o) const { return w == o.w; }
};

// w_t = number of maximal-degree polynomials j with eta_j = t.
TypeTuple compute_type(const ProgressionConfig& pc);

// Moves one unit from slot m to slot i (1-based).
TypeTuple sigma(const TypeTuple& w, int m, int i);

// True iff `lower` is reachable from `upper` by one or more steps sigma_{mi}
// with w_m <= w_i at the time of the step.
bool type_less(const TypeTuple& lower, const TypeTuple& upper);

}  // namespace ulab
