#include "ulab/error.hpp"

#include <atomic>
#include <cstdlib>
#include <sstream>

namespace ulab {
namespace {

double initial_cap() {
  if (const char* env = std::getenv("ULAB_COST_CAP")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return 1e9;
}

std::atomic<double>& cap_slot() {
  static std::atomic<double> cap{initial_cap()};
  return cap;
}

}  // namespace

double cost_cap() { return cap_slot().load(); }

void set_cost_cap(double cap) {
  if (!(cap > 0)) throw Error(ErrorCode::invalid_argument, "cost cap must be positive");
  cap_slot().store(cap);
}

void check_cost(double estimate, const std::string& what) {
  if (estimate > cost_cap()) {
    std::ostringstream os;
    os << what << ": estimated cost " << estimate << " exceeds cap " << cost_cap();
    throw Error(ErrorCode::cost_cap, os.str());
  }
}

}  // namespace ulab
