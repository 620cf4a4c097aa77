#pragma once

#include <stdexcept>
#include <string>

namespace ulab {

enum class ErrorCode {
  invalid_argument,
  zero_direction,
  size_mismatch,
  cost_cap,
  overflow,
  not_independent,
  family_collapsed,
  max_steps,
  provenance_lost,
  not_distinct,
  weil_hypothesis,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Process-wide budget for "complex multiply-adds". Default 1e9; the
// ULAB_COST_CAP environment variable overrides the default on first use.
double cost_cap();
void set_cost_cap(double cap);

// Throws Error(cost_cap) when estimate exceeds the cap.
void check_cost(double estimate, const std::string& what);

}  // namespace ulab
