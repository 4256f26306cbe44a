#pragma once

#include <stdexcept>
#include <string>

namespace qsw {

// Centralized numeric tolerances.
inline constexpr double kFeasTol = 1e-8;  // constraint feasibility checks
inline constexpr double kCmpTol = 1e-9;   // scalar comparisons, pivots, weight cutoffs

// Thrown when a request exceeds a documented size ceiling (state/matching
// enumeration blows up combinatorially past it).
class TooLargeError : public std::runtime_error {
 public:
  explicit TooLargeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsw
