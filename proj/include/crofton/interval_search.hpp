#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "crofton/error.hpp"

namespace crofton {

// Index of the subinterval [cumulative[j-1], cumulative[j]) containing x,
// i.e. the smallest j with x < cumulative[j]. Bisection, O(log2 N)
// comparisons. Repeated entries (zero-weight parts) are never selected.
inline std::size_t find_interval(std::span<const double> cumulative, double x) {
  if (cumulative.empty()) throw InvalidArgument("find_interval: empty cumulative array");
  if (!(x >= 0.0) || !(x < cumulative.back())) {
    throw InvalidArgument("find_interval: x=" + std::to_string(x) + " outside [0, " +
                          std::to_string(cumulative.back()) + ")");
  }
  // Invariant: cumulative[left-1] <= x < cumulative[right], with
  // cumulative[-1] read as 0.
  std::size_t left = 0;
  std::size_t right = cumulative.size() - 1;
  while (left < right) {
    const std::size_t mid = left + (right - left) / 2;
    if (x < cumulative[mid]) {
      right = mid;
    } else {
      left = mid + 1;
    }
  }
  return right;
}

}  // namespace crofton
