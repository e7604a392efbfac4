#pragma once

#include <cstddef>

namespace rwb::tol {

// Relative tolerance for every marginal / total-weight equality.
inline constexpr double kRelative = 1e-9;

// Significant digits used when deciding whether two input points coincide.
inline constexpr int kMergeDigits = 12;

// Grid points closer than this (in normalized units) are merged.
inline constexpr double kGridMerge = 1e-9;

inline constexpr std::size_t kDefaultGridCap = 1'000'000;

inline bool close_rel(double a, double b, double scale) {
  double d = a - b;
  if (d < 0) d = -d;
  return d <= kRelative * (scale < 1.0 ? 1.0 : scale);
}

}  // namespace rwb::tol
