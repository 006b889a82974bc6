#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace ert {

/// Relative tolerance for comparisons of floating-point function values.
inline constexpr double kValueTolerance = 1e-9;

/// a > b by more than representation noise. Infinite operands compare
/// exactly.
inline bool definitely_greater(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a > b;
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return a - b > kValueTolerance * scale;
}

/// ceil(x), ignoring floating-point error of a few ulps in x, so that
/// quantities like 24 / 0.2 evaluate to 120 and not 121.
inline std::uint64_t ceil_count(double x) {
  if (x <= 0) return 0;
  const double c = std::ceil(x - 1e-9 * std::max(1.0, x));
  return static_cast<std::uint64_t>(c);
}

/// floor(x) with the same slack.
inline std::uint64_t floor_count(double x) {
  if (x <= 0) return 0;
  return static_cast<std::uint64_t>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

/// Base-2 logarithm used in every query budget.
inline double log2n(std::uint64_t n) {
  return std::log2(static_cast<double>(n));
}

}  // namespace ert
