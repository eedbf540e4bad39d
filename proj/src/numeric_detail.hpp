#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "hookfit/dataset.hpp"

namespace hookfit::detail {

inline constexpr double kLogSqrtTwoPi = 0.91893853320467274178;

// ln(x) for positive integers, tabulated for the range the normalizer window
// touches most often.
inline double log_count(Count x) {
  static const std::vector<double> table = [] {
    std::vector<double> t(std::size_t{1} << 16);
    for (std::size_t i = 1; i < t.size(); ++i) {
      t[i] = std::log(static_cast<double>(i));
    }
    return t;
  }();
  if (x > 0 && static_cast<std::size_t>(x) < table.size()) {
    return table[static_cast<std::size_t>(x)];
  }
  return std::log(static_cast<double>(x));
}

// Asymptotic factor Q(z) * z / phi(z) for large z.
inline double mills_series(double z) {
  const double r = 1.0 / (z * z);
  return 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
}

// log of the standard normal upper tail Q(z) = P(Z > z).
inline double log_normal_upper_tail(double z) {
  if (z < 30.0) return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
  return -0.5 * z * z - std::log(z) - kLogSqrtTwoPi + std::log(mills_series(z));
}

// Inverse Mills ratio phi(z) / Q(z).
inline double inverse_mills(double z) {
  if (z < 30.0) {
    const double phi = std::exp(-0.5 * z * z - kLogSqrtTwoPi);
    return phi / (0.5 * std::erfc(z / std::numbers::sqrt2));
  }
  return z / mills_series(z);
}

}  // namespace hookfit::detail
