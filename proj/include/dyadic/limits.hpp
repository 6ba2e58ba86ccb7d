#pragma once

#include <cmath>

namespace dyadic {

/// Finest partition level supported. With |x| <= max_abs_sample every cell
/// index floor(x * 2^k) fits in 61 bits and every cell edge is an exact double.
inline constexpr int max_level = 40;

/// Largest magnitude a sample may have.
inline constexpr double max_abs_sample = 1048576.0; // 2^20

inline bool sample_in_range(double x) noexcept {
  return std::isfinite(x) && std::fabs(x) <= max_abs_sample;
}

} // namespace dyadic
