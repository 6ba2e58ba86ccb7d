#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "errors.hpp"
#include "limits.hpp"

namespace dyadic {

inline void check_level(int k) {
  if (k < 1 || k > max_level)
    throw contract_error("partition level must lie in [1, " +
                         std::to_string(max_level) + "], got " +
                         std::to_string(k));
}

/// Cell edges j / 2^k are exact doubles only while |j| <= 2^53.
inline constexpr std::int64_t max_exact_edge_index = std::int64_t{1} << 53;

inline bool edge_exact(std::int64_t index) {
  return index >= -max_exact_edge_index && index <= max_exact_edge_index;
}

/// Index of the level-k cell containing x, i.e. floor(x * 2^k). The scaling
/// by 2^k is exact, so boundary points land in the cell they open.
inline std::int64_t cell_index(double x, int k) {
  return static_cast<std::int64_t>(std::floor(std::ldexp(x, k)));
}

/// The dyadic interval [index / 2^level, (index + 1) / 2^level).
/// The index is exact over the whole supported range; left() and right()
/// are rounded once |index| exceeds 2^53.
struct DyadicCell {
  int level = 1;
  std::int64_t index = 0;

  double left() const { return std::ldexp(static_cast<double>(index), -level); }
  double right() const {
    return std::ldexp(static_cast<double>(index + 1), -level);
  }
  double length() const { return std::ldexp(1.0, -level); }
  bool contains(double x) const {
    return std::isfinite(x) && cell_index(x, level) == index;
  }

  /// The level-(k-1) cell containing this one. Requires level >= 2.
  DyadicCell parent() const {
    if (level < 2)
      throw contract_error("a level-1 cell has no parent in the hierarchy");
    // Arithmetic shift is floor division by 2, also for negative indices.
    return {level - 1, index >> 1};
  }

  friend bool operator==(const DyadicCell&, const DyadicCell&) = default;
};

inline DyadicCell cell_of(double x, int k) {
  check_level(k);
  if (!std::isfinite(x))
    throw range_error("cell_of: non-finite coordinate", x);
  if (std::fabs(x) > max_abs_sample)
    throw range_error("cell_of: coordinate outside [-2^20, 2^20]", x);
  return {k, cell_index(x, k)};
}

} // namespace dyadic
