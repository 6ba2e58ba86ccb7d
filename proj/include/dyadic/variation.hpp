#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "cell.hpp"
#include "empirical.hpp"
#include "errors.hpp"
#include "sample_buffer.hpp"
#include "scalar.hpp"
#include "step_density.hpp"

namespace dyadic {

/// Total variation of h over [a, b): sup of sum |h(t_i) - h(t_{i-1})| over
/// a <= t_0 < ... < t_m < b. For a right-continuous step function this is the
/// sum of the absolute jumps at breakpoints strictly inside (a, b); a jump at
/// a is invisible (h(a) is already the right value) and one at b is outside.
template <class T>
T step_variation(const StepDensity<T>& h, const T& a, const T& b) {
  if (!(a < b))
    throw contract_error("step_variation: need a < b");
  const auto& bps = h.breakpoints();
  const auto& hs = h.heights();
  T sum(0);
  for (std::size_t p = 0; p < bps.size(); ++p) {
    if (!(a < bps[p]))
      continue;
    if (!(bps[p] < b))
      break;
    const T left = p == 0 ? T(0) : hs[p - 1];
    const T right = p < hs.size() ? hs[p] : T(0);
    sum += abs_value(T(right - left));
  }
  return sum;
}

inline void check_window(std::int64_t i) {
  if (i < 1 || i > (std::int64_t{1} << 21))
    throw contract_error("window half-width i must lie in [1, 2^21], got " +
                         std::to_string(i));
}

/// For i = 1..max_window, the integer jump sums
///   S_i = sum_{j = -i 2^k}^{i 2^k - 2} |c_j - c_{j+1}|
/// of the level-k cell counts c_j. The histogram variation on [-i, i) is
/// 2^k S_i / n. Linear in the number of occupied cells.
inline std::vector<std::uint64_t>
window_jump_sums(std::span<const CellCount> counts, int k,
                 std::int64_t max_window) {
  check_level(k);
  check_window(max_window);
  const auto windows = static_cast<std::size_t>(max_window);
  std::vector<std::uint64_t> bucket(windows + 1, 0);
  // The boundary between cells b-1 and b sits at b / 2^k and is interior to
  // [-i, i) iff |b| < i 2^k.
  auto add = [&](std::int64_t boundary, std::uint64_t jump) {
    const std::int64_t mag = boundary < 0 ? -boundary : boundary;
    const std::int64_t first = (mag >> k) + 1;
    if (first <= max_window)
      bucket[static_cast<std::size_t>(first)] += jump;
  };
  auto diff = [](std::size_t x, std::size_t y) -> std::uint64_t {
    return x > y ? x - y : y - x;
  };
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const bool left_occupied =
        c > 0 && counts[c - 1].index + 1 == counts[c].index;
    const bool right_occupied =
        c + 1 < counts.size() && counts[c].index + 1 == counts[c + 1].index;
    add(counts[c].index,
        diff(counts[c].count, left_occupied ? counts[c - 1].count : 0));
    if (!right_occupied)
      add(counts[c].index + 1, counts[c].count);
  }
  std::vector<std::uint64_t> sums(windows, 0);
  std::uint64_t run = 0;
  for (std::size_t i = 1; i <= windows; ++i) {
    run += bucket[i];
    sums[i - 1] = run;
  }
  return sums;
}

/// V(h_{n,k} : -i, i) for the level-k histogram of the buffer, from the
/// relative frequencies of adjacent cells:
///   2^k * sum_{j = -i 2^k}^{i 2^k - 2} |mu_n(A_{k,j}) - mu_n(A_{k,j+1})|.
/// Equal to step_variation(histogram<T>(buffer, k), -i, i).
template <class T = double>
T histogram_variation(const SampleBuffer& buffer, int k, std::int64_t i) {
  require_nonempty(buffer, "histogram_variation");
  check_level(k);
  check_window(i);
  const auto sorted = buffer.sorted();
  const auto counts = level_counts(sorted, k);
  const auto sums = window_jump_sums(counts, k, i);
  return scalar_traits<T>::pow2(k) *
         T(static_cast<std::int64_t>(sums.back())) /
         T(static_cast<std::int64_t>(buffer.size()));
}

/// f o pi_k: the function that is constant on each level-k cell and equals
/// the average of f over that cell. Preserves the integral of f.
template <class T>
StepDensity<T> conditional_on_partition(const StepDensity<T>& f, int k) {
  using traits = scalar_traits<T>;
  check_level(k);
  if (f.is_zero())
    return {};
  const auto& bps = f.breakpoints();
  const auto& hs = f.heights();
  const T scale = traits::pow2(k);
  const T width = traits::pow2(-k);
  const std::int64_t first = traits::floor_int(bps.front() * scale);
  // last cell is the one containing the final left-open edge
  std::int64_t last = traits::floor_int(bps.back() * scale);
  if (T(last) * width == bps.back())
    --last;
  if (last - first > (std::int64_t{1} << 26))
    throw contract_error("conditional_on_partition: too many cells");
  if constexpr (std::is_floating_point_v<T>) {
    if (!edge_exact(first) || !edge_exact(last + 1))
      throw contract_error(
          "conditional_on_partition: cell edges are not exact doubles at this level");
  }

  std::vector<T> out_b;
  std::vector<T> out_h;
  out_b.reserve(static_cast<std::size_t>(last - first + 2));
  out_h.reserve(static_cast<std::size_t>(last - first + 1));
  out_b.push_back(T(first) * width);
  std::size_t p = 0;
  for (std::int64_t j = first; j <= last; ++j) {
    const T lo = T(j) * width;
    const T hi = T(j + 1) * width;
    while (p < hs.size() && !(lo < bps[p + 1]))
      ++p;
    T mass(0);
    for (std::size_t q = p; q < hs.size() && bps[q] < hi; ++q) {
      const T& a = bps[q] < lo ? lo : bps[q];
      const T& b = bps[q + 1] < hi ? bps[q + 1] : hi;
      mass += hs[q] * (b - a);
    }
    out_h.push_back(mass * scale);
    out_b.push_back(hi);
  }
  return StepDensity<T>(std::move(out_b), std::move(out_h));
}

} // namespace dyadic
