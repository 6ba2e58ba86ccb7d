#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "cell.hpp"
#include "errors.hpp"
#include "sample_buffer.hpp"
#include "scalar.hpp"
#include "step_density.hpp"

namespace dyadic {

/// Number of samples in one occupied level-k cell.
struct CellCount {
  std::int64_t index = 0;
  std::size_t count = 0;

  friend bool operator==(const CellCount&, const CellCount&) = default;
};

/// Occupied level-k cells of a sorted sample, in increasing index order.
/// One left-to-right pass.
inline std::vector<CellCount> level_counts(std::span<const double> sorted,
                                           int k) {
  check_level(k);
  std::vector<CellCount> out;
  for (double x : sorted) {
    const std::int64_t j = cell_index(x, k);
    if (!out.empty() && out.back().index == j)
      ++out.back().count;
    else
      out.push_back({j, 1});
  }
  return out;
}

/// The level-k histogram with n samples: height 2^k * count / n on every
/// occupied cell, zero elsewhere.
template <class T = double>
StepDensity<T> histogram_from_counts(std::span<const CellCount> counts, int k,
                                     std::size_t n) {
  using traits = scalar_traits<T>;
  if (counts.empty())
    return {};
  if constexpr (std::is_floating_point_v<T>) {
    if (!edge_exact(counts.front().index) || !edge_exact(counts.back().index + 1))
      throw range_error("histogram: level-" + std::to_string(k) +
                            " cell edges near this sample are not exact doubles",
                        std::ldexp(static_cast<double>(counts.front().index), -k));
  }
  const T scale = traits::pow2(k) / T(static_cast<std::int64_t>(n));
  const T width = traits::pow2(-k);
  std::vector<T> bps;
  std::vector<T> hs;
  bps.reserve(2 * counts.size());
  hs.reserve(2 * counts.size());
  bps.push_back(T(counts.front().index) * width);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (c > 0 && counts[c].index != counts[c - 1].index + 1) {
      // empty stretch between two occupied cells
      hs.push_back(T(0));
      bps.push_back(T(counts[c].index) * width);
    }
    hs.push_back(T(static_cast<std::int64_t>(counts[c].count)) * scale);
    bps.push_back(T(counts[c].index + 1) * width);
  }
  return StepDensity<T>(std::move(bps), std::move(hs));
}

template <class T = double>
StepDensity<T> histogram(const SampleBuffer& buffer, int k) {
  require_nonempty(buffer, "histogram");
  check_level(k);
  const auto sorted = buffer.sorted();
  const auto counts = level_counts(sorted, k);
  return histogram_from_counts<T>(counts, k, buffer.size());
}

/// sup over all intervals A (finite or infinite, any endpoint type) of
/// |mu_n(A) - mu_F(A)|, for a continuous CDF F.
///
/// With D(t) = F_n(t) - F(t) every such difference is D(b) - D(a) up to left
/// limits, and D(+-inf) = 0, so the supremum is sup D - inf D taken over the
/// values and left limits of D plus 0. Between consecutive samples D is
/// nonincreasing, so it suffices to look at the samples themselves.
/// Generic in the scalar so that exact inputs (rational sample points and a
/// rational CDF) give an exact answer.
template <class T, class Cdf>
T sup_interval_discrepancy(std::span<const T> sorted, Cdf&& cdf) {
  const std::size_t n = sorted.size();
  if (n == 0)
    throw state_error("sup_interval_discrepancy: empty sample");
  // Work with n * D to keep the counts exact.
  const T dn(static_cast<long long>(n));
  T hi(0);
  T lo(0);
  T prev_f(0);
  std::size_t i = 0;
  while (i < n) {
    const T& v = sorted[i];
    std::size_t j = i;
    while (j < n && sorted[j] == v)
      ++j;
    const T fv = cdf(v);
    if (!(fv >= prev_f) || fv > T(1))
      throw contract_error(
          "sup_interval_discrepancy: CDF is decreasing or leaves [0, 1]");
    prev_f = fv;
    const T nf = dn * fv;
    const T below = T(static_cast<long long>(i)) - nf;
    const T at = T(static_cast<long long>(j)) - nf;
    if (below < lo)
      lo = below;
    if (hi < at)
      hi = at;
    i = j;
  }
  return (hi - lo) / dn;
}

template <class Cdf>
double sup_interval_discrepancy(std::span<const double> sorted, Cdf&& cdf) {
  return sup_interval_discrepancy<double>(sorted, std::forward<Cdf>(cdf));
}

template <class Cdf>
double sup_interval_discrepancy(const SampleBuffer& buffer, Cdf&& cdf) {
  require_nonempty(buffer, "sup_interval_discrepancy");
  const auto sorted = buffer.sorted();
  return sup_interval_discrepancy(std::span<const double>(sorted),
                                  std::forward<Cdf>(cdf));
}

} // namespace dyadic
