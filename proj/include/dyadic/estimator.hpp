#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "budget.hpp"
#include "cell.hpp"
#include "empirical.hpp"
#include "errors.hpp"
#include "limits.hpp"
#include "sample_buffer.hpp"
#include "source.hpp"
#include "step_density.hpp"
#include "variation.hpp"

namespace dyadic {

/// n -> b_n, the deepest partition level the estimator may consider.
class DepthSchedule {
public:
  /// b_n = max(1, floor(log2 n))
  static DepthSchedule log2() { return DepthSchedule(0, {}); }

  /// b_n = depth for every n
  static DepthSchedule fixed(int depth) {
    if (depth < 1)
      throw contract_error("fixed depth must be >= 1");
    return DepthSchedule(depth, {});
  }

  static DepthSchedule custom(std::function<int(std::size_t)> fn) {
    if (!fn)
      throw contract_error("custom depth schedule needs a callable");
    return DepthSchedule(0, std::move(fn));
  }

  int operator()(std::size_t n) const {
    if (fn_) {
      const int d = fn_(n);
      if (d < 1)
        throw contract_error("depth schedule returned b_n < 1");
      return d;
    }
    if (fixed_ > 0)
      return fixed_;
    if (n < 2)
      return 1;
    return static_cast<int>(std::bit_width(n)) - 1;
  }

  bool is_log2() const noexcept { return fixed_ == 0 && !fn_; }
  int fixed_depth() const noexcept { return fixed_; }

private:
  DepthSchedule(int fixed, std::function<int(std::size_t)> fn)
      : fixed_(fixed), fn_(std::move(fn)) {}

  int fixed_;
  std::function<int(std::size_t)> fn_;
};

struct EstimatorConfig {
  VariationBudget budget;
  DepthSchedule depth = DepthSchedule::log2();
  int level_cap = max_level;

  explicit EstimatorConfig(VariationBudget alpha,
                           DepthSchedule schedule = DepthSchedule::log2(),
                           int cap = max_level)
      : budget(std::move(alpha)), depth(std::move(schedule)), level_cap(cap) {
    if (level_cap < 1 || level_cap > max_level)
      throw contract_error("level cap must lie in [1, " +
                           std::to_string(max_level) + "]");
  }

  /// b_n, clamped to the level cap.
  int depth_for(std::size_t n) const { return std::min(depth(n), level_cap); }
};

/// The variations V(h_{n,k} : -i, i), i = 1..k, computed for one level.
struct LevelAudit {
  int level = 0;
  std::vector<double> window_variation;
  bool admissible = false;
};

struct EstimateReport {
  std::size_t n = 0;
  int depth = 0;                    // b_n
  std::optional<int> level;         // k_n, or nullopt when no level qualifies
  StepDensity<double> density;      // h_{n,k_n}, or the zero function
  std::vector<LevelAudit> audit;    // one entry per level 1..b_n
  int level_passes = 0;             // sorted passes made over the sample
};

namespace detail {

/// Exact test of lhs < a * b for nonnegative doubles, where lhs is exact.
inline bool less_than_product(double lhs, double a, double b) {
  const double p = a * b;
  const double err = std::fma(a, b, -p); // a*b == p + err exactly
  if (lhs < 0.5 * p)
    return true;
  if (lhs > 2.0 * p)
    return false;
  return lhs - p < err; // Sterbenz: the subtraction is exact here
}

} // namespace detail

/// Runs the level scan: for k = 1..b_n one pass over the sorted sample builds
/// the level-k cell counts, and the variations on every window [-i, i),
/// i <= k, come from those counts. The selected level is the largest k with
///   V(h_{n,k} : -i, i) < 4 alpha(i)   for all 1 <= i <= k,
/// compared exactly (V is 2^k S / n with S an integer).
inline EstimateReport estimate(const SampleBuffer& buffer,
                               const EstimatorConfig& config) {
  require_nonempty(buffer, "estimate");
  EstimateReport report;
  report.n = buffer.size();
  report.depth = config.depth_for(report.n);
  const auto sorted = buffer.sorted();
  const double n = static_cast<double>(report.n);

  std::vector<CellCount> best;
  for (int k = 1; k <= report.depth; ++k) {
    auto counts = level_counts(sorted, k);
    ++report.level_passes;
    const auto sums = window_jump_sums(counts, k, k);
    LevelAudit audit{k, {}, true};
    audit.window_variation.reserve(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) {
      const double scaled = std::ldexp(static_cast<double>(sums[i]), k);
      audit.window_variation.push_back(scaled / n);
      const double bound = 4.0 * config.budget(static_cast<std::int64_t>(i + 1));
      if (!detail::less_than_product(scaled, bound, n))
        audit.admissible = false;
    }
    if (audit.admissible) {
      report.level = k;
      best = std::move(counts);
    }
    report.audit.push_back(std::move(audit));
  }
  if (report.level)
    report.density =
        histogram_from_counts<double>(best, *report.level, report.n);
  return report;
}

/// k_n, or nullopt when no level in [1, b_n] meets the budget.
inline std::optional<int> select_level(const SampleBuffer& buffer,
                                       const EstimatorConfig& config) {
  return estimate(buffer, config).level;
}

/// Thrown by stream() when the source runs dry before the last checkpoint.
class source_exhausted : public std::runtime_error {
public:
  source_exhausted(std::vector<EstimateReport> completed, std::size_t consumed)
      : std::runtime_error("sequence source exhausted after " +
                           std::to_string(consumed) + " values"),
        completed_(std::move(completed)), consumed_(consumed) {}

  const std::vector<EstimateReport>& completed() const noexcept {
    return completed_;
  }
  std::size_t consumed() const noexcept { return consumed_; }

private:
  std::vector<EstimateReport> completed_;
  std::size_t consumed_;
};

inline void check_checkpoints(std::span<const std::size_t> checkpoints) {
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    if (checkpoints[c] == 0)
      throw contract_error("checkpoints must be positive");
    if (c > 0 && checkpoints[c] <= checkpoints[c - 1])
      throw contract_error("checkpoints must be strictly increasing");
  }
}

/// Pulls values from `source` and estimates at every checkpoint. The observer
/// sees the buffer snapshot together with each report.
template <class Observer>
std::vector<EstimateReport> stream(SequenceSource& source,
                                   const EstimatorConfig& config,
                                   std::span<const std::size_t> checkpoints,
                                   Observer&& observer) {
  check_checkpoints(checkpoints);
  SampleBuffer buffer;
  std::vector<EstimateReport> reports;
  reports.reserve(checkpoints.size());
  for (std::size_t target : checkpoints) {
    while (buffer.size() < target) {
      const auto x = source.next();
      if (!x)
        throw source_exhausted(std::move(reports), buffer.size());
      buffer.append(*x);
    }
    reports.push_back(estimate(buffer, config));
    observer(static_cast<const SampleBuffer&>(buffer), reports.back());
  }
  return reports;
}

inline std::vector<EstimateReport>
stream(SequenceSource& source, const EstimatorConfig& config,
       std::span<const std::size_t> checkpoints) {
  return stream(source, config, checkpoints,
                [](const SampleBuffer&, const EstimateReport&) {});
}

} // namespace dyadic
