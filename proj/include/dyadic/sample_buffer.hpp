#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "limits.hpp"

namespace dyadic {

/// An interval of the real line with independently open or closed ends.
/// Infinite endpoints are always treated as open.
struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool lower_closed = false;
  bool upper_closed = false;

  static Interval right_open(double a, double b) { return {a, b, true, false}; }
  static Interval closed(double a, double b) { return {a, b, true, true}; }
  static Interval open(double a, double b) { return {a, b, false, false}; }
  static Interval left_open(double a, double b) { return {a, b, false, true}; }
  static Interval whole_line() { return {}; }
  /// (-inf, t) or (-inf, t]
  static Interval below(double t, bool closed) {
    return {-std::numeric_limits<double>::infinity(), t, false, closed};
  }
  /// [t, inf) or (t, inf)
  static Interval above(double t, bool closed) {
    return {t, std::numeric_limits<double>::infinity(), closed, false};
  }

  bool contains(double x) const {
    const bool lo = lower_closed ? lower <= x : lower < x;
    const bool hi = upper_closed ? x <= upper : x < upper;
    return lo && hi;
  }
};

/// The observed prefix x_1..x_n. Keeps samples in arrival order plus a sorted
/// view held as a binary counter of sorted runs (run sizes are distinct powers
/// of two), which gives O(log n) amortized appends and O(log^2 n) rank queries
/// without mutating anything on the read side.
///
/// Single writer. Readers may run concurrently between appends.
class SampleBuffer {
public:
  SampleBuffer() = default;

  explicit SampleBuffer(std::span<const double> values) {
    samples_.reserve(values.size());
    for (double x : values)
      append(x);
  }

  /// Rejects non-finite values and |x| > 2^20 with range_error; the buffer
  /// is unchanged in that case.
  void append(double x) {
    if (!sample_in_range(x)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "sample " << x << " is non-finite or outside [-2^20, 2^20]";
      throw range_error(msg.str(), x);
    }
    samples_.push_back(x);
    runs_.push_back({x});
    while (runs_.size() >= 2 &&
           runs_[runs_.size() - 1].size() == runs_[runs_.size() - 2].size()) {
      auto top = std::move(runs_.back());
      runs_.pop_back();
      auto& below = runs_.back();
      std::vector<double> merged;
      merged.reserve(below.size() + top.size());
      std::merge(below.begin(), below.end(), top.begin(), top.end(),
                 std::back_inserter(merged));
      below = std::move(merged);
    }
  }

  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  /// Samples in arrival order.
  std::span<const double> samples() const noexcept { return samples_; }

  /// All samples in nondecreasing order. O(n).
  std::vector<double> sorted() const {
    std::vector<double> acc;
    acc.reserve(samples_.size());
    std::vector<double> tmp;
    for (auto run = runs_.rbegin(); run != runs_.rend(); ++run) {
      tmp.clear();
      tmp.reserve(acc.size() + run->size());
      std::merge(acc.begin(), acc.end(), run->begin(), run->end(),
                 std::back_inserter(tmp));
      acc.swap(tmp);
    }
    return acc;
  }

  /// Number of samples strictly below t.
  std::size_t count_below(double t) const {
    std::size_t c = 0;
    for (const auto& run : runs_)
      c += static_cast<std::size_t>(
          std::lower_bound(run.begin(), run.end(), t) - run.begin());
    return c;
  }

  /// Number of samples <= t.
  std::size_t count_at_most(double t) const {
    std::size_t c = 0;
    for (const auto& run : runs_)
      c += static_cast<std::size_t>(
          std::upper_bound(run.begin(), run.end(), t) - run.begin());
    return c;
  }

  /// Number of samples inside `a`, from two rank queries.
  std::size_t count_in(const Interval& a) const {
    const std::size_t hi = std::isinf(a.upper)
                               ? (a.upper > 0 ? size() : 0)
                               : (a.upper_closed ? count_at_most(a.upper)
                                                 : count_below(a.upper));
    const std::size_t lo = std::isinf(a.lower)
                               ? (a.lower < 0 ? 0 : size())
                               : (a.lower_closed ? count_below(a.lower)
                                                 : count_at_most(a.lower));
    return hi > lo ? hi - lo : 0;
  }

private:
  std::vector<double> samples_;
  std::vector<std::vector<double>> runs_;
};

inline void require_nonempty(const SampleBuffer& buffer, const char* op) {
  if (buffer.empty())
    throw state_error(std::string(op) + ": sample buffer is empty");
}

/// Fraction of samples inside `a`.
inline double empirical_measure(const SampleBuffer& buffer, const Interval& a) {
  require_nonempty(buffer, "empirical_measure");
  return static_cast<double>(buffer.count_in(a)) /
         static_cast<double>(buffer.size());
}

} // namespace dyadic
