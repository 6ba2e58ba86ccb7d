#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace dyadic {

/// A right-continuous piecewise-constant function with finitely many pieces.
///
/// Piece p covers [breakpoints[p], breakpoints[p+1]) and takes the value
/// heights[p]; the function is zero outside [breakpoints.front(),
/// breakpoints.back()). Instances are always held in canonical form: equal
/// neighbouring heights are merged and zero pieces at either end are trimmed,
/// so two StepDensity values compare equal iff they are equal as functions.
/// The zero function has no breakpoints.
///
/// T is double for everyday use or an exact rational type for tests that
/// must hold with zero tolerance.
template <class T = double>
class StepDensity {
public:
  using value_type = T;

  StepDensity() = default;

  StepDensity(std::vector<T> breakpoints, std::vector<T> heights) {
    validate(breakpoints, heights);
    canonicalize(breakpoints, heights);
    breakpoints_ = std::move(breakpoints);
    heights_ = std::move(heights);
  }

  /// Density of the uniform law on [a, b).
  static StepDensity uniform(const T& a, const T& b) {
    if (!(a < b))
      throw contract_error("uniform density needs a < b");
    return StepDensity({a, b}, {T(1) / (b - a)});
  }

  const std::vector<T>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<T>& heights() const noexcept { return heights_; }
  std::size_t pieces() const noexcept { return heights_.size(); }
  bool is_zero() const noexcept { return heights_.empty(); }

  T operator()(const T& x) const {
    if (is_zero() || x < breakpoints_.front() || !(x < breakpoints_.back()))
      return T(0);
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return heights_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
  }

  /// Integral over the whole line.
  T total() const {
    T sum(0);
    for (std::size_t p = 0; p < heights_.size(); ++p)
      sum += heights_[p] * (breakpoints_[p + 1] - breakpoints_[p]);
    return sum;
  }

  bool nonnegative() const {
    return std::all_of(heights_.begin(), heights_.end(),
                       [](const T& h) { return !(h < T(0)); });
  }

  /// Nonnegative with total mass 1 up to `tolerance`.
  bool is_probability_density(double tolerance = 1e-12) const {
    if (!nonnegative())
      return false;
    const double mass = scalar_traits<T>::to_double(total());
    return std::fabs(mass - 1.0) <= tolerance;
  }

  friend bool operator==(const StepDensity& a, const StepDensity& b) {
    return a.breakpoints_ == b.breakpoints_ && a.heights_ == b.heights_;
  }

private:
  static void validate(const std::vector<T>& bps, const std::vector<T>& hs) {
    if (bps.empty() && hs.empty())
      return;
    if (bps.size() == 1 && hs.empty())
      return;
    if (bps.size() != hs.size() + 1)
      throw contract_error("step density needs exactly one height per gap (" +
                           std::to_string(bps.size()) + " breakpoints, " +
                           std::to_string(hs.size()) + " heights)");
    for (std::size_t p = 1; p < bps.size(); ++p)
      if (!(bps[p - 1] < bps[p]))
        throw contract_error("step density breakpoints must be strictly increasing");
    if constexpr (std::is_floating_point_v<T>) {
      for (const T& b : bps)
        if (!std::isfinite(b))
          throw contract_error("step density breakpoints must be finite");
      for (const T& h : hs)
        if (!std::isfinite(h))
          throw contract_error("step density heights must be finite");
    }
  }

  static void canonicalize(std::vector<T>& bps, std::vector<T>& hs) {
    if (hs.empty()) {
      bps.clear();
      return;
    }
    std::vector<T> out_b{bps.front()};
    std::vector<T> out_h;
    for (std::size_t p = 0; p < hs.size(); ++p) {
      if (!out_h.empty() && out_h.back() == hs[p])
        out_b.back() = bps[p + 1];
      else {
        out_h.push_back(hs[p]);
        out_b.push_back(bps[p + 1]);
      }
    }
    std::size_t first = 0;
    std::size_t last = out_h.size();
    while (first < last && out_h[first] == T(0))
      ++first;
    while (last > first && out_h[last - 1] == T(0))
      --last;
    if (first == last) {
      bps.clear();
      hs.clear();
      return;
    }
    bps.assign(out_b.begin() + static_cast<std::ptrdiff_t>(first),
               out_b.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    hs.assign(out_h.begin() + static_cast<std::ptrdiff_t>(first),
              out_h.begin() + static_cast<std::ptrdiff_t>(last));
  }

  std::vector<T> breakpoints_;
  std::vector<T> heights_;
};

/// Converts the representation, e.g. double -> exact rational (exact) or
/// rational -> double (rounded).
template <class To, class From>
StepDensity<To> step_cast(const StepDensity<From>& f) {
  std::vector<To> b;
  std::vector<To> h;
  b.reserve(f.breakpoints().size());
  h.reserve(f.heights().size());
  for (const From& v : f.breakpoints()) {
    if constexpr (std::is_same_v<From, double>)
      b.push_back(scalar_traits<To>::from_double(v));
    else
      b.push_back(static_cast<To>(v));
  }
  for (const From& v : f.heights()) {
    if constexpr (std::is_same_v<From, double>)
      h.push_back(scalar_traits<To>::from_double(v));
    else
      h.push_back(static_cast<To>(v));
  }
  return StepDensity<To>(std::move(b), std::move(h));
}

/// Exact integral of f over [a, b), summed piece by piece from the left.
template <class T>
T integrate(const StepDensity<T>& f, const T& a, const T& b) {
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(a) || !std::isfinite(b))
      throw contract_error("integrate: bounds must be finite");
  }
  if (b < a)
    throw contract_error("integrate: need a <= b");
  const auto& bps = f.breakpoints();
  const auto& hs = f.heights();
  T sum(0);
  for (std::size_t p = 0; p < hs.size(); ++p) {
    const T& lo = bps[p] < a ? a : bps[p];
    const T& hi = bps[p + 1] < b ? bps[p + 1] : b;
    if (lo < hi)
      sum += hs[p] * (hi - lo);
  }
  return sum;
}

/// Cumulative distribution function x -> integral of f over (-inf, x].
/// Continuous and piecewise linear.
template <class T>
T step_cdf(const StepDensity<T>& f, const T& x) {
  if (f.is_zero() || !(f.breakpoints().front() < x))
    return T(0);
  const T& hi = x < f.breakpoints().back() ? x : f.breakpoints().back();
  return integrate(f, f.breakpoints().front(), hi);
}

/// Sorted union of the breakpoints of f and g.
template <class T>
std::vector<T> merged_breakpoints(const StepDensity<T>& f,
                                  const StepDensity<T>& g) {
  std::vector<T> out;
  out.reserve(f.breakpoints().size() + g.breakpoints().size());
  std::merge(f.breakpoints().begin(), f.breakpoints().end(),
             g.breakpoints().begin(), g.breakpoints().end(),
             std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace dyadic
