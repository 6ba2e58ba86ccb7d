#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace dyadic {

/// Closed-form densities used as targets: uniform on [a, b), exponential with
/// a rate, and normal. These never become StepDensity values; they carry an
/// analytic pdf and CDF instead.
class ContinuousDensity {
public:
  enum class Family { uniform, exponential, normal };

  static ContinuousDensity uniform(double a, double b) {
    if (!(std::isfinite(a) && std::isfinite(b) && a < b))
      throw contract_error("uniform density needs finite a < b");
    return {Family::uniform, a, b};
  }

  static ContinuousDensity exponential(double rate) {
    if (!(std::isfinite(rate) && rate > 0))
      throw contract_error("exponential density needs a finite rate > 0");
    return {Family::exponential, rate, 0.0};
  }

  static ContinuousDensity normal(double mean, double sd) {
    if (!(std::isfinite(mean) && std::isfinite(sd) && sd > 0))
      throw contract_error("normal density needs a finite mean and sd > 0");
    return {Family::normal, mean, sd};
  }

  Family family() const noexcept { return family_; }
  double first_parameter() const noexcept { return p_; }
  double second_parameter() const noexcept { return q_; }

  double pdf(double x) const {
    switch (family_) {
    case Family::uniform:
      return (p_ <= x && x < q_) ? 1.0 / (q_ - p_) : 0.0;
    case Family::exponential:
      return x >= 0 ? p_ * std::exp(-p_ * x) : 0.0;
    case Family::normal: {
      const double z = (x - p_) / q_;
      return std::exp(-0.5 * z * z) / (q_ * std::sqrt(2 * std::numbers::pi));
    }
    }
    return 0.0;
  }

  double cdf(double x) const {
    switch (family_) {
    case Family::uniform:
      return x <= p_ ? 0.0 : (x >= q_ ? 1.0 : (x - p_) / (q_ - p_));
    case Family::exponential:
      return x <= 0 ? 0.0 : -std::expm1(-p_ * x);
    case Family::normal:
      return 0.5 * std::erfc(-(x - p_) / (q_ * std::numbers::sqrt2));
    }
    return 0.0;
  }

  double variance() const {
    switch (family_) {
    case Family::uniform:
      return (q_ - p_) * (q_ - p_) / 12.0;
    case Family::exponential:
      return 1.0 / (p_ * p_);
    case Family::normal:
      return q_ * q_;
    }
    return 0.0;
  }

  /// Point of maximal density (left end for uniform).
  double mode() const {
    switch (family_) {
    case Family::uniform:
      return p_;
    case Family::exponential:
      return 0.0;
    case Family::normal:
      return p_;
    }
    return 0.0;
  }

  double peak() const { return pdf(mode()); }

  /// V(f : -inf, inf). Every family here is unimodal with zero tails, so this
  /// is twice the peak height.
  double total_variation() const { return 2.0 * peak(); }

  /// V(f : a, b) with the right-continuous convention used for step
  /// functions: jumps exactly at a do not count.
  double window_variation(double a, double b) const {
    if (!(a < b))
      throw contract_error("window_variation: need a < b");
    switch (family_) {
    case Family::uniform: {
      double v = 0.0;
      if (a < p_ && p_ < b)
        v += peak();
      if (a < q_ && q_ < b)
        v += peak();
      return v;
    }
    case Family::exponential:
      if (b <= 0)
        return 0.0;
      if (a < 0)
        return p_ + (p_ - pdf(b));
      return pdf(a) - pdf(b);
    case Family::normal:
      if (a <= p_ && p_ <= b)
        return (peak() - pdf(a)) + (peak() - pdf(b));
      return std::fabs(pdf(a) - pdf(b));
    }
    return 0.0;
  }

  /// Interior points of [a, b) that split it into pieces on which
  /// pdf(x) - level keeps one sign: jumps, the mode, and level crossings.
  std::vector<double> sign_splits(double level, double a, double b) const {
    std::vector<double> pts;
    auto keep = [&](double x) {
      if (a < x && x < b)
        pts.push_back(x);
    };
    switch (family_) {
    case Family::uniform:
      keep(p_);
      keep(q_);
      break;
    case Family::exponential:
      keep(0.0);
      if (level > 0 && level < p_)
        keep(std::log(p_ / level) / p_);
      break;
    case Family::normal:
      keep(p_);
      if (level > 0 && level < peak()) {
        const double r = q_ * std::sqrt(2.0 * std::log(peak() / level));
        keep(p_ - r);
        keep(p_ + r);
      }
      break;
    }
    std::sort(pts.begin(), pts.end());
    return pts;
  }

  /// Interval holding all but a negligible amount of mass: the support for
  /// uniform, [0, 40 / rate] for exponential, mean +- 8 sd for normal.
  std::pair<double, double> natural_window() const {
    switch (family_) {
    case Family::uniform:
      return {p_, q_};
    case Family::exponential:
      return {0.0, 40.0 / p_};
    case Family::normal:
      return {p_ - 8 * q_, p_ + 8 * q_};
    }
    return {0.0, 0.0};
  }

  std::string describe() const {
    std::ostringstream s;
    s.precision(17);
    switch (family_) {
    case Family::uniform:
      s << "uniform(" << p_ << "," << q_ << ")";
      break;
    case Family::exponential:
      s << "exponential(" << p_ << ")";
      break;
    case Family::normal:
      s << "normal(" << p_ << "," << q_ << ")";
      break;
    }
    return s.str();
  }

private:
  ContinuousDensity(Family f, double p, double q) : family_(f), p_(p), q_(q) {}

  Family family_;
  double p_;
  double q_;
};

/// Membership of a named family in F(alpha = const 2 gamma) via the variance
/// thresholds: uniform Var > 1/(12 gamma^2), exponential Var > 1/gamma^2,
/// normal Var > 1/(2 pi gamma^2). Equivalent to total_variation() < 2 gamma.
inline bool variance_admissible(const ContinuousDensity& g, double gamma) {
  if (!(gamma > 0))
    throw contract_error("variance_admissible: gamma must be > 0");
  const double g2 = gamma * gamma;
  switch (g.family()) {
  case ContinuousDensity::Family::uniform:
    return g.variance() > 1.0 / (12.0 * g2);
  case ContinuousDensity::Family::exponential:
    return g.variance() > 1.0 / g2;
  case ContinuousDensity::Family::normal:
    return g.variance() > 1.0 / (2.0 * std::numbers::pi * g2);
  }
  return false;
}

} // namespace dyadic
