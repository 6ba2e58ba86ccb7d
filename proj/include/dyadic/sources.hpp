#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cell.hpp"
#include "continuous.hpp"
#include "errors.hpp"
#include "scalar.hpp"
#include "source.hpp"
#include "step_density.hpp"

namespace dyadic {

/// h_k: height 2 on [2j 2^-k, (2j+1) 2^-k) for 0 <= j < 2^(k-1), 0 elsewhere.
template <class T = double>
StepDensity<T> rademacher_density(int k) {
  check_level(k);
  if (k > 24)
    throw contract_error("rademacher_density: k > 24 is too many pieces");
  const T width = scalar_traits<T>::pow2(-k);
  const std::int64_t cells = std::int64_t{1} << k;
  std::vector<T> bps;
  std::vector<T> hs;
  bps.reserve(static_cast<std::size_t>(cells));
  hs.reserve(static_cast<std::size_t>(cells));
  for (std::int64_t j = 0; j < cells; ++j) {
    bps.push_back(T(j) * width);
    hs.push_back(j % 2 == 0 ? T(2) : T(0));
  }
  bps.push_back(T(1));
  return StepDensity<T>(std::move(bps), std::move(hs));
}

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Base-2 radical inverse of i (bit reversal around the binary point).
inline double radical_inverse(std::uint64_t i) {
  double x = 0.0;
  double f = 0.5;
  while (i != 0) {
    if (i & 1u)
      x += f;
    i >>= 1;
    f *= 0.5;
  }
  return x;
}

/// Inverse CDF of h_k: maps [0, 1) onto the even blocks, order preserving.
inline double rademacher_quantile(double u, int k) {
  const double scaled = std::ldexp(u, k - 1);
  const double block = std::floor(scaled);
  return std::ldexp(2.0 * block + (scaled - block), -k);
}

} // namespace detail

/// Inverse-CDF sampler for a step density. Exact up to the final affine map.
class StepQuantile {
public:
  explicit StepQuantile(StepDensity<double> f) : f_(std::move(f)) {
    if (!f_.is_probability_density(1e-9))
      throw contract_error("sampling needs a valid probability density");
    double acc = 0.0;
    for (std::size_t p = 0; p < f_.pieces(); ++p) {
      const double mass =
          f_.heights()[p] * (f_.breakpoints()[p + 1] - f_.breakpoints()[p]);
      if (mass > 0) {
        pieces_.push_back(p);
        cum_.push_back(acc);
        acc += mass;
      }
    }
    total_ = acc;
  }

  double operator()(double u) const {
    const double target = u * total_;
    auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    const std::size_t slot = static_cast<std::size_t>(it - cum_.begin()) - 1;
    const std::size_t p = pieces_[slot];
    const double lo = f_.breakpoints()[p];
    const double hi = f_.breakpoints()[p + 1];
    const double x = lo + (target - cum_[slot]) / f_.heights()[p];
    return std::clamp(x, lo, std::nextafter(hi, lo));
  }

  const StepDensity<double>& density() const noexcept { return f_; }

private:
  StepDensity<double> f_;
  std::vector<std::size_t> pieces_;
  std::vector<double> cum_;
  double total_ = 0.0;
};

/// i.i.d. draws from a step density or a named continuous family.
class IidSource final : public SequenceSource {
public:
  IidSource(StepDensity<double> f, std::uint64_t seed)
      : target_(f), quantile_(StepQuantile(std::move(f))), rng_(seed),
        seed_(seed) {}

  IidSource(ContinuousDensity g, std::uint64_t seed)
      : target_(g), continuous_(g), rng_(seed), seed_(seed) {
    if (g.family() == ContinuousDensity::Family::normal)
      normal_.emplace(g.first_parameter(), g.second_parameter());
  }

  std::optional<double> next() override {
    if (quantile_)
      return (*quantile_)(detail::uniform01(rng_));
    if (normal_)
      return (*normal_)(rng_);
    const double u = detail::uniform01(rng_);
    switch (continuous_->family()) {
    case ContinuousDensity::Family::uniform: {
      const double a = continuous_->first_parameter();
      const double b = continuous_->second_parameter();
      return a + (b - a) * u;
    }
    case ContinuousDensity::Family::exponential:
      return -std::log1p(-u) / continuous_->first_parameter();
    case ContinuousDensity::Family::normal:
      break;
    }
    return std::nullopt;
  }

  LimitingDensity limiting_density() const override { return target_; }

  std::string describe() const override {
    std::ostringstream s;
    s << "iid:";
    if (continuous_)
      s << continuous_->describe();
    else
      s << "step(" << quantile_->density().pieces() << " pieces)";
    s << ",seed=" << seed_;
    return s.str();
  }

private:
  LimitingDensity target_;
  std::optional<StepQuantile> quantile_;
  std::optional<ContinuousDensity> continuous_;
  std::optional<std::normal_distribution<double>> normal_;
  std::mt19937_64 rng_;
  std::uint64_t seed_;
};

inline IidSource iid_source(StepDensity<double> f, std::uint64_t seed) {
  return IidSource(std::move(f), seed);
}

inline IidSource iid_source(ContinuousDensity g, std::uint64_t seed) {
  return IidSource(g, seed);
}

/// Gaussian AR(1): X_{t+1} = m + rho (X_t - m) + sigma sqrt(1 - rho^2) Z,
/// started from its stationary law N(m, sigma^2).
class Ar1Source final : public SequenceSource {
public:
  Ar1Source(double rho, double sigma, std::uint64_t seed, double mean = 0.0)
      : rho_(rho), sigma_(sigma), mean_(mean), rng_(seed), seed_(seed) {
    if (!(std::isfinite(rho) && std::fabs(rho) < 1))
      throw contract_error("AR(1) coefficient must satisfy |rho| < 1");
    if (!(std::isfinite(sigma) && sigma > 0))
      throw contract_error("AR(1) stationary sd must be > 0");
    innovation_sd_ = sigma * std::sqrt(1 - rho * rho);
  }

  std::optional<double> next() override {
    if (!state_)
      state_ = mean_ + sigma_ * std_normal_(rng_);
    else
      state_ = mean_ + rho_ * (*state_ - mean_) +
               innovation_sd_ * std_normal_(rng_);
    return state_;
  }

  LimitingDensity limiting_density() const override {
    return ContinuousDensity::normal(mean_, sigma_);
  }

  std::string describe() const override {
    std::ostringstream s;
    s.precision(17);
    s << "ar1:rho=" << rho_ << ",sigma=" << sigma_ << ",seed=" << seed_;
    return s.str();
  }

private:
  double rho_;
  double sigma_;
  double mean_;
  double innovation_sd_;
  std::optional<double> state_;
  std::normal_distribution<double> std_normal_{0.0, 1.0};
  std::mt19937_64 rng_;
  std::uint64_t seed_;
};

/// Random walk on the circle [0, 1): X_{t+1} = frac(X_t + width (2U - 1)),
/// started uniformly. Uniform is its stationary law; successive values are
/// dependent unless width = 1.
class CircleWalkSource final : public SequenceSource {
public:
  CircleWalkSource(double width, std::uint64_t seed)
      : width_(width), rng_(seed), seed_(seed) {
    if (!(width > 0 && width <= 1))
      throw contract_error("circle walk step width must lie in (0, 1]");
  }

  std::optional<double> next() override {
    if (!state_) {
      state_ = detail::uniform01(rng_);
    } else {
      double x = *state_ + width_ * (2 * detail::uniform01(rng_) - 1);
      x -= std::floor(x);
      state_ = x < 1.0 ? x : 0.0;
    }
    return state_;
  }

  LimitingDensity limiting_density() const override {
    return ContinuousDensity::uniform(0.0, 1.0);
  }

  std::string describe() const override {
    std::ostringstream s;
    s.precision(17);
    s << "circle-walk:width=" << width_ << ",seed=" << seed_;
    return s.str();
  }

private:
  double width_;
  std::optional<double> state_;
  std::mt19937_64 rng_;
  std::uint64_t seed_;
};

/// 1/2, 1/4, 3/4, 1/8, 5/8, ...: the radical inverses of 1, 2, 3, ...
class VanDerCorputSource final : public SequenceSource {
public:
  std::optional<double> next() override {
    return detail::radical_inverse(++index_);
  }

  LimitingDensity limiting_density() const override {
    return ContinuousDensity::uniform(0.0, 1.0);
  }

  std::string describe() const override { return "van-der-corput"; }

private:
  std::uint64_t index_ = 0;
};

inline VanDerCorputSource van_der_corput_source() { return {}; }

/// Upper bound on sup_A |mu_m(A) - l(A)| for the first m van der Corput
/// points, m >= 1: indices 0..m split into popcount(m+1) aligned blocks, each
/// putting one point in every cell of its level, so each block is off by
/// less than 2 on any interval; dropping index 0 costs at most 1 more.
inline double van_der_corput_envelope(std::uint64_t m) {
  if (m == 0)
    throw contract_error("discrepancy envelope needs m >= 1");
  return (2.0 * std::popcount(m + 1) + 1.0) / static_cast<double>(m);
}

/// Smallest M such that the envelope is <= eps for every m >= M, using the
/// decreasing majorant (2 log2(m + 1) + 3) / m.
inline std::uint64_t certified_discrepancy_index(double eps) {
  if (!(eps > 0))
    throw contract_error("certified_discrepancy_index needs eps > 0");
  auto majorant = [](std::uint64_t m) {
    const double dm = static_cast<double>(m);
    return (2.0 * std::log2(dm + 1.0) + 3.0) / dm;
  };
  std::uint64_t hi = 1;
  while (majorant(hi) > eps)
    hi *= 2;
  std::uint64_t lo = hi / 2; // majorant(lo) > eps or lo == 0
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (majorant(mid) > eps)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

/// A deterministic sequence with limiting density h_k: the van der Corput
/// sequence pushed through the inverse CDF of h_k. Its discrepancy against
/// mu_k is bounded by van_der_corput_envelope(m).
class StratifiedRademacherSource final : public SequenceSource {
public:
  explicit StratifiedRademacherSource(int k) : k_(k) {
    check_level(k);
    if (k > 24)
      throw contract_error("stratified Rademacher source supports k <= 24");
  }

  std::optional<double> next() override {
    return detail::rademacher_quantile(detail::radical_inverse(++index_), k_);
  }

  LimitingDensity limiting_density() const override {
    return rademacher_density<double>(k_);
  }

  std::string describe() const override {
    return "stratified-rademacher:" + std::to_string(k_);
  }

  int level() const noexcept { return k_; }

  /// m_k: from this index on, Delta_k of every prefix is <= eps.
  static std::uint64_t certified_index(double eps) {
    return certified_discrepancy_index(eps);
  }

private:
  int k_;
  std::uint64_t index_ = 0;
};

inline StratifiedRademacherSource stratified_rademacher_source(int k) {
  return StratifiedRademacherSource(k);
}

/// The same value forever; has no limiting density.
class ConstantSource final : public SequenceSource {
public:
  explicit ConstantSource(double value) : value_(value) {}
  std::optional<double> next() override { return value_; }
  LimitingDensity limiting_density() const override { return std::monostate{}; }
  std::string describe() const override {
    std::ostringstream s;
    s.precision(17);
    s << "constant:" << value_;
    return s.str();
  }

private:
  double value_;
};

/// Replays a finite list, then reports exhaustion.
class ReplaySource final : public SequenceSource {
public:
  explicit ReplaySource(std::vector<double> values,
                        LimitingDensity declared = std::monostate{})
      : values_(std::move(values)), declared_(std::move(declared)) {}

  std::optional<double> next() override {
    if (pos_ >= values_.size())
      return std::nullopt;
    return values_[pos_++];
  }
  LimitingDensity limiting_density() const override { return declared_; }
  std::string describe() const override {
    return "replay:" + std::to_string(values_.size());
  }

private:
  std::vector<double> values_;
  LimitingDensity declared_;
  std::size_t pos_ = 0;
};

} // namespace dyadic
