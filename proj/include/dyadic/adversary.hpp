#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "empirical.hpp"
#include "errors.hpp"
#include "estimator.hpp"
#include "evaluation.hpp"
#include "sample_buffer.hpp"
#include "sources.hpp"
#include "step_density.hpp"

namespace dyadic {

/// A density estimation scheme: maps any finite prefix x_1..x_n to an
/// estimate. The adversary only ever calls it.
using Scheme = std::function<StepDensity<double>(std::span<const double>)>;

/// The adaptive histogram estimator as a scheme.
inline Scheme phi_star_scheme(EstimatorConfig config) {
  return [config = std::move(config)](std::span<const double> prefix) {
    return estimate(SampleBuffer(prefix), config).density;
  };
}

/// The level-k histogram, whatever the data.
inline Scheme fixed_level_scheme(int k) {
  check_level(k);
  return [k](std::span<const double> prefix) {
    return histogram<double>(SampleBuffer(prefix), k);
  };
}

/// What was measured when level k of the construction was closed at n_k.
struct LevelCertificate {
  int level = 0;
  std::size_t n = 0;              // n_k
  double l1_to_target = 0.0;      // integral |phi_{n_k} - h_k|, must be <= 1/4
  double delta = 0.0;             // Delta_k(prefix), must be <= 1/(k+1)
  double delta_threshold = 0.0;   // 1/(k+1)
  std::uint64_t m_next = 0;       // certified m_{k+1}
  std::size_t min_length = 0;     // k * m_{k+1}, n_k must reach it
  StepDensity<double> estimate;   // phi_{n_k}
};

struct AdversaryTranscript {
  std::vector<double> sequence;
  std::vector<LevelCertificate> certificates;
  /// integral |phi_{n_k} - phi_{n_{k+1}}| for consecutive closed levels
  std::vector<double> oscillations;
};

class adversary_error : public std::runtime_error {
public:
  enum class Kind {
    /// the scheme never came within 1/4 of h_k, so it already fails on a
    /// sequence whose limiting density is h_k
    scheme_not_consistent,
    /// the other conditions did not settle within the step budget
    budget_exhausted,
  };

  adversary_error(Kind kind, int level, AdversaryTranscript partial)
      : std::runtime_error(message(kind, level)), kind_(kind), level_(level),
        partial_(std::move(partial)) {}

  Kind kind() const noexcept { return kind_; }
  int level() const noexcept { return level_; }
  const AdversaryTranscript& partial() const noexcept { return partial_; }

  static std::string diagnostic(Kind kind) {
    return kind == Kind::scheme_not_consistent ? "scheme-not-consistent-for-h_k"
                                               : "budget-exhausted";
  }

private:
  static std::string message(Kind kind, int level) {
    return diagnostic(kind) + " at level " + std::to_string(level);
  }

  Kind kind_;
  int level_;
  AdversaryTranscript partial_;
};

struct AdversaryOptions {
  /// Maximum number of values appended while working on one level.
  std::size_t step_budget = 1'000'000;
  /// Candidate lengths grow by this factor between scheme evaluations.
  double growth = 1.25;
};

/// Builds x* level by level. At level k the prefix is extended with the
/// stratified level-k Rademacher sequence until, at some length n,
///   integral |phi_n - h_k| <= 1/4,  Delta_k(prefix) <= 1/(k+1),
///   n >= k * m_{k+1},
/// and n_k = n is recorded. Consecutive estimates are then at least 1/2 apart
/// in L1 while the limiting density of x* is uniform on [0, 1].
inline AdversaryTranscript adversarial_sequence(const Scheme& scheme,
                                                int levels,
                                                const AdversaryOptions& opts = {}) {
  if (levels < 2)
    throw contract_error("adversary needs at least 2 levels");
  if (levels > 24)
    throw contract_error("adversary supports at most 24 levels");
  if (!(opts.growth > 1.0))
    throw contract_error("adversary growth factor must exceed 1");
  if (opts.step_budget == 0)
    throw contract_error("adversary step budget must be positive");

  AdversaryTranscript t;
  SampleBuffer buffer;
  for (int k = 1; k <= levels; ++k) {
    auto source = stratified_rademacher_source(k);
    const auto target = rademacher_density<double>(k);
    auto cdf = [&target](double x) { return step_cdf(target, x); };

    LevelCertificate cert;
    cert.level = k;
    cert.delta_threshold = 1.0 / (k + 1);
    cert.m_next = certified_discrepancy_index(1.0 / (k + 2));
    cert.min_length = static_cast<std::size_t>(k) * cert.m_next;

    const std::size_t start = t.sequence.size();
    const std::size_t limit = start + opts.step_budget;
    std::size_t candidate = std::max(start + 1, cert.min_length);
    double last_l1 = std::numeric_limits<double>::infinity();
    bool closed = false;
    while (candidate <= limit) {
      while (t.sequence.size() < candidate) {
        const double x = *source.next();
        t.sequence.push_back(x);
        buffer.append(x);
      }
      auto est = scheme(std::span<const double>(t.sequence));
      last_l1 = l1_step(est, target);
      const double delta = sup_interval_discrepancy(buffer, cdf);
      if (last_l1 <= 0.25 && delta <= cert.delta_threshold) {
        cert.n = candidate;
        cert.l1_to_target = last_l1;
        cert.delta = delta;
        cert.estimate = std::move(est);
        closed = true;
        break;
      }
      const auto grown = static_cast<std::size_t>(
          std::ceil(static_cast<double>(candidate) * opts.growth));
      const std::size_t next = std::max(candidate + 1, grown);
      if (candidate < limit && next > limit)
        candidate = limit;
      else
        candidate = next;
    }
    if (!closed) {
      // never evaluated (budget below k * m_{k+1}) counts as exhaustion
      const auto kind = std::isfinite(last_l1) && last_l1 > 0.25
                            ? adversary_error::Kind::scheme_not_consistent
                            : adversary_error::Kind::budget_exhausted;
      throw adversary_error(kind, k, std::move(t));
    }
    if (!t.certificates.empty())
      t.oscillations.push_back(
          l1_step(t.certificates.back().estimate, cert.estimate));
    t.certificates.push_back(std::move(cert));
  }
  return t;
}

/// Probe class used to check uniformity of x*: every dyadic interval of
/// level 0..6 inside [0, 1) and the half-lines (-inf, c) and [c, inf) for
/// every level-6 grid point c in [0, 1].
inline std::vector<Interval> uniformity_probes() {
  std::vector<Interval> probes;
  for (int level = 0; level <= 6; ++level) {
    const int cells = 1 << level;
    for (int j = 0; j < cells; ++j)
      probes.push_back(Interval::right_open(std::ldexp(j, -level),
                                            std::ldexp(j + 1, -level)));
  }
  for (int j = 0; j <= 64; ++j) {
    const double c = std::ldexp(j, -6);
    probes.push_back(Interval::below(c, false));
    probes.push_back(Interval::above(c, true));
  }
  return probes;
}

/// Length of a probe clipped to [0, 1], i.e. its mass under uniform[0, 1].
inline double uniform_mass(const Interval& a) {
  const double lo = std::clamp(a.lower, 0.0, 1.0);
  const double hi = std::clamp(a.upper, 0.0, 1.0);
  return std::max(0.0, hi - lo);
}

} // namespace dyadic
