#pragma once

#include <optional>
#include <string>
#include <variant>

#include "continuous.hpp"
#include "step_density.hpp"

namespace dyadic {

/// The limiting density a source promises: a step density, a named
/// continuous family, or nothing (adversarial or degenerate output).
using LimitingDensity =
    std::variant<std::monostate, StepDensity<double>, ContinuousDensity>;

/// A producer of x_1, x_2, ... Infinite sources never return nullopt;
/// finite ones (replays) signal exhaustion that way. Single consumer.
class SequenceSource {
public:
  virtual ~SequenceSource() = default;

  virtual std::optional<double> next() = 0;
  virtual LimitingDensity limiting_density() const = 0;
  virtual std::string describe() const = 0;
};

} // namespace dyadic
