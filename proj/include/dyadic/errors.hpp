#pragma once

#include <stdexcept>
#include <string>

namespace dyadic {

/// Violated precondition on an argument (bad level, decreasing budget, a >= b, ...).
class contract_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A sample that is non-finite or outside the supported magnitude.
class range_error : public std::out_of_range {
public:
  range_error(const std::string& what, double value)
      : std::out_of_range(what), value_(value) {}

  double value() const noexcept { return value_; }

private:
  double value_;
};

/// Operation is undefined for the current state, e.g. an empty sample buffer.
class state_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace dyadic
