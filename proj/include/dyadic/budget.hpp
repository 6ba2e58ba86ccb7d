#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"
#include "step_density.hpp"
#include "variation.hpp"

namespace dyadic {

/// A positive nondecreasing function alpha on the positive integers: the
/// known bound on V(f : -i, i) for the class of admissible limiting densities.
class VariationBudget {
public:
  enum class Kind { constant, linear, exponential, table };

  /// What a tabled budget does past its last entry.
  enum class Extension { repeat_last, reject };

  /// alpha(i) = value
  static VariationBudget constant(double value) {
    VariationBudget b(Kind::constant);
    b.a_ = value;
    b.check_positive(value, "constant budget");
    return b;
  }

  /// alpha(i) = intercept + slope * i
  static VariationBudget linear(double intercept, double slope) {
    VariationBudget b(Kind::linear);
    b.a_ = intercept;
    b.b_ = slope;
    if (!std::isfinite(slope) || slope < 0)
      throw contract_error("linear budget needs a finite slope >= 0");
    b.check_positive(intercept + slope, "linear budget alpha(1)");
    return b;
  }

  /// alpha(i) = scale * ratio^(i-1)
  static VariationBudget exponential(double scale, double ratio) {
    VariationBudget b(Kind::exponential);
    b.a_ = scale;
    b.b_ = ratio;
    b.check_positive(scale, "exponential budget scale");
    if (!std::isfinite(ratio) || ratio < 1)
      throw contract_error("exponential budget needs ratio >= 1");
    return b;
  }

  /// alpha(i) = values[i-1]; validated positive and nondecreasing.
  static VariationBudget table(std::vector<double> values,
                               Extension ext = Extension::repeat_last) {
    if (values.empty())
      throw contract_error("tabled budget needs at least one value");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i]) || values[i] <= 0)
        throw contract_error("tabled budget values must be finite and > 0");
      if (i > 0 && values[i] < values[i - 1])
        throw contract_error("tabled budget must be nondecreasing (entry " +
                             std::to_string(i + 1) + ")");
    }
    VariationBudget b(Kind::table);
    b.table_ = std::move(values);
    b.extension_ = ext;
    return b;
  }

  double operator()(std::int64_t i) const {
    if (i < 1)
      throw contract_error("budget is defined for i >= 1 only");
    switch (kind_) {
    case Kind::constant:
      return a_;
    case Kind::linear:
      return a_ + b_ * static_cast<double>(i);
    case Kind::exponential:
      return a_ * std::pow(b_, static_cast<double>(i - 1));
    case Kind::table:
      break;
    }
    const auto idx = static_cast<std::size_t>(i - 1);
    if (idx < table_.size())
      return table_[idx];
    if (extension_ == Extension::reject)
      throw contract_error("tabled budget has no entry for i = " +
                           std::to_string(i));
    return table_.back();
  }

  Kind kind() const noexcept { return kind_; }

  /// Compact textual form, e.g. "const:3" or "linear:1,0.5".
  std::string describe() const {
    std::ostringstream s;
    s.precision(17);
    switch (kind_) {
    case Kind::constant:
      s << "const:" << a_;
      break;
    case Kind::linear:
      s << "linear:" << a_ << ',' << b_;
      break;
    case Kind::exponential:
      s << "exp:" << a_ << ',' << b_;
      break;
    case Kind::table:
      s << "table:";
      for (std::size_t i = 0; i < table_.size(); ++i)
        s << (i ? "," : "") << table_[i];
      break;
    }
    return s.str();
  }

private:
  explicit VariationBudget(Kind kind) : kind_(kind) {}

  static void check_positive(double v, const char* what) {
    if (!std::isfinite(v) || v <= 0)
      throw contract_error(std::string(what) + " must be finite and > 0");
  }

  Kind kind_;
  double a_ = 0;
  double b_ = 0;
  std::vector<double> table_;
  Extension extension_ = Extension::repeat_last;
};

/// Whether V(f : -i, i) < alpha(i) for every 1 <= i <= max_window, i.e.
/// whether f passes the first max_window constraints defining F(alpha).
template <class T>
bool budget_membership(const StepDensity<T>& f, const VariationBudget& alpha,
                       std::int64_t max_window) {
  check_window(max_window);
  for (std::int64_t i = 1; i <= max_window; ++i) {
    const T half(i);
    const T v = step_variation(f, T(-half), half);
    if (!(v < scalar_traits<T>::from_double(alpha(i))))
      return false;
  }
  return true;
}

} // namespace dyadic
