#pragma once

// Arithmetic hooks that let the step-function algorithms run either in double
// precision or in exact rational arithmetic (boost::multiprecision::cpp_rational
// and friends). Anything providing + - * / comparisons, construction from
// integers, and an ADL-visible abs() works.

#include <cmath>
#include <cstdint>
#include <type_traits>

namespace dyadic {

template <class T>
struct scalar_traits {
  /// Exact conversion from a double (every finite double is a dyadic rational).
  static T from_double(double x) { return T(x); }
  static double to_double(const T& x) { return static_cast<double>(x); }
  /// 2^e, exactly, for |e| <= 62.
  static T pow2(int e) {
    if (e >= 0)
      return T(std::int64_t{1} << e);
    return T(1) / T(std::int64_t{1} << (-e));
  }
  /// floor(x) for a rational with ADL-visible numerator()/denominator().
  static std::int64_t floor_int(const T& x) {
    const auto num = numerator(x);
    const auto den = denominator(x);
    auto q = static_cast<decltype(num)>(num / den);
    if (num < 0 && q * den != num)
      q -= 1;
    return static_cast<std::int64_t>(q);
  }
};

template <>
struct scalar_traits<double> {
  static double from_double(double x) { return x; }
  static double to_double(double x) { return x; }
  static double pow2(int e) { return std::ldexp(1.0, e); }
  static std::int64_t floor_int(double x) {
    return static_cast<std::int64_t>(std::floor(x));
  }
};

template <class T>
T abs_value(const T& x) {
  using std::abs;
  return abs(x);
}

} // namespace dyadic
