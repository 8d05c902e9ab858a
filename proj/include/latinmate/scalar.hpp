#pragma once

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace latinmate {

using Rational = boost::multiprecision::cpp_rational;

// Numeric policy for the two arithmetic modes. `tolerance` is the slack for
// equality-style checks (row sums, flow value, Γ bounds); `dust` is the level
// below which entries are treated as zero.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "double";
  static double tolerance() { return 1e-9; }
  static double dust() { return 1e-12; }
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
  static Rational tolerance() { return Rational(0); }
  static Rational dust() { return Rational(0); }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  // Parameters such as η come in as doubles; snap them to a 2^-20 grid so
  // denominators stay small.
  static Rational from_double(double x) {
    constexpr long long kScale = 1LL << 20;
    return Rational(static_cast<long long>(std::llround(x * kScale)), kScale);
  }
};

template <class T>
double to_double(const T& x) {
  return ScalarTraits<T>::to_double(x);
}

}  // namespace latinmate
