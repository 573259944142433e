#pragma once

// Arithmetic modes: double (default) and exact rationals backed by GMP.

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

namespace cforge {

using Rational = mpq_class;

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

inline constexpr double kDefaultTieTolerance = 1e-9;

// Natural log of a positive rational without converting it to double first,
// so very small or very large values do not underflow.
double log_of(const Rational& q);

// Parses "3/4", "0.75", "1e-3" or "2" into an exact rational.
Rational parse_rational(std::string_view text);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static double from_rational(const Rational& q) { return q.get_d(); }
  static double to_double(double x) { return x; }
  static double log(double x) { return std::log(x); }
  static double abs(double x) { return std::fabs(x); }
  static bool is_zero(double x) { return x == 0.0; }
  static std::string to_string(double x);
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
  static Rational from_rational(const Rational& q) { return q; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static double log(const Rational& x) { return log_of(x); }
  static Rational abs(const Rational& x) { return ::abs(x); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static std::string to_string(const Rational& x) { return x.get_str(); }
};

// Two hitting-time style values belong to one tie class when they agree
// exactly (rational) or within tol * max(1, |reference|) (float).
inline bool tie_equal(double a, double reference, double tol) {
  return std::fabs(a - reference) <= tol * std::fmax(1.0, std::fabs(reference));
}
inline bool tie_equal(const Rational& a, const Rational& reference, double) {
  return a == reference;
}

// Float parsing goes through strtod so that "0.3" lands on the nearest double.
double parse_double(std::string_view text);

template <Scalar T>
T scalar_from_string(std::string_view text) {
  if constexpr (std::same_as<T, double>) {
    return parse_double(text);
  } else {
    return parse_rational(text);
  }
}

}  // namespace cforge
