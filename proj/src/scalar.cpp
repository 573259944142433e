#include "cforge/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cctype>
#include <cstdlib>
#include <string>

#include "cforge/errors.hpp"

namespace cforge {

namespace {

std::string trimmed(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

// Exact decimal (optionally with exponent) -> rational.
Rational parse_decimal(const std::string& s) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) negative = s[pos++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false, any_digit = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  long exponent = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    if (pos < s.size() && s[pos] == '+') ++pos;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), exponent);
    if (ec != std::errc()) throw Error(ErrorCode::ParseError, "bad exponent in '" + s + "'");
    pos = static_cast<std::size_t>(ptr - s.data());
  }
  if (!any_digit || pos != s.size()) throw Error(ErrorCode::ParseError, "not a number: '" + s + "'");
  mpz_class num(digits.empty() ? "0" : digits, 10);
  long shift = exponent - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift < 0 ? Rational(num, scale) : Rational(num * scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

double log_of(const Rational& q) {
  if (sgn(q) <= 0) throw Error(ErrorCode::InvalidArgument, "log of non-positive rational");
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log(mn) - std::log(md) + static_cast<double>(en - ed) * std::log(2.0);
}

Rational parse_rational(std::string_view text) {
  std::string s = trimmed(text);
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty number");
  auto slash = s.find('/');
  if (slash == std::string::npos) return parse_decimal(s);
  Rational num = parse_decimal(trimmed(std::string_view(s).substr(0, slash)));
  Rational den = parse_decimal(trimmed(std::string_view(s).substr(slash + 1)));
  if (sgn(den) == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
  return Rational(num / den);
}

double parse_double(std::string_view text) {
  std::string s = trimmed(text);
  if (s.find('/') != std::string::npos) return parse_rational(s).get_d();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw Error(ErrorCode::ParseError, "not a number: '" + s + "'");
  return v;
}

std::string ScalarTraits<double>::to_string(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace cforge
