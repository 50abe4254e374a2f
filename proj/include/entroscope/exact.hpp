#pragma once

// Exact arithmetic used throughout: big integers, rationals, and numbers of
// the form a + b*sqrt(d) with rational a, b and square-free d.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "entroscope/errors.hpp"

namespace entroscope {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline long double to_long_double(const Rational& q) {
  return q.convert_to<long double>();
}

/// Natural logarithm of a positive big integer, accurate for values far
/// beyond the range of double.
inline long double log_of(const Integer& value) {
  if (value <= 0) throw DomainError("log_of: nonpositive argument");
  const std::size_t bits = boost::multiprecision::msb(value) + 1;
  if (bits <= 60) return std::log(value.convert_to<long double>());
  const std::size_t shift = bits - 60;
  const Integer top = value >> shift;
  return std::log(top.convert_to<long double>()) +
         static_cast<long double>(shift) * std::log(2.0L);
}

inline long double log_of(const Rational& value) {
  return log_of(numerator_of(value)) - log_of(denominator_of(value));
}

/// log(sum exp(x_i)) without overflow.
class LogSumExp {
 public:
  void add(long double log_term) {
    if (empty_) {
      max_ = log_term;
      sum_ = 1.0L;
      empty_ = false;
    } else if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0L;
      max_ = log_term;
    }
  }
  bool empty() const { return empty_; }
  long double value() const {
    if (empty_) return -INFINITY;
    return max_ + std::log(sum_);
  }

 private:
  bool empty_ = true;
  long double max_ = 0;
  long double sum_ = 0;
};

inline Integer ipow(Integer base, std::uint64_t exponent) {
  Integer result = 1;
  while (exponent) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent) base *= base;
  }
  return result;
}

inline Rational rpow(const Rational& base, std::uint64_t exponent) {
  return Rational(ipow(numerator_of(base), exponent), ipow(denominator_of(base), exponent));
}

inline Integer floor_of(const Rational& q) {
  Integer n = numerator_of(q), d = denominator_of(q);
  Integer f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

inline Integer ceil_of(const Rational& q) { return -floor_of(-q); }

/// Decimal digit string to an integer (cpp_int would read a leading 0 as octal).
inline Integer decimal_integer(const std::string& digits) {
  std::size_t i = 0;
  bool negative = false;
  if (i < digits.size() && (digits[i] == '-' || digits[i] == '+')) negative = digits[i++] == '-';
  if (i == digits.size()) throw DomainError("bad integer literal '" + digits + "'");
  Integer value = 0;
  for (; i < digits.size(); ++i) {
    if (digits[i] < '0' || digits[i] > '9') throw DomainError("bad integer literal '" + digits + "'");
    value = value * 10 + (digits[i] - '0');
  }
  return negative ? -value : value;
}

/// Parses "3", "-2/7", or a finite decimal such as "0.25" or "-1.5e-3" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw DomainError("empty rational literal");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const Integer num = decimal_integer(s.substr(0, slash)), den = decimal_integer(s.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + s + "'");
    return Rational(num, den);
  }
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    exp10 = std::stol(s.substr(e + 1));
    s = s.substr(0, e);
  }
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  std::string digits;
  for (char c : s) {
    if (c == '.') {
      continue;
    }
    if (c < '0' || c > '9') throw DomainError("bad rational literal '" + std::string(text) + "'");
    digits.push_back(c);
  }
  if (auto dot = s.find('.'); dot != std::string::npos)
    exp10 -= static_cast<long>(s.size() - dot - 1);
  if (digits.empty()) throw DomainError("bad rational literal '" + std::string(text) + "'");
  Rational value{decimal_integer(digits)};
  const Integer ten_pow = ipow(Integer(10), static_cast<std::uint64_t>(std::labs(exp10)));
  value = exp10 >= 0 ? value * Rational(ten_pow) : value / Rational(ten_pow);
  return negative ? -value : value;
}

/// Exact rational for a double that came from a short decimal literal
/// (0.3 -> 3/10). Uses the shortest round-tripping decimal form.
inline Rational rational_from_double(double x) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return parse_rational(buf);
}

inline std::string to_string(const Rational& q) {
  if (denominator_of(q) == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

/// An element a + b*sqrt(d) of a real quadratic field (or of Q when b == 0).
/// Comparisons are exact; a floating filter short-circuits the easy cases.
class QuadNumber {
 public:
  QuadNumber() = default;
  QuadNumber(Rational a) : a_(std::move(a)) {}  // NOLINT: implicit from rationals is intended
  QuadNumber(long a) : a_(a) {}                 // NOLINT
  QuadNumber(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (d_ < 0) throw DomainError("QuadNumber: negative radicand");
    if (d_ <= 1) {
      a_ += b_ * d_;
      b_ = 0;
      d_ = 0;
    } else if (!square_free(d_)) {
      throw DomainError("QuadNumber: radicand " + std::to_string(d_) + " is not square-free");
    }
    if (b_ == 0) d_ = 0;
  }

  /// (sqrt(5) - 1) / 2
  static QuadNumber golden_conjugate() { return {Rational(-1, 2), Rational(1, 2), 5}; }

  const Rational& rational_part() const { return a_; }
  const Rational& radical_coefficient() const { return b_; }
  long radicand() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  long double approx() const {
    if (b_ == 0) return to_long_double(a_);
    return to_long_double(a_) + to_long_double(b_) * std::sqrt(static_cast<long double>(d_));
  }

  /// -1, 0, or +1.
  int sign() const {
    const int sa = a_.sign();
    const int sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 with b^2 d.
    const Rational lhs = a_ * a_;
    const Rational rhs = b_ * b_ * d_;
    const int mag = lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
    return sa > 0 ? mag : -mag;
  }

  Integer floor() const {
    if (b_ == 0) return floor_of(a_);
    Integer f(static_cast<long long>(std::floor(approx())));
    while (*this < QuadNumber(Rational(f))) f -= 1;
    while (!(*this < QuadNumber(Rational(f + 1)))) f += 1;
    return f;
  }

  /// Representative in [0, 1).
  QuadNumber frac() const { return *this - QuadNumber(Rational(floor())); }

  friend QuadNumber operator+(const QuadNumber& x, const QuadNumber& y) {
    const long d = common_radicand(x, y);
    return QuadNumber(x.a_ + y.a_, x.b_ + y.b_, d);
  }
  friend QuadNumber operator-(const QuadNumber& x, const QuadNumber& y) {
    const long d = common_radicand(x, y);
    return QuadNumber(x.a_ - y.a_, x.b_ - y.b_, d);
  }
  friend QuadNumber operator-(const QuadNumber& x) { return QuadNumber(-x.a_, -x.b_, x.d_); }
  friend QuadNumber operator*(const Rational& k, const QuadNumber& x) {
    return QuadNumber(k * x.a_, k * x.b_, x.d_);
  }

  friend bool operator==(const QuadNumber& x, const QuadNumber& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.d_ == y.d_);
  }
  friend std::strong_ordering operator<=>(const QuadNumber& x, const QuadNumber& y) {
    const long double dx = x.approx(), dy = y.approx();
    const long double scale = 1.0L + std::fabs(dx) + std::fabs(dy);
    if (dx - dy > 1e-12L * scale) return std::strong_ordering::greater;
    if (dy - dx > 1e-12L * scale) return std::strong_ordering::less;
    const int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string str() const {
    if (b_ == 0) return to_string(a_);
    return to_string(a_) + " + " + to_string(b_) + "*sqrt(" + std::to_string(d_) + ")";
  }

 private:
  static bool square_free(long d) {
    for (long p = 2; p * p <= d; ++p)
      if (d % (p * p) == 0) return false;
    return true;
  }
  static long common_radicand(const QuadNumber& x, const QuadNumber& y) {
    if (x.b_ == 0) return y.d_;
    if (y.b_ == 0) return x.d_;
    if (x.d_ != y.d_) throw DomainError("QuadNumber: mixed radicands");
    return x.d_;
  }

  Rational a_{0};
  Rational b_{0};
  long d_ = 0;
};

}  // namespace entroscope
