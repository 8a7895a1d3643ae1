#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>

#include "dws/rational.hpp"

namespace dws {

// Numeric value that stays an exact rational as long as every operand is
// rational and in range, and degrades to double otherwise. Comparisons on
// the exact path are exact; on the floating path they treat values within
// 1e-12 (relative to magnitude) as equal, so threshold checks report a
// boundary rather than an arbitrary side.
class Scalar {
 public:
  static constexpr double kCompareTolerance = 1e-12;

  Scalar() : Scalar(Rational(0)) {}
  Scalar(int v) : Scalar(Rational(v)) {}
  Scalar(std::int64_t v) : Scalar(Rational(v)) {}
  Scalar(Rational r) : exact_(true), rat_(r), val_(r.to_double()) {}

  static Scalar from_double(double d) {
    Scalar s;
    s.exact_ = false;
    s.rat_ = Rational(0);
    s.val_ = d;
    return s;
  }
  static Scalar infinity() { return from_double(std::numeric_limits<double>::infinity()); }

  bool exact() const { return exact_; }
  bool finite() const { return std::isfinite(val_); }
  double value() const { return val_; }
  const Rational& rational() const { return rat_; }  // valid only when exact()

  std::string str() const {
    if (exact_) return rat_.str();
    if (std::isinf(val_)) return val_ > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", val_);
    return buf;
  }

  friend Scalar operator-(const Scalar& a) {
    if (a.exact_) return Scalar(-a.rat_);
    return from_double(-a.val_);
  }
  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    return binop(a, b, [](const Rational& x, const Rational& y) { return x + y; },
                 [](double x, double y) { return x + y; });
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    return binop(a, b, [](const Rational& x, const Rational& y) { return x - y; },
                 [](double x, double y) { return x - y; });
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    return binop(a, b, [](const Rational& x, const Rational& y) { return x * y; },
                 [](double x, double y) { return x * y; });
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    return binop(a, b, [](const Rational& x, const Rational& y) { return x / y; },
                 [](double x, double y) { return x / y; });
  }

  // Three-way comparison: -1, 0 (equal/boundary), +1.
  int compare(const Scalar& o) const {
    if (exact_ && o.exact_) {
      if (rat_ < o.rat_) return -1;
      if (o.rat_ < rat_) return 1;
      return 0;
    }
    const double tol = kCompareTolerance * std::max({1.0, std::fabs(val_), std::fabs(o.val_)});
    if (std::isinf(val_) || std::isinf(o.val_)) {
      if (val_ == o.val_) return 0;
      return val_ < o.val_ ? -1 : 1;
    }
    const double d = val_ - o.val_;
    if (std::fabs(d) <= tol) return 0;
    return d < 0 ? -1 : 1;
  }

  friend bool operator<(const Scalar& a, const Scalar& b) { return a.compare(b) < 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return a.compare(b) > 0; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return a.compare(b) <= 0; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return a.compare(b) >= 0; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.compare(b) == 0; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return a.compare(b) != 0; }

  std::int64_t ceil_int() const {
    if (exact_) return rat_.ceil();
    const double r = std::round(val_);
    if (std::fabs(val_ - r) <= kCompareTolerance * std::max(1.0, std::fabs(val_)))
      return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(val_));
  }

  friend Scalar min(const Scalar& a, const Scalar& b) { return a.compare(b) <= 0 ? a : b; }
  friend Scalar max(const Scalar& a, const Scalar& b) { return a.compare(b) >= 0 ? a : b; }

 private:
  template <class RF, class DF>
  static Scalar binop(const Scalar& a, const Scalar& b, RF rf, DF df) {
    if (a.exact_ && b.exact_) {
      try {
        return Scalar(rf(a.rat_, b.rat_));
      } catch (const RationalOverflow&) {
        // fall through to the double path
      } catch (const std::domain_error&) {
        // division by exact zero: surface as double inf/nan
      }
    }
    return from_double(df(a.val_, b.val_));
  }

  bool exact_ = true;
  Rational rat_;
  double val_ = 0.0;
};

// Parses integers, fractions ("13/9"), decimals ("0.25") and scientific
// notation ("1e-3") into an exact Scalar when the value fits; anything
// else becomes an inexact double.
inline std::optional<Scalar> parse_scalar(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    try {
      const std::int64_t n = std::stoll(text.substr(0, slash));
      const std::int64_t d = std::stoll(text.substr(slash + 1));
      if (d == 0) return std::nullopt;
      return Scalar(Rational(n, d));
    } catch (...) {
      return std::nullopt;
    }
  }
  // decimal / scientific: mantissa * 10^exp
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') { neg = text[i] == '-'; ++i; }
  __int128 mantissa = 0;
  int frac_digits = 0;
  bool seen_digit = false, seen_dot = false, overflow = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (ch >= '0' && ch <= '9') {
      seen_digit = true;
      mantissa = mantissa * 10 + (ch - '0');
      if (mantissa > static_cast<__int128>(INT64_MAX)) overflow = true;
      if (seen_dot) ++frac_digits;
    } else if (ch == 'e' || ch == 'E') {
      break;
    } else {
      return std::nullopt;
    }
  }
  int exp10 = 0;
  if (i < text.size()) {  // exponent part
    try {
      exp10 = std::stoi(text.substr(i + 1));
    } catch (...) {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  exp10 -= frac_digits;
  if (!overflow && exp10 > -19 && exp10 < 19) {
    try {
      Rational r(static_cast<std::int64_t>(neg ? -mantissa : mantissa));
      Rational pow10(1);
      for (int k = 0; k < std::abs(exp10); ++k) pow10 = pow10 * Rational(10);
      return Scalar(exp10 >= 0 ? r * pow10 : r / pow10);
    } catch (const RationalOverflow&) {
      // fall through
    }
  }
  try {
    return Scalar::from_double(std::stod(text));
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace dws
