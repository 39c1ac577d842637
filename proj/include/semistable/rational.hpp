#pragma once

/**
 * @file rational.hpp
 * @brief Exact rationals for exponents, thresholds and interval endpoints.
 *
 * Thin value type over GMP's mpq_class that keeps the canonical form
 * (lowest terms, positive denominator) as a class invariant. Decimal strings
 * such as "31.645" parse exactly; nothing in this library ever goes through
 * a binary float.
 */

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semistable {

class Rational {
 public:
  Rational() = default;
  Rational(long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : value_(n) {}   // NOLINT(google-explicit-constructor)
  Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : value_(q) { value_.canonicalize(); }

  /// Parses "7", "-3/4", "31.645", "-0.5" or "1e-3". Whitespace around the
  /// literal is ignored; anything else throws std::invalid_argument.
  static Rational parse(std::string_view text);

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& mpq() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  /// Exact conversion when the value is an integer that fits.
  std::optional<std::int64_t> to_int64() const {
    if (!is_integer() || !value_.get_num().fits_slong_p()) return std::nullopt;
    return static_cast<std::int64_t>(value_.get_num().get_si());
  }

  mpz_class floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return q;
  }
  mpz_class ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return q;
  }

  double to_double() const { return value_.get_d(); }

  /// "n" for integers, "n/d" otherwise.
  std::string to_string() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    value_ /= o.value_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  mpq_class value_{0};
};

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  };
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r' || text.back() == '\n')) {
    text.remove_suffix(1);
  }
  if (text.empty()) return fail();

  auto is_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };

  bool negative = false;
  std::string_view body = text;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den)) return fail();
    mpz_class d{std::string(den)};
    if (d == 0) return fail();
    result = Rational(mpz_class(std::string(num)), d);
  } else {
    long exponent10 = 0;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = body.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!is_digits(exp_text) || exp_text.size() > 6) return fail();
      exponent10 = std::stol(std::string(exp_text));
      if (exp_negative) exponent10 = -exponent10;
      body = body.substr(0, e);
    }
    std::string digits;
    if (auto dot = body.find('.'); dot != std::string_view::npos) {
      std::string_view whole = body.substr(0, dot);
      std::string_view frac = body.substr(dot + 1);
      if ((!whole.empty() && !is_digits(whole)) || (!frac.empty() && !is_digits(frac)) ||
          (whole.empty() && frac.empty())) {
        return fail();
      }
      digits = std::string(whole) + std::string(frac);
      exponent10 -= static_cast<long>(frac.size());
    } else {
      if (!is_digits(body)) return fail();
      digits = std::string(body);
    }
    mpz_class mantissa(digits.empty() ? std::string("0") : digits);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent10 < 0 ? -exponent10 : exponent10));
    result = exponent10 < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale, mpz_class(1));
  }
  return negative ? -result : result;
}

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Renders r with exactly `digits` fractional decimal digits, rounding toward
/// -inf (round_up = false) or +inf (round_up = true).
inline std::string format_decimal(const Rational& r, unsigned digits, bool round_up) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  Rational scaled = r * Rational(scale, mpz_class(1));
  mpz_class n = round_up ? scaled.ceil() : scaled.floor();
  const bool negative = n < 0;
  if (negative) n = -n;
  std::string s = n.get_str();
  if (digits > 0) {
    if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
  }
  return negative ? "-" + s : s;
}

}  // namespace semistable
