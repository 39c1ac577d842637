#pragma once

/**
 * @file factored_real.hpp
 * @brief Positive reals of the form prod p^e with rational exponents.
 *
 * PowerProduct<Key> is the exponent-map algebra; FactoredReal instantiates it
 * over integer primes, FormalIdeal over symbolic prime names ("pi_K") whose
 * absolute norms are supplied separately.
 *
 * Comparison is exact. Structural equality and single-prime ratios are
 * decided on exponents alone; anything else evaluates sum(e * ln p) as an
 * MPFR interval with outward rounding and doubles the working precision until
 * the interval excludes zero. The ratio of two distinct canonical values is
 * never 1, so the loop terminates.
 */

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace semistable {

template <class Key>
class PowerProduct {
 public:
  using key_type = Key;
  using map_type = std::map<Key, Rational>;

  PowerProduct() = default;

  static PowerProduct one() { return {}; }
  static PowerProduct atom(Key base, Rational exponent = Rational(1)) {
    PowerProduct r;
    if (!exponent.is_zero()) r.factors_.emplace(std::move(base), std::move(exponent));
    return r;
  }

  const map_type& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  std::size_t support_size() const { return factors_.size(); }

  Rational exponent(const Key& k) const {
    auto it = factors_.find(k);
    return it == factors_.end() ? Rational(0) : it->second;
  }

  /// True when every exponent is an integer (the value is then rational).
  bool has_integer_exponents() const {
    return std::all_of(factors_.begin(), factors_.end(),
                       [](const auto& kv) { return kv.second.is_integer(); });
  }

  PowerProduct mul(const PowerProduct& o) const {
    PowerProduct r = *this;
    for (const auto& [k, e] : o.factors_) r.add_exponent(k, e);
    return r;
  }
  PowerProduct inverse() const { return pow(Rational(-1)); }
  PowerProduct div(const PowerProduct& o) const { return mul(o.inverse()); }

  PowerProduct pow(const Rational& r) const {
    PowerProduct out;
    if (r.is_zero()) return out;
    for (const auto& [k, e] : factors_) out.factors_.emplace(k, e * r);
    return out;
  }

  /// Exponent-wise a <= b over the union of supports (absent = 0).
  bool exponent_divides(const PowerProduct& b) const {
    for (const auto& [k, e] : factors_) {
      if (e > b.exponent(k)) return false;
    }
    for (const auto& [k, e] : b.factors_) {
      if (!factors_.count(k) && e.sign() < 0) return false;
    }
    return true;
  }

  friend PowerProduct operator*(const PowerProduct& a, const PowerProduct& b) { return a.mul(b); }
  friend PowerProduct operator/(const PowerProduct& a, const PowerProduct& b) { return a.div(b); }
  friend bool operator==(const PowerProduct& a, const PowerProduct& b) {
    return a.factors_ == b.factors_;
  }

  /// "2^4/5 * 3^4/5 * 5^23/20"; exponent 1 is omitted, the empty product is "1".
  std::string to_string() const {
    if (factors_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, e] : factors_) {
      if (!first) os << " * ";
      first = false;
      os << k;
      if (e != Rational(1)) os << '^' << e.to_string();
    }
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const PowerProduct& p) {
    return os << p.to_string();
  }

 private:
  void add_exponent(const Key& k, const Rational& e) {
    auto [it, inserted] = factors_.emplace(k, e);
    if (!inserted) it->second += e;
    if (it->second.is_zero()) factors_.erase(it);
  }

  map_type factors_;
};

using FactoredReal = PowerProduct<std::uint64_t>;
using FormalIdeal = PowerProduct<std::string>;

// ---------------------------------------------------------------------------
// construction from integers, rationals and text

namespace detail {

inline void factor_into(mpz_class n, int sign, std::map<std::uint64_t, Rational>& out) {
  if (n <= 0) throw std::domain_error("factored value must be positive");
  auto push = [&](std::uint64_t p, long k) {
    Rational& slot = out[p];
    slot += Rational(sign * k);
    if (slot.is_zero()) out.erase(p);
  };
  for (std::uint64_t p : {2u, 3u, 5u}) {
    long k = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= static_cast<unsigned long>(p);
      ++k;
    }
    if (k) push(p, k);
  }
  // wheel over 6k +- 1
  for (std::uint64_t p = 7, step = 4; p <= 1000000 && n > 1; p += step, step = 6 - step) {
    if (mpz_class(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p) > n) break;
    long k = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= static_cast<unsigned long>(p);
      ++k;
    }
    if (k) push(p, k);
  }
  if (n == 1) return;
  // 64-bit inputs: GMP's BPSW test is exact in this range
  if (!n.fits_ulong_p() || mpz_probab_prime_p(n.get_mpz_t(), 30) == 0) {
    throw std::domain_error("cannot factor " + n.get_str() + " by trial division");
  }
  push(n.get_ui(), 1);
}

}  // namespace detail

inline FactoredReal factored_from_rational(const Rational& q) {
  if (q.sign() <= 0) throw std::domain_error("factored value must be positive, got " + q.to_string());
  std::map<std::uint64_t, Rational> m;
  detail::factor_into(q.numerator(), 1, m);
  detail::factor_into(q.denominator(), -1, m);
  FactoredReal r;
  for (const auto& [p, e] : m) r = r * FactoredReal::atom(p, e);
  return r;
}

inline FactoredReal factored_from_integer(std::uint64_t n) {
  return factored_from_rational(Rational(mpz_class(static_cast<unsigned long>(n)), mpz_class(1)));
}

/// base^exponent with a composite base split into its prime factors.
inline FactoredReal factored_power(std::uint64_t base, const Rational& exponent) {
  return factored_from_integer(base).pow(exponent);
}

/// Parses `5^23/20 * 6^4/5`, `2^-1/2`, `3^(7/6)`, `31.645` or `31645/1000`.
/// A slash after `^` belongs to the exponent; a bare term is a rational.
inline FactoredReal parse_factored(std::string_view text) {
  FactoredReal out;
  std::string s(text);
  std::size_t start = 0;
  bool any = false;
  while (start <= s.size()) {
    std::size_t star = s.find('*', start);
    std::string term = s.substr(start, star == std::string::npos ? std::string::npos : star - start);
    term.erase(std::remove_if(term.begin(), term.end(), [](char c) { return c == ' ' || c == '\t'; }),
               term.end());
    if (term.empty()) throw std::invalid_argument("empty factor in '" + std::string(text) + "'");
    any = true;
    if (auto caret = term.find('^'); caret != std::string::npos) {
      std::string base = term.substr(0, caret);
      std::string exp = term.substr(caret + 1);
      if (exp.size() >= 2 && exp.front() == '(' && exp.back() == ')') exp = exp.substr(1, exp.size() - 2);
      Rational b = Rational::parse(base);
      if (!b.is_integer() || b.sign() <= 0) {
        throw std::invalid_argument("base must be a positive integer in '" + term + "'");
      }
      out = out * factored_from_rational(b).pow(Rational::parse(exp));
    } else {
      out = out * factored_from_rational(Rational::parse(term));
    }
    if (star == std::string::npos) break;
    start = star + 1;
  }
  if (!any) throw std::invalid_argument("empty factored literal");
  return out;
}

/// Exact value when all exponents are integers.
inline Rational exact_value(const FactoredReal& a) {
  if (!a.has_integer_exponents()) throw std::domain_error("value is irrational: " + a.to_string());
  mpz_class num = 1, den = 1;
  for (const auto& [p, e] : a.factors()) {
    mpz_class pk;
    const long k = e.numerator().get_si();
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k < 0 ? -k : k));
    (k < 0 ? den : num) *= pk;
  }
  return Rational(num, den);
}

/// Groups primes sharing an exponent into one composite base:
/// 2^4/5 * 3^4/5 * 5^23/20 renders as "6^4/5 * 5^23/20".
inline std::string to_grouped_string(const FactoredReal& a) {
  if (a.is_one()) return "1";
  std::vector<std::pair<Rational, mpz_class>> groups;
  for (const auto& [p, e] : a.factors()) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == e; });
    if (it == groups.end()) {
      groups.emplace_back(e, mpz_class(static_cast<unsigned long>(p)));
    } else {
      it->second *= static_cast<unsigned long>(p);
    }
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i) os << " * ";
    os << groups[i].second.get_str();
    if (groups[i].first != Rational(1)) os << '^' << groups[i].first.to_string();
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// interval evaluation

enum class Ordering { Less, Equal, Greater };

inline const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Equal: return "Equal";
    case Ordering::Greater: return "Greater";
  }
  return "?";
}

struct Precision {
  mpfr_prec_t start_bits = 64;
  mpfr_prec_t max_bits = 1 << 20;
};

namespace detail {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

/// Encloses sum(e * ln p) in [lo, hi] at the given precision.
inline void log_enclosure(const FactoredReal& a, mpfr_prec_t bits, Mpfr& lo, Mpfr& hi) {
  mpfr_set_zero(lo.get(), 1);
  mpfr_set_zero(hi.get(), 1);
  Mpfr ln_lo(bits), ln_hi(bits), t(bits);
  for (const auto& [p, e] : a.factors()) {
    mpfr_set_ui(ln_lo.get(), static_cast<unsigned long>(p), MPFR_RNDN);  // exact, p < 2^64
    mpfr_log(ln_lo.get(), ln_lo.get(), MPFR_RNDD);
    mpfr_set_ui(ln_hi.get(), static_cast<unsigned long>(p), MPFR_RNDN);
    mpfr_log(ln_hi.get(), ln_hi.get(), MPFR_RNDU);
    const mpz_class num = e.numerator();
    const mpz_class den = e.denominator();
    const bool positive = num > 0;
    // lower end of e * ln p
    mpfr_mul_z(t.get(), positive ? ln_lo.get() : ln_hi.get(), num.get_mpz_t(), MPFR_RNDD);
    mpfr_div_z(t.get(), t.get(), den.get_mpz_t(), MPFR_RNDD);
    mpfr_add(lo.get(), lo.get(), t.get(), MPFR_RNDD);
    // upper end
    mpfr_mul_z(t.get(), positive ? ln_hi.get() : ln_lo.get(), num.get_mpz_t(), MPFR_RNDU);
    mpfr_div_z(t.get(), t.get(), den.get_mpz_t(), MPFR_RNDU);
    mpfr_add(hi.get(), hi.get(), t.get(), MPFR_RNDU);
  }
}

inline Rational to_rational(const Mpfr& x) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x.get());
  return Rational(q);
}

}  // namespace detail

/// Sign of ln(a) decided by interval refinement; `bits_used` reports the
/// precision at which the decision was made (0 for structural decisions).
inline Ordering compare_to_one(const FactoredReal& a, Precision prec = {}, mpfr_prec_t* bits_used = nullptr) {
  if (bits_used) *bits_used = 0;
  if (a.is_one()) return Ordering::Equal;
  if (a.support_size() == 1) {
    return a.factors().begin()->second.sign() > 0 ? Ordering::Greater : Ordering::Less;
  }
  for (mpfr_prec_t bits = std::max<mpfr_prec_t>(prec.start_bits, MPFR_PREC_MIN); bits <= prec.max_bits;
       bits *= 2) {
    detail::Mpfr lo(bits), hi(bits);
    detail::log_enclosure(a, bits, lo, hi);
    if (bits_used) *bits_used = bits;
    if (mpfr_sgn(lo.get()) > 0) return Ordering::Greater;
    if (mpfr_sgn(hi.get()) < 0) return Ordering::Less;
  }
  throw std::runtime_error("comparison did not separate within " + std::to_string(prec.max_bits) +
                           " bits: " + a.to_string());
}

inline Ordering compare(const FactoredReal& a, const FactoredReal& b, Precision prec = {}) {
  if (a == b) return Ordering::Equal;
  return compare_to_one(a / b, prec);
}

inline Ordering compare(const FactoredReal& a, const Rational& b, Precision prec = {}) {
  return compare(a, factored_from_rational(b), prec);
}

inline bool exponent_divides(const FactoredReal& a, const FactoredReal& b) {
  return a.exponent_divides(b);
}

// ---------------------------------------------------------------------------
// decimal enclosures

struct DecimalInterval {
  Rational lower;
  Rational upper;
  unsigned digits = 0;  ///< fractional digits used for display

  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
  Rational width() const { return upper - lower; }

  /// "[31.349708, 31.349709]", or the single value when the interval is a point
  /// that is exact at `digits` places.
  std::string to_string() const {
    const std::string lo = format_decimal(lower, digits, false);
    const std::string hi = format_decimal(upper, digits, true);
    if (lower == upper && lo == hi) return lo;
    return "[" + lo + ", " + hi + "]";
  }
};

namespace detail {

/// Smallest k with 10^-k <= bound.
inline unsigned decimal_digits_for(const Rational& bound) {
  unsigned k = 0;
  Rational step(1);
  while (step > bound) {
    step /= Rational(10);
    ++k;
  }
  return k;
}

inline Rational snap(const Rational& x, unsigned digits, bool up) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  Rational scaled = x * Rational(scale, mpz_class(1));
  return Rational(up ? scaled.ceil() : scaled.floor(), scale);
}

}  // namespace detail

/// Enclosure of the value of `a` with upper - lower <= width. Endpoints lie on
/// a decimal grid fine enough that the display loses nothing.
inline DecimalInterval decimal_interval(const FactoredReal& a, const Rational& width, Precision prec = {}) {
  if (width.sign() <= 0) throw std::invalid_argument("decimal_interval width must be positive");
  const unsigned digits = detail::decimal_digits_for(width / Rational(4));
  if (a.has_integer_exponents()) {
    const Rational v = exact_value(a);
    return DecimalInterval{v, v, digits};
  }
  const Rational half = width / Rational(2);
  for (mpfr_prec_t bits = std::max<mpfr_prec_t>(prec.start_bits, MPFR_PREC_MIN); bits <= prec.max_bits;
       bits *= 2) {
    detail::Mpfr llo(bits), lhi(bits), vlo(bits), vhi(bits);
    detail::log_enclosure(a, bits, llo, lhi);
    mpfr_exp(vlo.get(), llo.get(), MPFR_RNDD);
    mpfr_exp(vhi.get(), lhi.get(), MPFR_RNDU);
    const Rational lo = detail::to_rational(vlo);
    const Rational hi = detail::to_rational(vhi);
    if (hi - lo <= half) {
      return DecimalInterval{detail::snap(lo, digits, false), detail::snap(hi, digits, true), digits};
    }
  }
  throw std::runtime_error("decimal_interval did not reach the requested width: " + a.to_string());
}

}  // namespace semistable
