#include <gtest/gtest.h>

#include <random>

#include <semistable/factored_real.hpp>

using namespace semistable;

namespace {

// Oracle: raise everything to the lcm L of the exponent denominators, so
// a^L is an exact rational, and compare big rationals. No MPFR involved.
mpq_class exact_power(const FactoredReal& a, const mpz_class& L) {
  mpq_class v = 1;
  for (const auto& [p, e] : a.factors()) {
    const mpq_class scaled = mpq_class(e.numerator() * L, e.denominator());
    mpz_class k = scaled.get_num() / scaled.get_den();
    mpz_class pk;
    mpz_pow_ui(pk.get_mpz_t(), mpz_class(static_cast<unsigned long>(p)).get_mpz_t(), mpz_class(abs(k)).get_ui());
    if (k >= 0) v *= pk; else v /= pk;
  }
  v.canonicalize();
  return v;
}

mpz_class lcm_of_denominators(const FactoredReal& a) {
  mpz_class L = 1;
  for (const auto& [p, e] : a.factors()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), e.denominator().get_mpz_t());
  return L;
}

Ordering oracle_compare(const FactoredReal& a, const Rational& b) {
  const mpz_class L = lcm_of_denominators(a);
  const mpq_class lhs = exact_power(a, L);
  mpq_class rhs = 1;
  const mpq_class bq(b.numerator(), b.denominator());
  for (mpz_class i = 0; i < L; ++i) rhs *= bq;
  if (lhs < rhs) return Ordering::Less;
  if (lhs > rhs) return Ordering::Greater;
  return Ordering::Equal;
}

}  // namespace

TEST(FactoredReal, ParsesAndCanonicalises) {
  const auto a = parse_factored("5^23/20 * 6^4/5");
  EXPECT_EQ(a.exponent(2), Rational(4, 5));
  EXPECT_EQ(a.exponent(3), Rational(4, 5));
  EXPECT_EQ(a.exponent(5), Rational(23, 20));
  EXPECT_EQ(parse_factored("3^(7/6)"), parse_factored("3^14/12"));
  EXPECT_EQ(parse_factored("12^1/2"), parse_factored("2 * 3^1/2"));
  EXPECT_TRUE(parse_factored("7^0").is_one());
  EXPECT_THROW(parse_factored("5^"), std::invalid_argument);
  EXPECT_THROW(parse_factored("x^2"), std::invalid_argument);
  EXPECT_THROW(parse_factored("5 * * 3"), std::invalid_argument);
}

TEST(FactoredReal, StructuralIdentities) {
  EXPECT_EQ(parse_factored("5^23/20") * parse_factored("5^10/100"), parse_factored("5^5/4"));
  EXPECT_EQ(parse_factored("5^23/20") * parse_factored("5^50/500"), parse_factored("5^5/4"));
  EXPECT_EQ(parse_factored("3^7/6") * parse_factored("3^1/3"), parse_factored("3^3/2"));
  EXPECT_EQ(parse_factored("3^7/6") * parse_factored("3^54/162"), parse_factored("3^3/2"));
  EXPECT_EQ(parse_factored("3^7/6") * parse_factored("3^18/54"), parse_factored("3^3/2"));
  EXPECT_FALSE(parse_factored("5^23/20") * parse_factored("5^1/20") == parse_factored("5^5/4"));
}

TEST(FactoredReal, ThresholdComparisonsMatchExactOracle) {
  const std::pair<const char*, const char*> cases[] = {
      {"5^5/4 * 6^4/5", "31.645"}, {"5^6/5 * 6^4/5", "29.094"}, {"3^3/2 * 10^2/3", "24.258"},
      {"3^4/3 * 10^2/3", "20.221"}, {"3^35/24 * 10^2/3", "23.089"}, {"5^5/4 * 6^4/5", "31.349"},
      {"3^4/3 * 10^2/3", "20.082"}, {"2^1/2", "1.4142"}, {"2^1/2", "1.4143"}};
  for (const auto& [a, b] : cases) {
    const auto fa = parse_factored(a);
    const auto rb = Rational::parse(b);
    EXPECT_EQ(compare(fa, rb), oracle_compare(fa, rb)) << a << " vs " << b;
  }
}

TEST(FactoredReal, RandomComparisonsMatchExactOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 6), pick(0, 3), dec(1000, 60000);
  const std::uint64_t primes[] = {2, 3, 5, 7};
  for (int i = 0; i < 300; ++i) {
    FactoredReal a;
    for (int k = 0; k < 3; ++k) a = a * factored_power(primes[pick(rng)], Rational(num(rng), den(rng)));
    const Rational b(dec(rng), 1000);
    EXPECT_EQ(compare(a, b), oracle_compare(a, b)) << a << " vs " << b;
  }
}

TEST(FactoredReal, DecimalIntervalEnclosesAndIsNarrow) {
  const Rational width(1, 1000000);
  for (const char* s : {"5^5/4 * 6^4/5", "5^6/5 * 6^4/5", "3^3/2 * 10^2/3", "3^4/3 * 10^2/3", "3^35/24 * 10^2/3"}) {
    const auto a = parse_factored(s);
    const auto iv = decimal_interval(a, width);
    EXPECT_LE(iv.width(), width) << s;
    // lower <= a <= upper, checked by the exact oracle
    EXPECT_NE(oracle_compare(a, iv.lower), Ordering::Less) << s;
    EXPECT_NE(oracle_compare(a, iv.upper), Ordering::Greater) << s;
  }
}

TEST(FactoredReal, PrintedDecimalsReproduced) {
  const std::pair<const char*, const char*> cases[] = {{"5^5/4 * 6^4/5", "31.349"}, {"5^6/5 * 6^4/5", "28.925"},
                                                       {"3^3/2 * 10^2/3", "24.118"}, {"3^4/3 * 10^2/3", "20.082"},
                                                       {"3^35/24 * 10^2/3", "23.039"}};
  for (const auto& [a, printed] : cases) {
    const auto iv = decimal_interval(parse_factored(a), Rational(1, 1000000));
    const Rational p = Rational::parse(printed);
    EXPECT_LE(abs(iv.lower - p), Rational(2, 1000)) << a;
    EXPECT_LE(abs(iv.upper - p), Rational(2, 1000)) << a;
  }
}

TEST(FactoredReal, ExactValuesWhenExponentsAreIntegers) {
  const auto a = parse_factored("2^3 * 5^-1");
  EXPECT_TRUE(a.has_integer_exponents());
  EXPECT_EQ(exact_value(a), Rational(8, 5));
  const auto iv = decimal_interval(a, Rational(1, 1000000));
  EXPECT_EQ(iv.lower, Rational(8, 5));
  EXPECT_EQ(iv.upper, Rational(8, 5));
}

TEST(FactoredReal, ExponentDivisibility) {
  EXPECT_TRUE(exponent_divides(parse_factored("5^23/20 * 6^4/5"), parse_factored("5^5/4 * 6^4/5")));
  EXPECT_FALSE(exponent_divides(parse_factored("5^5/4"), parse_factored("5^23/20")));
}
