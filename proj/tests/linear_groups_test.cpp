#include <gtest/gtest.h>

#include <random>
#include <set>

#include <semistable/linear_groups.hpp>

using namespace semistable;

namespace {

// F_q[a]/(a^k) acting on itself: a is the k x k shift matrix.
FpMatrix shift(int q, int k) {
  FpMatrix n(q, k, k);
  for (int i = 0; i + 1 < k; ++i) n(i + 1, i) = 1;
  return n;
}

FpMatrix regular(int q, int k, const TruncatedPoly& x) {
  FpMatrix out(q, k, k);
  FpMatrix power = FpMatrix::identity(q, k);
  const FpMatrix n = shift(q, k);
  for (int i = 0; i < k; ++i) {
    out = out + power.scaled(x[i]);
    power = power * n;
  }
  return out;
}

std::vector<TruncatedPoly> all_polys(int q, int k) {
  std::vector<TruncatedPoly> out;
  int total = 1;
  for (int i = 0; i < k; ++i) total *= q;
  for (int c = 0; c < total; ++c) {
    TruncatedPoly x(k);
    int r = c;
    for (int i = 0; i < k; ++i, r /= q) x[i] = r % q;
    out.push_back(x);
  }
  return out;
}

TruncatedPoly square(int q, const TruncatedPoly& x) {
  const int k = static_cast<int>(x.size());
  TruncatedPoly y(k, 0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; i + j < k; ++j) y[i + j] = (y[i + j] + x[i] * x[j]) % q;
  }
  return y;
}

bool is_zero(const TruncatedPoly& x) {
  return std::all_of(x.begin(), x.end(), [](int c) { return c == 0; });
}

}  // namespace

TEST(LinearGroups, NilpotentPairOrders) {
  EXPECT_EQ(nilpotent_pair_group_order(3, 1), 3u);
  EXPECT_EQ(nilpotent_pair_group_order(3, 2), 81u);
  EXPECT_EQ(nilpotent_pair_group_order(3, 3), 2187u);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(27 % nilpotent_pair_group_order(3, k) == 0, k == 1) << k;
  EXPECT_THROW(nilpotent_pair_group_order(3, 3, 100), std::runtime_error);
}

TEST(LinearGroups, NilpotentPairMatchesBlockMatrixOracle) {
  for (int k = 1; k <= 3; ++k) {
    const FpMatrix id = FpMatrix::identity(3, k);
    const FpMatrix zero(3, k, k);
    const FpMatrix sigma = FpMatrix::blocks(id, shift(3, k), zero, id);
    const FpMatrix tau = FpMatrix::blocks(id, zero, id, id);
    EXPECT_EQ(nilpotent_pair_group_order(3, k), matrix_group_order({sigma, tau}, 100000)) << "k=" << k;
  }
}

TEST(LinearGroups, CommutatorRelationIffSquareZero) {
  for (int k = 1; k <= 3; ++k) {
    const FpMatrix id = FpMatrix::identity(3, k);
    const FpMatrix zero(3, k, k);
    const FpMatrix t = FpMatrix::blocks(id, zero, id, id);
    for (const auto& x : all_polys(3, k)) {
      const FpMatrix s = FpMatrix::blocks(id, regular(3, k, x), zero, id);
      const FpMatrix c = s.inverse() * t.inverse() * s * t;
      const bool oracle = c * s == s * c;
      EXPECT_EQ(commutator_commutes_with_sigma(3, k, x), oracle) << "k=" << k;
      EXPECT_EQ(oracle, is_zero(square(3, x))) << "k=" << k;
    }
  }
  // a itself: relation holds at k = 2 (a^2 = 0), fails at k = 3
  EXPECT_TRUE(commutator_commutes_with_sigma(3, 2, {0, 1}));
  EXPECT_FALSE(commutator_commutes_with_sigma(3, 3, {0, 1, 0}));
}

TEST(LinearGroups, UnipotentPairConstraint) {
  EXPECT_TRUE(unipotent_pair_constraint(1));
  EXPECT_TRUE(unipotent_pair_constraint(2));
  EXPECT_THROW(unipotent_pair_constraint(0), std::invalid_argument);
  // oracle for t = 1: a != 0 gives SL_2(F_3), order 24, which does not divide 27
  for (int a : {1, 2}) {
    const FpMatrix sigma(3, {{1, 0}, {1, 1}});
    const FpMatrix tau(3, {{1, a}, {0, 1}});
    EXPECT_EQ(matrix_group_order({sigma, tau}, 1000), 24u);
  }
  // a = 0 gives a group of order 3
  EXPECT_EQ(matrix_group_order({FpMatrix(3, {{1, 0}, {1, 1}}), FpMatrix::identity(3, 2)}, 1000), 3u);
}

TEST(LinearGroups, FixedPointsMatchBruteForce) {
  std::mt19937_64 rng(11);
  for (int ell : {2, 3, 5}) {
    for (int n = 1; n <= 4; ++n) {
      if (ell == 5 && n == 4) continue;
      for (int trial = 0; trial < 15; ++trial) {
        std::uniform_int_distribution<int> coef(0, ell - 1);
        const FpMatrix pb = random_invertible(ell, n, rng);
        const FpMatrix pinv = pb.inverse();
        std::vector<FpMatrix> gens;
        for (int g = 0; g < 2; ++g) {
          FpMatrix u = FpMatrix::identity(ell, n);
          for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) u(i, j) = coef(rng);
          }
          gens.push_back(pb * u * pinv);
        }
        std::uint64_t brute = 0;
        for (const auto& v : Subspace::whole(ell, n).elements()) {
          if (std::all_of(v.begin(), v.end(), [](int c) { return c == 0; })) continue;
          bool fixed = true;
          for (const auto& g : gens) {
            for (int i = 0; i < n && fixed; ++i) {
              long long s = 0;
              for (int j = 0; j < n; ++j) s += static_cast<long long>(g(i, j)) * v[j];
              fixed = mod_p(s, ell) == v[i];
            }
          }
          brute += fixed;
        }
        const auto got = ell_group_fixed_points(gens, ell);
        EXPECT_EQ(got, brute) << "ell=" << ell << " n=" << n;
        EXPECT_GE(got, static_cast<std::uint64_t>(ell - 1));  // an ell-group always fixes a line
      }
    }
  }
}

TEST(LinearGroups, FixedPointsRejectNonEllGroups) {
  const FpMatrix swap(3, {{0, 1}, {1, 0}});
  EXPECT_THROW(ell_group_fixed_points({swap}, 3), std::invalid_argument);
  EXPECT_THROW(ell_group_fixed_points({}, 3), std::invalid_argument);
}
