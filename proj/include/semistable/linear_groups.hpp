#pragma once

/**
 * @file linear_groups.hpp
 * @brief Small matrix groups: fixed points of ell-groups, and 2x2 matrices
 * over the truncated polynomial ring F_q[a]/(a^k).
 */

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fp_linear.hpp"

namespace semistable {

/// Number of nonzero vectors fixed by every generator. The generated group
/// must have ell-power order; that is checked by enumeration.
inline std::uint64_t ell_group_fixed_points(const std::vector<FpMatrix>& generators, int ell,
                                            std::size_t cap = 1000000) {
  if (generators.empty()) throw std::invalid_argument("ell_group_fixed_points: no generators");
  const int n = generators[0].rows();
  for (const auto& g : generators) {
    if (g.p() != ell || !g.invertible()) throw std::invalid_argument("ell_group_fixed_points: generators must be invertible over F_ell");
  }
  std::size_t order = matrix_group_elements(generators, cap).size();
  while (order % ell == 0) order /= ell;
  if (order != 1) throw std::invalid_argument("ell_group_fixed_points: generated group is not an ell-group");
  Subspace fixed = Subspace::whole(ell, n);
  const FpMatrix one = FpMatrix::identity(ell, n);
  for (const auto& g : generators) fixed = fixed.intersect(kernel(g - one));
  std::uint64_t count = 1;
  for (int i = 0; i < fixed.dim(); ++i) count *= static_cast<std::uint64_t>(ell);
  return count - 1;
}

// ---------------------------------------------------------------------------
// F_q[a]/(a^k)

/// Element of F_q[a]/(a^k) as coefficients of 1, a, ..., a^(k-1).
using TruncatedPoly = std::vector<int>;

class TruncatedPolyMatrix {
 public:
  TruncatedPolyMatrix(int q, int k) : q_(q), k_(k), e_(4, TruncatedPoly(k, 0)) {
    if (q < 2 || k < 1) throw std::invalid_argument("TruncatedPolyMatrix: need prime q and k >= 1");
  }

  static TruncatedPolyMatrix identity(int q, int k) {
    TruncatedPolyMatrix m(q, k);
    m.e_[0][0] = 1;
    m.e_[3][0] = 1;
    return m;
  }
  static TruncatedPoly constant(int q, int k, int c) {
    TruncatedPoly x(k, 0);
    x[0] = mod_p(c, q);
    return x;
  }
  /// The indeterminate a (zero when k = 1).
  static TruncatedPoly indeterminate(int k) {
    TruncatedPoly x(k, 0);
    if (k > 1) x[1] = 1;
    return x;
  }

  static TruncatedPolyMatrix from_entries(int q, int k, const TruncatedPoly& a, const TruncatedPoly& b,
                                          const TruncatedPoly& c, const TruncatedPoly& d) {
    TruncatedPolyMatrix m(q, k);
    m.e_ = {a, b, c, d};
    for (auto& x : m.e_) {
      if (static_cast<int>(x.size()) != k) throw std::invalid_argument("TruncatedPolyMatrix: entry has wrong length");
      for (auto& c : x) c = mod_p(c, q);
    }
    return m;
  }

  const TruncatedPoly& at(int i, int j) const { return e_[2 * i + j]; }

  TruncatedPoly ring_mul(const TruncatedPoly& x, const TruncatedPoly& y) const {
    TruncatedPoly z(k_, 0);
    for (int i = 0; i < k_; ++i) {
      if (!x[i]) continue;
      for (int j = 0; i + j < k_; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % q_;
    }
    return z;
  }
  TruncatedPoly ring_add(const TruncatedPoly& x, const TruncatedPoly& y) const {
    TruncatedPoly z(k_);
    for (int i = 0; i < k_; ++i) z[i] = (x[i] + y[i]) % q_;
    return z;
  }

  TruncatedPolyMatrix operator*(const TruncatedPolyMatrix& o) const {
    TruncatedPolyMatrix m(q_, k_);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) m.e_[2 * i + j] = ring_add(ring_mul(at(i, 0), o.at(0, j)), ring_mul(at(i, 1), o.at(1, j)));
    }
    return m;
  }
  TruncatedPolyMatrix operator-(const TruncatedPolyMatrix& o) const {
    TruncatedPolyMatrix m(q_, k_);
    for (int i = 0; i < 4; ++i) {
      for (int c = 0; c < k_; ++c) m.e_[i][c] = mod_p(e_[i][c] - o.e_[i][c], q_);
    }
    return m;
  }

  /// Inverse via the adjugate; the determinant must be a unit (nonzero
  /// constant term).
  TruncatedPolyMatrix inverse() const {
    const TruncatedPoly det = ring_add(ring_mul(at(0, 0), at(1, 1)), negate(ring_mul(at(0, 1), at(1, 0))));
    if (det[0] == 0) throw std::domain_error("TruncatedPolyMatrix: determinant is not a unit");
    // 1/det as a power series truncated at a^k
    TruncatedPoly inv(k_, 0);
    const int c0 = inverse_mod(det[0], q_);
    inv[0] = c0;
    for (int n = 1; n < k_; ++n) {
      int s = 0;
      for (int i = 1; i <= n; ++i) s = (s + det[i] * inv[n - i]) % q_;
      inv[n] = mod_p(-static_cast<long long>(s) * c0, q_);
    }
    return from_entries(q_, k_, ring_mul(inv, at(1, 1)), ring_mul(inv, negate(at(0, 1))),
                        ring_mul(inv, negate(at(1, 0))), ring_mul(inv, at(0, 0)));
  }

  bool is_zero() const {
    for (const auto& x : e_) {
      for (int c : x) {
        if (c) return false;
      }
    }
    return true;
  }

  bool operator==(const TruncatedPolyMatrix& o) const { return e_ == o.e_; }
  bool operator<(const TruncatedPolyMatrix& o) const { return e_ < o.e_; }

 private:
  TruncatedPoly negate(const TruncatedPoly& x) const {
    TruncatedPoly z(k_);
    for (int i = 0; i < k_; ++i) z[i] = mod_p(-x[i], q_);
    return z;
  }

  int q_;
  int k_;
  std::vector<TruncatedPoly> e_;  // row-major 2x2
};

/// sigma = [[1, a], [0, 1]] and tau = [[1, 0], [1, 1]] over F_q[a]/(a^k).
inline std::pair<TruncatedPolyMatrix, TruncatedPolyMatrix> nilpotent_pair(int q, int k) {
  const auto one = TruncatedPolyMatrix::constant(q, k, 1);
  const auto zero = TruncatedPolyMatrix::constant(q, k, 0);
  return {TruncatedPolyMatrix::from_entries(q, k, one, TruncatedPolyMatrix::indeterminate(k), zero, one),
          TruncatedPolyMatrix::from_entries(q, k, one, zero, one, one)};
}

/// |<sigma, tau>| in GL_2(F_q[a]/(a^k)) by closure; exceeding `cap`
/// elements is an error.
inline std::size_t nilpotent_pair_group_order(int q, int k, std::size_t cap = 1000000) {
  auto [sigma, tau] = nilpotent_pair(q, k);
  std::set<TruncatedPolyMatrix> seen{TruncatedPolyMatrix::identity(q, k)};
  std::vector<TruncatedPolyMatrix> queue(seen.begin(), seen.end());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto* g : {&sigma, &tau}) {
      TruncatedPolyMatrix x = queue[i] * *g;
      if (seen.insert(x).second) {
        if (seen.size() > cap) throw std::runtime_error("nilpotent_pair_group_order: closure exceeds cap");
        queue.push_back(std::move(x));
      }
    }
  }
  return seen.size();
}

/// Whether [s, t] s = s [s, t] for s = [[1, x], [0, 1]], t = [[1, 0], [1, 1]],
/// with [s, t] = s^-1 t^-1 s t.
inline bool commutator_commutes_with_sigma(int q, int k, const TruncatedPoly& x) {
  const auto one = TruncatedPolyMatrix::constant(q, k, 1);
  const auto zero = TruncatedPolyMatrix::constant(q, k, 0);
  const auto s = TruncatedPolyMatrix::from_entries(q, k, one, x, zero, one);
  const auto t = TruncatedPolyMatrix::from_entries(q, k, one, zero, one, one);
  const auto c = s.inverse() * t.inverse() * s * t;
  return c * s == s * c;
}

/// Block unipotent pair over F_3: sigma = [[I, 0], [I, I]], tau = [[I, a], [0, I]]
/// with a in M_t(F_3). True iff a = 0 is the only choice for which
/// |<sigma, tau>| divides 27.
inline bool unipotent_pair_constraint(int t, int group_order_bound = 27) {
  if (t < 1 || t > 3) throw std::invalid_argument("unipotent_pair_constraint: t must be in 1..3");
  constexpr int q = 3;
  const FpMatrix id = FpMatrix::identity(q, t);
  const FpMatrix zero(q, t, t);
  const FpMatrix sigma = FpMatrix::blocks(id, zero, id, id);
  const int entries = t * t;
  std::size_t total = 1;
  for (int i = 0; i < entries; ++i) total *= q;
  for (std::size_t code = 1; code < total; ++code) {  // code 0 is a = 0
    FpMatrix a(q, t, t);
    std::size_t c = code;
    for (int i = 0; i < entries; ++i, c /= q) a(i / t, i % t) = static_cast<int>(c % q);
    const FpMatrix tau = FpMatrix::blocks(id, a, zero, id);
    const std::size_t order = matrix_group_order({sigma, tau}, static_cast<std::size_t>(group_order_bound));
    if (order <= static_cast<std::size_t>(group_order_bound) && group_order_bound % order == 0) return false;
  }
  return true;
}

}  // namespace semistable
