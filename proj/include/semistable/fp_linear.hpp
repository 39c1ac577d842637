#pragma once

/**
 * @file fp_linear.hpp
 * @brief Matrices and subspaces over a prime field F_p.
 *
 * Subspaces are kept as reduced row-echelon bases so that equality is
 * structural. Intersections go through annihilators:
 * U n W = ann(ann U + ann W).
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace semistable {

using FpVector = std::vector<int>;

inline int mod_p(long long x, int p) {
  long long r = x % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

inline int inverse_mod(int a, int p) {
  a = mod_p(a, p);
  if (a == 0) throw std::domain_error("zero has no inverse mod p");
  int r = 1;
  for (int e = p - 2, b = a; e > 0; e >>= 1, b = b * b % p) {
    if (e & 1) r = r * b % p;
  }
  return r;
}

class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(int p, int rows, int cols) : p_(p), rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0) {}
  FpMatrix(int p, const std::vector<std::vector<int>>& rows) : p_(p) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ ? static_cast<int>(rows[0].size()) : 0;
    a_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_) throw std::invalid_argument("ragged matrix");
      for (int x : r) a_.push_back(mod_p(x, p));
    }
  }

  static FpMatrix identity(int p, int n) {
    FpMatrix m(p, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Block matrix [[a, b], [c, d]].
  static FpMatrix blocks(const FpMatrix& a, const FpMatrix& b, const FpMatrix& c, const FpMatrix& d) {
    FpMatrix m(a.p_, a.rows_ + c.rows_, a.cols_ + b.cols_);
    auto put = [&](const FpMatrix& s, int r0, int c0) {
      for (int i = 0; i < s.rows_; ++i) {
        for (int j = 0; j < s.cols_; ++j) m(r0 + i, c0 + j) = s(i, j);
      }
    };
    put(a, 0, 0);
    put(b, 0, a.cols_);
    put(c, a.rows_, 0);
    put(d, a.rows_, a.cols_);
    return m;
  }

  int p() const { return p_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  int operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  FpVector row(int i) const { return FpVector(a_.begin() + static_cast<long>(i) * cols_, a_.begin() + static_cast<long>(i + 1) * cols_); }

  FpMatrix operator*(const FpMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
    FpMatrix m(p_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int k = 0; k < cols_; ++k) {
        const int x = (*this)(i, k);
        if (!x) continue;
        for (int j = 0; j < o.cols_; ++j) m(i, j) = (m(i, j) + x * o(k, j)) % p_;
      }
    }
    return m;
  }
  FpVector operator*(const FpVector& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("vector length mismatch");
    FpVector out(rows_, 0);
    for (int i = 0; i < rows_; ++i) {
      long long s = 0;
      for (int j = 0; j < cols_; ++j) s += static_cast<long long>((*this)(i, j)) * v[j];
      out[i] = mod_p(s, p_);
    }
    return out;
  }
  FpMatrix operator+(const FpMatrix& o) const {
    FpMatrix m = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = (a_[i] + o.a_[i]) % p_;
    return m;
  }
  FpMatrix operator-(const FpMatrix& o) const {
    FpMatrix m = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = mod_p(a_[i] - o.a_[i], p_);
    return m;
  }
  FpMatrix scaled(int c) const {
    FpMatrix m = *this;
    for (auto& x : m.a_) x = mod_p(static_cast<long long>(x) * c, p_);
    return m;
  }

  bool is_zero() const { return std::all_of(a_.begin(), a_.end(), [](int x) { return x == 0; }); }
  bool operator==(const FpMatrix& o) const = default;
  bool operator<(const FpMatrix& o) const { return a_ < o.a_; }

  /// Rank by Gaussian elimination on a copy.
  int rank() const;
  bool invertible() const { return rows_ == cols_ && rank() == rows_; }
  FpMatrix inverse() const;

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < rows_; ++i) {
      s += i ? ", [" : "[";
      for (int j = 0; j < cols_; ++j) s += (j ? "," : "") + std::to_string((*this)(i, j));
      s += "]";
    }
    return s + "]";
  }

 private:
  int p_ = 2;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> a_;
};

namespace detail {

/// In-place reduced row echelon form; returns pivot columns.
inline std::vector<int> rref(std::vector<FpVector>& rows, int p, int ncols) {
  std::vector<int> pivots;
  std::size_t r = 0;
  for (int c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const int inv = inverse_mod(rows[r][c], p);
    for (auto& x : rows[r]) x = x * inv % p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const int f = rows[i][c];
      for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] = mod_p(rows[i][j] - f * rows[r][j], p);
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

}  // namespace detail

inline int FpMatrix::rank() const {
  std::vector<FpVector> rows;
  for (int i = 0; i < rows_; ++i) rows.push_back(row(i));
  return static_cast<int>(detail::rref(rows, p_, cols_).size());
}

inline FpMatrix FpMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of a non-square matrix");
  std::vector<FpVector> rows;
  for (int i = 0; i < rows_; ++i) {
    FpVector r = row(i);
    r.resize(2 * cols_, 0);
    r[cols_ + i] = 1;
    rows.push_back(r);
  }
  auto piv = detail::rref(rows, p_, cols_);
  if (static_cast<int>(piv.size()) != rows_) throw std::domain_error("singular matrix");
  FpMatrix m(p_, rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m(i, j) = rows[i][cols_ + j];
  }
  return m;
}

class Subspace {
 public:
  Subspace() = default;
  Subspace(int p, int n) : p_(p), n_(n) {}

  static Subspace zero(int p, int n) { return Subspace(p, n); }
  static Subspace whole(int p, int n) {
    std::vector<FpVector> e;
    for (int i = 0; i < n; ++i) {
      FpVector v(n, 0);
      v[i] = 1;
      e.push_back(v);
    }
    return span(p, n, e);
  }
  static Subspace span(int p, int n, std::vector<FpVector> vectors) {
    Subspace s(p, n);
    for (auto& v : vectors) {
      if (static_cast<int>(v.size()) != n) throw std::invalid_argument("vector length mismatch");
      for (auto& x : v) x = mod_p(x, p);
    }
    detail::rref(vectors, p, n);
    s.basis_ = std::move(vectors);
    return s;
  }
  /// Span of the standard basis vectors with the given indices.
  static Subspace coordinate(int p, int n, const std::vector<int>& indices) {
    std::vector<FpVector> vs;
    for (int i : indices) {
      FpVector v(n, 0);
      v[i] = 1;
      vs.push_back(v);
    }
    return span(p, n, vs);
  }

  int p() const { return p_; }
  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<FpVector>& basis() const { return basis_; }
  bool is_zero() const { return basis_.empty(); }

  bool contains(const FpVector& v) const {
    std::vector<FpVector> rows = basis_;
    rows.push_back(v);
    for (auto& x : rows.back()) x = mod_p(x, p_);
    return static_cast<int>(detail::rref(rows, p_, n_).size()) == dim();
  }
  bool contains(const Subspace& o) const {
    return std::all_of(o.basis_.begin(), o.basis_.end(), [&](const FpVector& v) { return contains(v); });
  }

  Subspace operator+(const Subspace& o) const {
    std::vector<FpVector> vs = basis_;
    vs.insert(vs.end(), o.basis_.begin(), o.basis_.end());
    return span(p_, n_, vs);
  }

  /// {x : <x, u> = 0 for all u in this}.
  Subspace annihilator() const {
    std::vector<FpVector> rows = basis_;
    const auto piv = detail::rref(rows, p_, n_);
    std::vector<char> is_piv(n_, 0);
    for (int c : piv) is_piv[c] = 1;
    std::vector<FpVector> ker;
    for (int free = 0; free < n_; ++free) {
      if (is_piv[free]) continue;
      FpVector v(n_, 0);
      v[free] = 1;
      for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = mod_p(-rows[r][free], p_);
      ker.push_back(v);
    }
    return span(p_, n_, ker);
  }

  Subspace intersect(const Subspace& o) const { return (annihilator() + o.annihilator()).annihilator(); }

  /// Image under a linear map (column-vector convention).
  Subspace image(const FpMatrix& m) const {
    std::vector<FpVector> vs;
    for (const auto& b : basis_) vs.push_back(m * b);
    return span(p_, m.rows(), vs);
  }

  /// Every vector of the subspace; p^dim of them.
  std::vector<FpVector> elements() const {
    std::vector<FpVector> out{FpVector(n_, 0)};
    for (const auto& b : basis_) {
      std::vector<FpVector> next;
      for (const auto& v : out) {
        for (int c = 0; c < p_; ++c) {
          FpVector w = v;
          for (int i = 0; i < n_; ++i) w[i] = (w[i] + c * b[i]) % p_;
          next.push_back(w);
        }
      }
      out = std::move(next);
    }
    return out;
  }

  bool operator==(const Subspace& o) const { return p_ == o.p_ && n_ == o.n_ && basis_ == o.basis_; }
  bool operator<(const Subspace& o) const { return basis_ < o.basis_; }

  std::string to_string() const {
    std::string s = "<";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      s += i ? ", (" : "(";
      for (int j = 0; j < n_; ++j) s += (j ? "," : "") + std::to_string(basis_[i][j]);
      s += ")";
    }
    return s + ">";
  }

 private:
  int p_ = 2;
  int n_ = 0;
  std::vector<FpVector> basis_;
};

inline Subspace kernel(const FpMatrix& m) {
  std::vector<FpVector> rows;
  for (int i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return Subspace::span(m.p(), m.cols(), rows).annihilator();
}

inline Subspace column_space(const FpMatrix& m) { return Subspace::whole(m.p(), m.cols()).image(m); }

/// Every subspace of F_p^n, by enumerating reduced echelon forms.
inline std::vector<Subspace> all_subspaces(int p, int n) {
  std::vector<Subspace> out;
  for (int k = 0; k <= n; ++k) {
    std::vector<int> piv(k);
    std::function<void(int, int)> choose = [&](int i, int start) {
      if (i == k) {
        // free positions: row r, column c > piv[r], c not a pivot
        std::vector<std::pair<int, int>> free;
        for (int r = 0; r < k; ++r) {
          for (int c = piv[r] + 1; c < n; ++c) {
            if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(r, c);
          }
        }
        std::vector<int> vals(free.size(), 0);
        while (true) {
          std::vector<FpVector> rows(k, FpVector(n, 0));
          for (int r = 0; r < k; ++r) rows[r][piv[r]] = 1;
          for (std::size_t f = 0; f < free.size(); ++f) rows[free[f].first][free[f].second] = vals[f];
          out.push_back(Subspace::span(p, n, rows));
          std::size_t f = 0;
          while (f < vals.size() && ++vals[f] == p) vals[f++] = 0;
          if (f == vals.size()) break;
        }
        return;
      }
      for (int c = start; c < n; ++c) {
        piv[i] = c;
        choose(i + 1, c + 1);
      }
    };
    choose(0, 0);
  }
  return out;
}

/// Uniform random invertible n x n matrix by rejection.
template <class Rng>
FpMatrix random_invertible(int p, int n, Rng& rng) {
  std::uniform_int_distribution<int> dist(0, p - 1);
  while (true) {
    FpMatrix m(p, n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
    }
    if (m.invertible()) return m;
  }
}

/// Order of the group generated by invertible matrices, by closure.
/// Returns cap + 1 as soon as more than `cap` elements are found.
inline std::size_t matrix_group_order(const std::vector<FpMatrix>& gens, std::size_t cap) {
  if (gens.empty()) return 1;
  const int n = gens[0].rows();
  std::set<FpMatrix> seen{FpMatrix::identity(gens[0].p(), n)};
  std::vector<FpMatrix> queue(seen.begin(), seen.end());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : gens) {
      FpMatrix x = queue[i] * g;
      if (seen.insert(x).second) {
        if (seen.size() > cap) return cap + 1;
        queue.push_back(std::move(x));
      }
    }
  }
  return seen.size();
}

inline std::vector<FpMatrix> matrix_group_elements(const std::vector<FpMatrix>& gens, std::size_t cap) {
  if (gens.empty()) throw std::invalid_argument("matrix_group_elements: no generators");
  const int n = gens[0].rows();
  std::set<FpMatrix> seen{FpMatrix::identity(gens[0].p(), n)};
  std::vector<FpMatrix> queue(seen.begin(), seen.end());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : gens) {
      FpMatrix x = queue[i] * g;
      if (seen.insert(x).second) {
        if (seen.size() > cap) throw std::runtime_error("matrix group closure exceeds cap " + std::to_string(cap));
        queue.push_back(std::move(x));
      }
    }
  }
  return queue;
}

}  // namespace semistable
