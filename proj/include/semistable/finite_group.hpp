#pragma once

/**
 * @file finite_group.hpp
 * @brief Finite groups as validated multiplication tables, and the
 * brute-force structure queries run on them.
 *
 * Element 0 is the identity. Everything here is exhaustive enumeration;
 * the library only ever holds groups of order <= 125.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace semistable {

using Subgroup = std::vector<int>;  ///< sorted element indices

class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup(std::vector<std::vector<int>>{{0}}, "C1") {}

  /// Validates closure, identity at 0, inverses and associativity.
  FiniteGroup(const std::vector<std::vector<int>>& table, std::string name) : name_(std::move(name)) {
    n_ = static_cast<int>(table.size());
    if (n_ == 0) throw std::invalid_argument(name_ + ": empty table");
    table_.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (int a = 0; a < n_; ++a) {
      if (static_cast<int>(table[a].size()) != n_) throw std::invalid_argument(name_ + ": table is not square");
      std::vector<char> seen(n_, 0);
      for (int b = 0; b < n_; ++b) {
        const int c = table[a][b];
        if (c < 0 || c >= n_) throw std::invalid_argument(name_ + ": product out of range");
        if (seen[c]) throw std::invalid_argument(name_ + ": row " + std::to_string(a) + " is not a permutation");
        seen[c] = 1;
        table_[idx(a, b)] = c;
      }
    }
    for (int a = 0; a < n_; ++a) {
      if (mul(0, a) != a || mul(a, 0) != a) throw std::invalid_argument(name_ + ": 0 is not the identity");
    }
    inv_.assign(n_, -1);
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        if (mul(a, b) == 0) {
          inv_[a] = b;
          break;
        }
      }
      if (inv_[a] < 0 || mul(inv_[a], a) != 0) throw std::invalid_argument(name_ + ": missing inverse");
    }
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        const int ab = mul(a, b);
        for (int c = 0; c < n_; ++c) {
          if (mul(ab, c) != mul(a, mul(b, c))) throw std::invalid_argument(name_ + ": not associative");
        }
      }
    }
  }

  /// Closure of `gens` under `op`, identity first, as a validated group.
  template <class T, class Op>
  static FiniteGroup generate(const T& identity, const std::vector<T>& gens, Op op, std::string name,
                              std::size_t cap = 4096) {
    std::vector<T> elems{identity};
    std::map<T, int> index{{identity, 0}};
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (const T& g : gens) {
        T x = op(elems[i], g);
        if (!index.count(x)) {
          if (elems.size() >= cap) throw std::runtime_error(name + ": closure exceeds cap");
          index.emplace(x, static_cast<int>(elems.size()));
          elems.push_back(std::move(x));
        }
      }
    }
    std::vector<std::vector<int>> table(elems.size(), std::vector<int>(elems.size()));
    for (std::size_t a = 0; a < elems.size(); ++a) {
      for (std::size_t b = 0; b < elems.size(); ++b) table[a][b] = index.at(op(elems[a], elems[b]));
    }
    return FiniteGroup(table, std::move(name));
  }

  int order() const { return n_; }
  const std::string& name() const { return name_; }
  FiniteGroup renamed(std::string name) const {
    FiniteGroup g = *this;
    g.name_ = std::move(name);
    return g;
  }
  int mul(int a, int b) const { return table_[idx(a, b)]; }
  int inv(int a) const { return inv_[a]; }
  int commutator(int a, int b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }

  int element_order(int a) const {
    int k = 1;
    for (int x = a; x != 0; x = mul(x, a)) ++k;
    return k;
  }

  bool is_abelian() const {
    for (int a = 0; a < n_; ++a) {
      for (int b = a + 1; b < n_; ++b) {
        if (mul(a, b) != mul(b, a)) return false;
      }
    }
    return true;
  }

  /// Subgroup generated by `gens`.
  Subgroup closure(const std::vector<int>& gens) const {
    std::vector<char> in(n_, 0);
    std::vector<int> out{0};
    in[0] = 1;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (int g : gens) {
        const int x = mul(out[i], g);
        if (!in[x]) {
          in[x] = 1;
          out.push_back(x);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Greedy small generating set: take elements of largest order first.
  std::vector<int> generators() const {
    std::vector<int> by_order(n_);
    std::iota(by_order.begin(), by_order.end(), 0);
    std::stable_sort(by_order.begin(), by_order.end(),
                     [&](int a, int b) { return element_order(a) > element_order(b); });
    std::vector<int> gens;
    Subgroup current{0};
    for (int a : by_order) {
      if (static_cast<int>(current.size()) == n_) break;
      if (!std::binary_search(current.begin(), current.end(), a)) {
        gens.push_back(a);
        current = closure(gens);
      }
    }
    return gens;
  }

  bool is_normal(const Subgroup& h) const {
    for (int g = 0; g < n_; ++g) {
      for (int x : h) {
        if (!std::binary_search(h.begin(), h.end(), mul(mul(g, x), inv(g)))) return false;
      }
    }
    return true;
  }

  Subgroup commutator_subgroup() const {
    std::set<int> comms;
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) comms.insert(commutator(a, b));
    }
    return closure(std::vector<int>(comms.begin(), comms.end()));
  }

  Subgroup center() const {
    Subgroup z;
    for (int a = 0; a < n_; ++a) {
      bool central = true;
      for (int b = 0; b < n_ && central; ++b) central = mul(a, b) == mul(b, a);
      if (central) z.push_back(a);
    }
    return z;
  }

  /// Every subgroup, found as joins of cyclic subgroups until nothing new
  /// appears. Sorted by order, then lexicographically.
  std::vector<Subgroup> all_subgroups() const {
    std::set<Subgroup> cyclic;
    for (int a = 0; a < n_; ++a) cyclic.insert(closure({a}));
    std::set<Subgroup> all = cyclic;
    std::vector<Subgroup> frontier(cyclic.begin(), cyclic.end());
    while (!frontier.empty()) {
      std::vector<Subgroup> next;
      for (const auto& s : frontier) {
        for (const auto& c : cyclic) {
          if (std::includes(s.begin(), s.end(), c.begin(), c.end())) continue;
          std::vector<int> gens = s;
          gens.insert(gens.end(), c.begin(), c.end());
          Subgroup j = closure(gens);
          if (all.insert(j).second) next.push_back(std::move(j));
        }
      }
      frontier = std::move(next);
    }
    std::vector<Subgroup> out(all.begin(), all.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
  }

  /// G/N for normal N; cosets are numbered in order of their least element.
  FiniteGroup quotient(const Subgroup& normal, const std::string& name = "") const {
    if (!is_normal(normal)) throw std::invalid_argument(name_ + ": quotient by a non-normal subgroup");
    std::vector<int> coset(n_, -1);
    int count = 0;
    for (int a = 0; a < n_; ++a) {
      if (coset[a] >= 0) continue;
      for (int x : normal) coset[mul(a, x)] = count;
      ++count;
    }
    std::vector<int> rep(count);
    for (int a = n_ - 1; a >= 0; --a) rep[coset[a]] = a;
    std::vector<std::vector<int>> table(count, std::vector<int>(count));
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < count; ++j) table[i][j] = coset[mul(rep[i], rep[j])];
    }
    return FiniteGroup(table, name.empty() ? name_ + "/N" : name);
  }

  /// Multiset of element orders, as order -> count.
  std::map<int, int> order_profile() const {
    std::map<int, int> out;
    for (int a = 0; a < n_; ++a) ++out[element_order(a)];
    return out;
  }

 private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * n_ + b; }

  int n_ = 1;
  std::string name_;
  std::vector<int> table_;
  std::vector<int> inv_;
};

// ---------------------------------------------------------------------------
// constructions

inline FiniteGroup cyclic_group(int n) {
  if (n < 1) throw std::invalid_argument("cyclic_group: order must be positive");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return FiniteGroup(t, "C" + std::to_string(n));
}

/// Element (a, b) is index a * |B| + b.
inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, std::string name = "") {
  const int na = a.order(), nb = b.order();
  std::vector<std::vector<int>> t(na * nb, std::vector<int>(na * nb));
  for (int x = 0; x < na * nb; ++x) {
    for (int y = 0; y < na * nb; ++y) t[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
  }
  return FiniteGroup(t, name.empty() ? a.name() + "x" + b.name() : std::move(name));
}

/// Metacyclic group on pairs (i mod m, j mod n) with
/// (i,j)(k,l) = (i + k r^j + [j+l >= n] s, j + l).
/// Needs r^n = 1 and s(r - 1) = 0 mod m.
inline FiniteGroup metacyclic_group(int m, int n, int r, int s, std::string name) {
  std::vector<int> rpow(n, 1);
  for (int j = 1; j < n; ++j) rpow[j] = rpow[j - 1] * r % m;
  std::vector<std::vector<int>> t(m * n, std::vector<int>(m * n));
  for (int x = 0; x < m * n; ++x) {
    const int i = x / n, j = x % n;
    for (int y = 0; y < m * n; ++y) {
      const int k = y / n, l = y % n;
      const int ii = (i + k * rpow[j] + (j + l >= n ? s : 0)) % m;
      t[x][y] = ii * n + (j + l) % n;
    }
  }
  return FiniteGroup(t, std::move(name));
}

/// N x| C_n where the generator of C_n acts by the automorphism `alpha`
/// (a permutation of N's element indices). Element (x, j) is x * n + j.
inline FiniteGroup semidirect_product(const FiniteGroup& normal, int n, const std::vector<int>& alpha, std::string name) {
  const int nn = normal.order();
  if (static_cast<int>(alpha.size()) != nn) throw std::invalid_argument(name + ": automorphism has wrong size");
  for (int a = 0; a < nn; ++a) {
    for (int b = 0; b < nn; ++b) {
      if (alpha[normal.mul(a, b)] != normal.mul(alpha[a], alpha[b])) {
        throw std::invalid_argument(name + ": map is not a homomorphism");
      }
    }
  }
  std::vector<std::vector<int>> apow(n, std::vector<int>(nn));
  std::iota(apow[0].begin(), apow[0].end(), 0);
  for (int j = 1; j < n; ++j) {
    for (int a = 0; a < nn; ++a) apow[j][a] = alpha[apow[j - 1][a]];
  }
  for (int a = 0; a < nn; ++a) {
    if (alpha[apow[n - 1][a]] != a) throw std::invalid_argument(name + ": automorphism order does not divide n");
  }
  std::vector<std::vector<int>> t(nn * n, std::vector<int>(nn * n));
  for (int x = 0; x < nn * n; ++x) {
    const int a = x / n, j = x % n;
    for (int y = 0; y < nn * n; ++y) {
      const int b = y / n, l = y % n;
      t[x][y] = normal.mul(a, apow[j][b]) * n + (j + l) % n;
    }
  }
  return FiniteGroup(t, std::move(name));
}

// ---------------------------------------------------------------------------
// homomorphisms

/// Extends gens[i] -> images[i] to a homomorphism G -> H by walking the
/// Cayley graph. Returns nullopt when the assignment is not a homomorphism.
/// Checking f(x g) = f(x) f(g) on every edge suffices since gens generate G.
inline std::optional<std::vector<int>> extend_homomorphism(const FiniteGroup& g, const std::vector<int>& gens,
                                                           const FiniteGroup& h, const std::vector<int>& images) {
  std::vector<int> f(g.order(), -1);
  f[0] = 0;
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int x = queue[qi];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const int y = g.mul(x, gens[i]);
      const int fy = h.mul(f[x], images[i]);
      if (f[y] < 0) {
        f[y] = fy;
        queue.push_back(y);
      } else if (f[y] != fy) {
        return std::nullopt;
      }
    }
  }
  if (static_cast<int>(queue.size()) != g.order()) throw std::invalid_argument("extend_homomorphism: gens do not generate");
  return f;
}

/// Calls `visit(f)` for every homomorphism G -> H; stops early if visit
/// returns false. Generator images are restricted to elements whose order
/// divides the generator's order.
inline void for_each_homomorphism(const FiniteGroup& g, const FiniteGroup& h,
                                  const std::function<bool(const std::vector<int>&)>& visit,
                                  bool bijective_only = false) {
  const std::vector<int> gens = g.generators();
  std::vector<std::vector<int>> choices(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const int og = g.element_order(gens[i]);
    for (int y = 0; y < h.order(); ++y) {
      const int oy = h.element_order(y);
      if (bijective_only ? oy == og : og % oy == 0) choices[i].push_back(y);
    }
  }
  std::vector<int> images(gens.size());
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == gens.size()) {
      auto f = extend_homomorphism(g, gens, h, images);
      if (!f) return true;
      if (bijective_only) {
        std::vector<char> hit(h.order(), 0);
        for (int v : *f) hit[v] = 1;
        if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return true;
      }
      return visit(*f);
    }
    for (int y : choices[i]) {
      images[i] = y;
      if (!rec(i + 1)) return false;
    }
    return true;
  };
  if (gens.empty()) {
    visit(std::vector<int>(g.order(), 0));
    return;
  }
  rec(0);
}

inline bool surjects_onto(const FiniteGroup& g, const FiniteGroup& target) {
  if (g.order() % target.order() != 0) return false;
  if (target.order() == 1) return true;
  bool found = false;
  for_each_homomorphism(g, target, [&](const std::vector<int>& f) {
    std::vector<char> hit(target.order(), 0);
    int count = 0;
    for (int v : f) {
      if (!hit[v]) {
        hit[v] = 1;
        ++count;
      }
    }
    found = count == target.order();
    return !found;
  });
  return found;
}

/// Brute-force |Aut(G)|; feasible for the small orders where it is used.
inline std::int64_t automorphism_count(const FiniteGroup& g, int max_order = 12) {
  if (g.order() > max_order) {
    throw std::invalid_argument("automorphism_count: order " + std::to_string(g.order()) + " exceeds guard " +
                                std::to_string(max_order));
  }
  std::int64_t count = 0;
  for_each_homomorphism(g, g, [&](const std::vector<int>&) { ++count; return true; }, true);
  return count;
}

/// Cheap invariants that any isomorphism preserves.
struct GroupInvariants {
  int order;
  bool abelian;
  int center_order;
  int derived_order;
  std::map<int, int> order_profile;
  bool operator==(const GroupInvariants&) const = default;
};

inline GroupInvariants invariants(const FiniteGroup& g) {
  return GroupInvariants{g.order(), g.is_abelian(), static_cast<int>(g.center().size()),
                         static_cast<int>(g.commutator_subgroup().size()), g.order_profile()};
}

inline bool is_isomorphic(const FiniteGroup& a, const FiniteGroup& b) {
  if (!(invariants(a) == invariants(b))) return false;
  bool found = false;
  for_each_homomorphism(a, b, [&](const std::vector<int>&) { found = true; return false; }, true);
  return found;
}

// ---------------------------------------------------------------------------
// abelian structure

namespace detail {

inline std::vector<int> prime_divisors(int n) {
  std::vector<int> ps;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

}  // namespace detail

/// Invariant factors (ascending, each dividing the next) of an abelian group,
/// read off from how many elements each p^k kills.
inline std::vector<int> abelian_invariants(const FiniteGroup& g) {
  if (!g.is_abelian()) throw std::invalid_argument(g.name() + ": abelian_invariants needs an abelian group");
  std::vector<std::vector<int>> parts;  // per prime: exponents of cyclic factors, descending
  for (int p : detail::prime_divisors(g.order())) {
    // killed[k] = #{x : p^k x = 0} = p^(sum_i min(k, lambda_i))
    std::vector<int> logs{0};
    for (int k = 1;; ++k) {
      int pk = 1;
      for (int i = 0; i < k; ++i) pk *= p;
      int killed = 0;
      for (int a = 0; a < g.order(); ++a) {
        if (pk % g.element_order(a) == 0) ++killed;
      }
      int l = 0;
      while (killed > 1) {
        killed /= p;
        ++l;
      }
      if (l == logs.back()) break;
      logs.push_back(l);
    }
    // number of factors with lambda >= k is logs[k] - logs[k-1]
    std::vector<int> lambdas;
    const int kmax = static_cast<int>(logs.size()) - 1;
    for (int k = kmax; k >= 1; --k) {
      const int at_least_k = logs[k] - logs[k - 1];
      const int at_least_k1 = k < kmax ? logs[k + 1] - logs[k] : 0;
      for (int c = 0; c < at_least_k - at_least_k1; ++c) lambdas.push_back(k);
    }
    std::vector<int> powers;
    for (int l : lambdas) {
      int v = 1;
      for (int i = 0; i < l; ++i) v *= p;
      powers.push_back(v);
    }
    parts.push_back(powers);
  }
  std::size_t width = 0;
  for (const auto& pp : parts) width = std::max(width, pp.size());
  std::vector<int> factors(width, 1);
  for (const auto& pp : parts) {
    for (std::size_t i = 0; i < pp.size(); ++i) factors[i] *= pp[i];
  }
  std::reverse(factors.begin(), factors.end());
  return factors;
}

inline std::vector<int> abelianization(const FiniteGroup& g) {
  return abelian_invariants(g.quotient(g.commutator_subgroup(), g.name() + "^ab"));
}

inline bool has_normal_subgroup_of_order(const FiniteGroup& g, int n) {
  if (n < 1 || g.order() % n != 0) throw std::invalid_argument("has_normal_subgroup_of_order: order must divide |G|");
  for (const auto& h : g.all_subgroups()) {
    if (static_cast<int>(h.size()) == n && g.is_normal(h)) return true;
  }
  return false;
}

inline std::vector<Subgroup> sylow_subgroups(const FiniteGroup& g, int p) {
  if (p < 2 || g.order() % p != 0) throw std::invalid_argument("sylow_subgroups: p must divide |G|");
  int pk = 1;
  while (g.order() % (pk * p) == 0) pk *= p;
  std::vector<Subgroup> out;
  for (auto& h : g.all_subgroups()) {
    if (static_cast<int>(h.size()) == pk) out.push_back(h);
  }
  return out;
}

inline bool unique_sylow_check(const FiniteGroup& g, int p) { return sylow_subgroups(g, p).size() == 1; }

/// Rank of the Frattini quotient of a p-group: the largest r with G onto (Z/p)^r.
inline int frattini_rank(const FiniteGroup& g) {
  const auto subs = g.all_subgroups();
  const int n = g.order();
  std::vector<char> in_all(n, 1);
  for (const auto& h : subs) {
    if (static_cast<int>(h.size()) == n) continue;
    bool maximal = true;
    for (const auto& k : subs) {
      if (k.size() > h.size() && static_cast<int>(k.size()) < n &&
          std::includes(k.begin(), k.end(), h.begin(), h.end())) {
        maximal = false;
        break;
      }
    }
    if (!maximal) continue;
    std::vector<char> in(n, 0);
    for (int x : h) in[x] = 1;
    for (int x = 0; x < n; ++x) in_all[x] &= in[x];
  }
  int phi = 0;
  for (char c : in_all) phi += c;
  int r = 0;
  for (int q = n / phi; q > 1; ++r) {
    const int p = detail::prime_divisors(n).front();
    q /= p;
  }
  return r;
}

/// Does G have a normal subgroup isomorphic to `kernel` with quotient
/// isomorphic to `image`?
inline bool has_quotient_with_kernel(const FiniteGroup& g, const FiniteGroup& image, const FiniteGroup& kernel) {
  if (image.order() * kernel.order() != g.order()) return false;
  for (const auto& h : g.all_subgroups()) {
    if (static_cast<int>(h.size()) != kernel.order() || !g.is_normal(h)) continue;
    // the subgroup as a group in its own right
    std::vector<int> pos(g.order(), -1);
    for (std::size_t i = 0; i < h.size(); ++i) pos[h[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> t(h.size(), std::vector<int>(h.size()));
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (std::size_t j = 0; j < h.size(); ++j) t[i][j] = pos[g.mul(h[i], h[j])];
    }
    if (is_isomorphic(FiniteGroup(t, "N"), kernel) && is_isomorphic(g.quotient(h), image)) return true;
  }
  return false;
}

}  // namespace semistable
