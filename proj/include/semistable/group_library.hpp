#pragma once

/**
 * @file group_library.hpp
 * @brief Every group of order 1..20, 27 and 125, built from compiled-in
 * presentations.
 *
 * A library entry for order n is a list of pairwise non-isomorphic groups
 * whose length equals the known number of isomorphism classes; the unit
 * tests recheck both facts.
 */

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "finite_group.hpp"

namespace semistable {

namespace detail {

/// Automorphism of an abelian group given as an index map on the
/// direct_product encoding x * |B| + y.
inline std::vector<int> linear_automorphism(int na, int nb, const std::function<std::pair<int, int>(int, int)>& f) {
  std::vector<int> out(na * nb);
  for (int x = 0; x < na; ++x) {
    for (int y = 0; y < nb; ++y) {
      auto [u, v] = f(x, y);
      out[x * nb + y] = ((u % na + na) % na) * nb + ((v % nb + nb) % nb);
    }
  }
  return out;
}

inline FiniteGroup dihedral(int m) {  // order 2m
  return metacyclic_group(m, 2, m - 1, 0, "D" + std::to_string(2 * m));
}

inline FiniteGroup cyc_product(std::initializer_list<int> orders) {
  FiniteGroup g = cyclic_group(1);
  std::string name;
  bool first = true;
  for (int n : orders) {
    g = first ? cyclic_group(n) : direct_product(g, cyclic_group(n));
    name += (first ? "" : "x") + std::string("C") + std::to_string(n);
    first = false;
  }
  return g.renamed(name);
}

inline std::map<std::string, std::function<FiniteGroup()>>& registry() {
  static std::map<std::string, std::function<FiniteGroup()>> r = [] {
    std::map<std::string, std::function<FiniteGroup()>> m;
    auto add = [&](const std::string& name, std::function<FiniteGroup()> f) {
      m.emplace(name, [name, f] {
        return f().renamed(name);
      });
    };
    for (int n = 1; n <= 125; ++n) add("C" + std::to_string(n), [n] { return cyclic_group(n); });
    add("C2xC2", [] { return cyc_product({2, 2}); });
    add("C3xC3", [] { return cyc_product({3, 3}); });
    add("C4xC2", [] { return cyc_product({4, 2}); });
    add("C2xC2xC2", [] { return cyc_product({2, 2, 2}); });
    add("C6xC2", [] { return cyc_product({6, 2}); });
    add("C8xC2", [] { return cyc_product({8, 2}); });
    add("C4xC4", [] { return cyc_product({4, 4}); });
    add("C4xC2xC2", [] { return cyc_product({4, 2, 2}); });
    add("C2xC2xC2xC2", [] { return cyc_product({2, 2, 2, 2}); });
    add("C6xC3", [] { return cyc_product({6, 3}); });
    add("C10xC2", [] { return cyc_product({10, 2}); });
    add("C9xC3", [] { return cyc_product({9, 3}); });
    add("C3xC3xC3", [] { return cyc_product({3, 3, 3}); });
    add("C5xC5", [] { return cyc_product({5, 5}); });
    add("C25xC5", [] { return cyc_product({25, 5}); });
    add("C5xC5xC5", [] { return cyc_product({5, 5, 5}); });

    add("S3", [] { return dihedral(3); });
    add("D8", [] { return dihedral(4); });
    add("D10", [] { return dihedral(5); });
    add("D12", [] { return dihedral(6); });
    add("D14", [] { return dihedral(7); });
    add("D16", [] { return dihedral(8); });
    add("D18", [] { return dihedral(9); });
    add("D20", [] { return dihedral(10); });
    add("Q8", [] { return metacyclic_group(4, 2, 3, 2, "Q8"); });
    add("Q16", [] { return metacyclic_group(8, 2, 7, 4, "Q16"); });
    add("SD16", [] { return metacyclic_group(8, 2, 3, 0, "SD16"); });
    add("M16", [] { return metacyclic_group(8, 2, 5, 0, "M16"); });
    add("C4:C4", [] { return metacyclic_group(4, 4, 3, 0, "C4:C4"); });
    add("Dic3", [] { return metacyclic_group(6, 2, 5, 3, "Dic3"); });
    add("Dic5", [] { return metacyclic_group(10, 2, 9, 5, "Dic5"); });
    add("F20", [] { return metacyclic_group(5, 4, 2, 0, "F20"); });
    add("C9:C3", [] { return metacyclic_group(9, 3, 4, 0, "C9:C3"); });
    add("C25:C5", [] { return metacyclic_group(25, 5, 6, 0, "C25:C5"); });
    add("C2xD8", [] { return direct_product(cyclic_group(2), dihedral(4)); });
    add("C2xQ8", [] { return direct_product(cyclic_group(2), metacyclic_group(4, 2, 3, 2, "Q8")); });
    add("C3xS3", [] { return direct_product(cyclic_group(3), dihedral(3)); });
    add("C2^2:C4", [] {
      return semidirect_product(cyc_product({2, 2}), 4,
                                linear_automorphism(2, 2, [](int x, int y) { return std::pair{x, x + y}; }), "C2^2:C4");
    });
    add("C4oD8", [] {
      return semidirect_product(cyc_product({4, 2}), 2,
                                linear_automorphism(4, 2, [](int x, int y) { return std::pair{x + 2 * y, y}; }), "C4oD8");
    });
    add("A4", [] {
      return semidirect_product(cyc_product({2, 2}), 3,
                                linear_automorphism(2, 2, [](int x, int y) { return std::pair{y, x + y}; }), "A4");
    });
    add("C3^2:C2", [] {
      return semidirect_product(cyc_product({3, 3}), 2,
                                linear_automorphism(3, 3, [](int x, int y) { return std::pair{-x, -y}; }), "C3^2:C2");
    });
    add("Heis27", [] {
      return semidirect_product(cyc_product({3, 3}), 3,
                                linear_automorphism(3, 3, [](int x, int y) { return std::pair{x, x + y}; }), "Heis27");
    });
    add("Heis125", [] {
      return semidirect_product(cyc_product({5, 5}), 5,
                                linear_automorphism(5, 5, [](int x, int y) { return std::pair{x, x + y}; }), "Heis125");
    });
    return m;
  }();
  return r;
}

inline const std::map<int, std::vector<std::string>>& library_index() {
  static const std::map<int, std::vector<std::string>> idx = {
      {1, {"C1"}},
      {2, {"C2"}},
      {3, {"C3"}},
      {4, {"C4", "C2xC2"}},
      {5, {"C5"}},
      {6, {"C6", "S3"}},
      {7, {"C7"}},
      {8, {"C8", "C4xC2", "C2xC2xC2", "D8", "Q8"}},
      {9, {"C9", "C3xC3"}},
      {10, {"C10", "D10"}},
      {11, {"C11"}},
      {12, {"C12", "C6xC2", "D12", "Dic3", "A4"}},
      {13, {"C13"}},
      {14, {"C14", "D14"}},
      {15, {"C15"}},
      {16, {"C16", "C8xC2", "C4xC4", "C4xC2xC2", "C2xC2xC2xC2", "D16", "Q16", "SD16", "M16", "C4:C4", "C2xD8",
            "C2xQ8", "C2^2:C4", "C4oD8"}},
      {17, {"C17"}},
      {18, {"C18", "C6xC3", "D18", "C3xS3", "C3^2:C2"}},
      {19, {"C19"}},
      {20, {"C20", "C10xC2", "D20", "Dic5", "F20"}},
      {27, {"C27", "C9xC3", "C3xC3xC3", "Heis27", "C9:C3"}},
      {125, {"C125", "C25xC5", "C5xC5xC5", "Heis125", "C25:C5"}},
  };
  return idx;
}

}  // namespace detail

/// Known number of isomorphism classes for the supported orders.
inline int group_count(int order) {
  static const std::map<int, int> counts = {{1, 1},  {2, 1},  {3, 1},  {4, 2},  {5, 1},  {6, 2},   {7, 1},  {8, 5},
                                            {9, 2},  {10, 2}, {11, 1}, {12, 5}, {13, 1}, {14, 2},  {15, 1}, {16, 14},
                                            {17, 1}, {18, 5}, {19, 1}, {20, 5}, {27, 5}, {125, 5}};
  auto it = counts.find(order);
  if (it == counts.end()) throw std::invalid_argument("group_library: unsupported order " + std::to_string(order));
  return it->second;
}

inline FiniteGroup named_group(const std::string& name) {
  auto& r = detail::registry();
  auto it = r.find(name);
  if (it == r.end()) throw std::invalid_argument("unknown group '" + name + "'");
  return it->second();
}

inline std::vector<std::string> group_names(int order) {
  const auto& idx = detail::library_index();
  auto it = idx.find(order);
  if (it == idx.end()) throw std::invalid_argument("group_library: unsupported order " + std::to_string(order));
  return it->second;
}

/// All isomorphism classes of groups of the given order.
inline std::vector<FiniteGroup> group_library(int order) {
  std::vector<FiniteGroup> out;
  for (const auto& n : group_names(order)) {
    out.push_back(named_group(n));
    if (out.back().order() != order) {
      throw std::logic_error("group library entry " + n + " has order " + std::to_string(out.back().order()));
    }
  }
  if (static_cast<int>(out.size()) != group_count(order)) {
    throw std::logic_error("group library for order " + std::to_string(order) + " is incomplete");
  }
  return out;
}

}  // namespace semistable
