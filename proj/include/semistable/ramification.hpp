#pragma once

/**
 * @file ramification.hpp
 * @brief Different, discriminant and conductor bookkeeping.
 *
 * Different valuations are normalised so that v(p) = 1. A field with data
 * (e, f, g, v) at p contributes p^(g*f*e*v / degree) to its root
 * discriminant. Relative discriminants over a base other than Q are
 * FormalIdeal values over named primes whose absolute norms are declared
 * next to the field.
 */

#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "factored_real.hpp"
#include "rational.hpp"

namespace semistable {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Strict upper bound 1 + 1/(ell - 1) on the different valuation of a
/// semistable ell-adic field extension.
inline Rational fontaine_exponent_bound(std::uint64_t ell) {
  if (!is_prime(ell)) throw std::invalid_argument("fontaine_exponent_bound: " + std::to_string(ell) + " is not prime");
  return Rational(1) + Rational(1, static_cast<long>(ell - 1));
}

inline std::int64_t tame_different_exponent(std::int64_t e) {
  if (e < 1) throw std::invalid_argument("ramification index must be positive");
  return e - 1;
}

struct RamificationFiltration {
  std::vector<std::uint64_t> orders;  ///< |Gamma_0|, |Gamma_1|, ...; trailing 1s optional

  /// Nonincreasing by divisibility, and Gamma_1 onward of order a power of
  /// one prime.
  void validate() const {
    if (orders.empty()) throw std::invalid_argument("empty ramification filtration");
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (orders[i] == 0) throw std::invalid_argument("filtration order must be positive");
      if (i && orders[i - 1] % orders[i] != 0) {
        throw std::invalid_argument("filtration orders must be nonincreasing by divisibility");
      }
    }
    std::uint64_t prime = 0;
    for (std::size_t i = 1; i < orders.size(); ++i) {
      std::uint64_t n = orders[i];
      if (n == 1) continue;
      std::uint64_t p = 2;
      while (n % p) ++p;
      while (n % p == 0) n /= p;
      if (n != 1 || (prime && prime != p)) {
        throw std::invalid_argument("higher ramification groups must be p-groups for a single p");
      }
      prime = p;
    }
  }
};

/// sum (|Gamma_i| - 1): the valuation of the different at the upper prime.
inline std::uint64_t wild_different_valuation(const RamificationFiltration& filt) {
  filt.validate();
  std::uint64_t v = 0;
  for (auto n : filt.orders) v += n - 1;
  return v;
}

/// Survivors of the congruence-plus-bound sieve for a degree-ell extension
/// whose ramification groups all have order ell or 1: v = 0 mod (ell - 1),
/// e - 1 < v < strict_upper, and v >= 2(ell - 1) when ell | e.
inline std::set<std::int64_t> wild_candidate_exponents(std::uint64_t ell, std::int64_t e, std::int64_t strict_upper) {
  if (!is_prime(ell)) throw std::invalid_argument("wild_candidate_exponents: ell must be prime");
  if (e < 1 || strict_upper <= 0) throw std::invalid_argument("wild_candidate_exponents: bad arguments");
  const auto step = static_cast<std::int64_t>(ell - 1);
  const bool wild = e % static_cast<std::int64_t>(ell) == 0;
  std::set<std::int64_t> out;
  for (std::int64_t v = 0; v < strict_upper; v += step) {
    if (v <= e - 1) continue;
    if (wild && v < 2 * step) continue;
    out.insert(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// field descriptors

struct PrimeLocalData {
  std::uint64_t p = 0;
  std::int64_t e = 1;
  std::int64_t f = 1;
  std::int64_t g = 1;
  Rational different_valuation;  ///< normalised so that v(p) = 1

  bool tame() const { return e % static_cast<std::int64_t>(p) != 0; }
  Rational tame_valuation() const { return Rational(e - 1, e); }
  /// Exponent of p in the root discriminant.
  Rational root_disc_exponent(std::int64_t degree) const {
    return Rational(g * f * e) * different_valuation / Rational(degree);
  }
  bool within_fontaine_bound() const { return different_valuation < fontaine_exponent_bound(p); }
};

struct FormalPrime {
  std::uint64_t norm = 0;  ///< absolute norm of each conjugate
  std::int64_t count = 1;  ///< number of such primes
};

struct FieldDescriptor {
  std::string id;
  std::string name;
  std::int64_t degree = 1;
  std::vector<PrimeLocalData> local_data;
  FactoredReal declared_root_disc;
  std::vector<std::vector<std::int64_t>> defining_polynomials;  ///< informational only
  std::map<std::string, FormalPrime> formal_primes;

  const PrimeLocalData* at(std::uint64_t p) const {
    for (const auto& d : local_data) {
      if (d.p == p) return &d;
    }
    return nullptr;
  }

  /// Norm map for formal ideals over this field.
  std::map<std::string, std::uint64_t> formal_norms() const {
    std::map<std::string, std::uint64_t> out;
    for (const auto& [s, fp] : formal_primes) out.emplace(s, fp.norm);
    return out;
  }
};

/// Checks one local record against the field degree and the tame/wild law.
/// Returns an empty string when consistent, otherwise the reason.
inline std::string local_data_problem(const FieldDescriptor& fd, const PrimeLocalData& d) {
  const std::string where = fd.id + " at p=" + std::to_string(d.p) + ": ";
  if (!is_prime(d.p)) return where + "residue characteristic is not prime";
  if (d.e < 1 || d.f < 1 || d.g < 1) return where + "e, f, g must be positive";
  if (d.e * d.f * d.g != fd.degree) {
    return where + "e*f*g = " + std::to_string(d.e * d.f * d.g) + " but degree is " + std::to_string(fd.degree);
  }
  if (d.tame() && d.different_valuation != d.tame_valuation()) {
    return where + "tame prime needs different valuation (e-1)/e = " + d.tame_valuation().to_string() +
           ", got " + d.different_valuation.to_string();
  }
  if (!d.tame() && d.different_valuation <= d.tame_valuation()) {
    return where + "wild prime needs different valuation > (e-1)/e, got " + d.different_valuation.to_string();
  }
  return {};
}

/// prod p^(g*f*e*v / degree) over the ramified primes.
inline FactoredReal root_disc_from_local_data(const FieldDescriptor& fd) {
  if (fd.degree < 1) throw DataError(fd.id + ": degree must be positive");
  FactoredReal out;
  std::set<std::uint64_t> seen;
  for (const auto& d : fd.local_data) {
    if (!seen.insert(d.p).second) throw DataError(fd.id + ": duplicate local data for p=" + std::to_string(d.p));
    if (d.e * d.f * d.g != fd.degree) {
      throw DataError(fd.id + " at p=" + std::to_string(d.p) + ": inconsistent e*f*g = " +
                      std::to_string(d.e * d.f * d.g) + " vs degree " + std::to_string(fd.degree));
    }
    out = out * factored_power(d.p, d.root_disc_exponent(fd.degree));
  }
  return out;
}

/// delta_L = delta_K * N(Delta_{L/K})^(1/[L:Q]).
inline FactoredReal root_disc_transitive(const FactoredReal& delta_k, const FactoredReal& norm_disc,
                                         std::int64_t degree_l) {
  if (degree_l < 1) throw std::invalid_argument("root_disc_transitive: degree must be positive");
  return delta_k * norm_disc.pow(Rational(1, degree_l));
}

/// Absolute norm of a formal ideal: each symbol is replaced by its norm.
inline FactoredReal absolute_norm(const FormalIdeal& ideal, const std::map<std::string, std::uint64_t>& norms) {
  FactoredReal out;
  for (const auto& [sym, e] : ideal.factors()) {
    auto it = norms.find(sym);
    if (it == norms.end()) throw ConfigError("no norm declared for formal prime '" + sym + "'");
    out = out * factored_power(it->second, e);
  }
  return out;
}

/// Conductor exponent of a cyclic extension whose nontrivial characters are
/// all faithful with equal conductor: disc_exponent / (|G| - 1).
inline std::int64_t conductor_from_cyclic_disc(std::int64_t disc_exponent, std::int64_t group_order_minus_one) {
  if (group_order_minus_one < 1) throw std::invalid_argument("conductor_from_cyclic_disc: group order must exceed 1");
  if (disc_exponent % group_order_minus_one != 0) {
    throw std::invalid_argument("conductor_from_cyclic_disc: " + std::to_string(disc_exponent) +
                                " is not divisible by " + std::to_string(group_order_minus_one));
  }
  return disc_exponent / group_order_minus_one;
}

/// Relative discriminant as the product of the conductors of all characters.
template <class Key>
PowerProduct<Key> conductor_discriminant(const std::vector<PowerProduct<Key>>& conductors) {
  if (conductors.empty() || std::none_of(conductors.begin(), conductors.end(),
                                         [](const auto& c) { return c.is_one(); })) {
    throw std::invalid_argument("conductor_discriminant: the trivial character (conductor 1) must be listed");
  }
  PowerProduct<Key> out;
  for (const auto& c : conductors) out = out * c;
  return out;
}

/// Decides by enumeration whether a ramification index is forced to be 1.
/// Candidates are the e dividing both prod(e_upper_factors) and the degree
/// `e_target` of the extension, and coprime to `forbidden_divisor`; the
/// conclusion is forced iff 1 is the only candidate.
inline bool unramified_degree_constraint(std::int64_t e_target, const std::vector<std::int64_t>& e_upper_factors,
                                         std::int64_t forbidden_divisor) {
  if (e_target < 1 || forbidden_divisor < 1) throw std::invalid_argument("unramified_degree_constraint: arguments must be positive");
  std::int64_t upper = 1;
  for (auto x : e_upper_factors) {
    if (x < 1) throw std::invalid_argument("unramified_degree_constraint: factors must be positive");
    upper *= x;
  }
  for (std::int64_t e = 2; e <= upper; ++e) {
    if (upper % e == 0 && e_target % e == 0 && std::gcd(e, forbidden_divisor) == 1) return false;
  }
  return true;
}

}  // namespace semistable
