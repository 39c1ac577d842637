#pragma once

/**
 * @file galois_module.hpp
 * @brief Mod-ell Galois modules of dimension 2d with toric/finite flags at
 * bad primes, and replays of the dimension counts made on them.
 *
 * Matrices act on column vectors. At each bad prime p the instance carries
 * Mt(p) inside Mf(p), one inertia generator sigma_p, the decomposition
 * generators and the effective stage of inertia. Validity is not enforced
 * on construction; violations() lists what is wrong so that replays can
 * report a broken hypothesis instead of throwing.
 */

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fp_linear.hpp"
#include "linear_groups.hpp"
#include "ramification.hpp"

namespace semistable {

struct BadPrime {
  Subspace mt;
  Subspace mf;
  FpMatrix sigma;
  std::vector<FpMatrix> decomposition_gens;
  int stage = 1;

  int t() const { return mt.dim(); }
};

struct GaloisModuleInstance {
  int ell = 0;
  int d = 0;
  std::map<int, BadPrime> primes;
  std::vector<FpMatrix> galois_gens;  ///< generators of the global image

  int dim() const { return 2 * d; }

  const BadPrime& at(int p) const {
    auto it = primes.find(p);
    if (it == primes.end()) throw std::out_of_range("no data for bad prime " + std::to_string(p));
    return it->second;
  }

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (!is_prime(static_cast<std::uint64_t>(ell))) out.push_back("ell=" + std::to_string(ell) + " is not prime");
    if (d < 1) out.push_back("d must be positive");
    if (!out.empty()) return out;
    const int n = dim();
    const FpMatrix one = FpMatrix::identity(ell, n);
    auto square_ok = [&](const FpMatrix& m) { return m.p() == ell && m.rows() == n && m.cols() == n; };
    for (const auto& g : galois_gens) {
      if (!square_ok(g) || !g.invertible()) out.push_back("galois generator is not an invertible " + std::to_string(n) + "x" + std::to_string(n) + " matrix over F_" + std::to_string(ell));
    }
    for (const auto& [p, bp] : primes) {
      const std::string where = "p=" + std::to_string(p) + ": ";
      if (bp.mt.ambient_dim() != n || bp.mf.ambient_dim() != n || bp.mt.p() != ell || bp.mf.p() != ell) {
        out.push_back(where + "flag subspaces live in the wrong space");
        continue;
      }
      if (!square_ok(bp.sigma)) {
        out.push_back(where + "sigma has the wrong shape");
        continue;
      }
      if (!bp.mf.contains(bp.mt)) out.push_back(where + "Mt is not contained in Mf");
      // dim Mt = t, dim Mf = d + a with t + a = d
      if (bp.mt.dim() + bp.mf.dim() != 2 * d) {
        out.push_back(where + "dim Mt + dim Mf = " + std::to_string(bp.mt.dim() + bp.mf.dim()) + ", expected 2d = " + std::to_string(2 * d));
      }
      const FpMatrix nil = bp.sigma - one;
      if (!(nil * nil).is_zero()) out.push_back(where + "(sigma - 1)^2 != 0");
      if (!bp.mt.contains(column_space(nil))) out.push_back(where + "image(sigma - 1) is not inside Mt");
      if (!bp.mf.image(nil).is_zero()) out.push_back(where + "sigma does not fix Mf pointwise");
      if (bp.stage < 1) out.push_back(where + "stage of inertia must be positive");
      for (const auto& g : bp.decomposition_gens) {
        if (!square_ok(g) || !g.invertible()) out.push_back(where + "decomposition generator is not invertible");
      }
    }
    return out;
  }

  bool valid() const { return violations().empty(); }
};

// ---------------------------------------------------------------------------
// isogeny bookkeeping

/// dim(kappa & Mt) + dim(kappa & Mf) - dim kappa.
inline int component_delta(const GaloisModuleInstance& inst, int p, const Subspace& kappa) {
  const BadPrime& bp = inst.at(p);
  return kappa.intersect(bp.mt).dim() + kappa.intersect(bp.mf).dim() - kappa.dim();
}

struct IsogenyStep {
  Subspace kappa;
  int delta_ord = 0;
  bool stage_incremented = false;
};

inline bool stage_rule_applies(const GaloisModuleInstance& inst, int p, const Subspace& kappa) {
  const BadPrime& bp = inst.at(p);
  return kappa.contains(bp.mt) && bp.mf.contains(kappa);
}

inline IsogenyStep isogeny_step(const GaloisModuleInstance& inst, int p, const Subspace& kappa) {
  return {kappa, component_delta(inst, p, kappa), stage_rule_applies(inst, p, kappa)};
}

/// Increments stage(p) iff Mt(p) <= kappa <= Mf(p).
inline bool apply_stage_rule(GaloisModuleInstance& inst, int p, const Subspace& kappa) {
  if (!stage_rule_applies(inst, p, kappa)) return false;
  ++inst.primes.at(p).stage;
  return true;
}

// ---------------------------------------------------------------------------
// submodules

/// Smallest subspace containing m and stable under every generator. The
/// generators must be invertible, so they generate a finite group and
/// stability under them is stability under the group.
inline Subspace generate_submodule(const Subspace& m, const std::vector<FpMatrix>& gens) {
  for (const auto& g : gens) {
    if (g.rows() != m.ambient_dim() || !g.invertible()) throw std::invalid_argument("generate_submodule: generators must be invertible and match the ambient space");
  }
  Subspace cur = m;
  while (true) {
    Subspace next = cur;
    for (const auto& g : gens) next = next + cur.image(g);
    if (next.dim() == cur.dim()) return cur;
    cur = next;
  }
}

/// M + sigma M = M + (sigma - 1)M for sigma with (sigma - 1)^2 = 0. Its
/// dimension is at most 2 dim M, with equality iff sigma - 1 is injective on
/// M and M & (sigma - 1)M = 0.
inline Subspace hat_construction(const Subspace& m, const FpMatrix& sigma) {
  const FpMatrix nil = sigma - FpMatrix::identity(sigma.p(), sigma.rows());
  if (!(nil * nil).is_zero()) throw std::invalid_argument("hat_construction: (sigma - 1)^2 != 0");
  return m + m.image(nil);
}

// ---------------------------------------------------------------------------
// replay outcomes

struct NamedCheck {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct ReplayOutcome {
  std::vector<NamedCheck> hypotheses;
  std::vector<NamedCheck> conclusions;

  bool hypotheses_hold() const {
    return std::all_of(hypotheses.begin(), hypotheses.end(), [](const auto& c) { return c.holds; });
  }
  bool passed() const {
    return hypotheses_hold() && std::all_of(conclusions.begin(), conclusions.end(), [](const auto& c) { return c.holds; });
  }
  /// First failing check as "hypothesis X: ..." or "conclusion Y: ...".
  std::string first_failure() const {
    for (const auto& h : hypotheses) {
      if (!h.holds) return "hypothesis " + h.name + (h.detail.empty() ? "" : ": " + h.detail);
    }
    for (const auto& c : conclusions) {
      if (!c.holds) return "conclusion " + c.name + (c.detail.empty() ? "" : ": " + c.detail);
    }
    return {};
  }
  std::string summary() const {
    if (!hypotheses_hold()) return "hypothesis failure: " + first_failure();
    std::size_t ok = 0;
    for (const auto& c : conclusions) ok += c.holds;
    std::string s = std::to_string(ok) + "/" + std::to_string(conclusions.size()) + " conclusions hold";
    if (!passed()) s += "; " + first_failure();
    return s;
  }
};

namespace detail {

inline std::string join_violations(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
  return s;
}

inline NamedCheck validity_check(const GaloisModuleInstance& inst) {
  const auto v = inst.violations();
  return {"instance-valid", v.empty(), join_violations(v)};
}

inline std::string dims(int got, int want) { return "dim " + std::to_string(got) + ", expected " + std::to_string(want); }

/// Extends a basis of `sub` by standard vectors to a basis of the whole
/// space; returns the added vectors.
inline std::vector<FpVector> complement_basis(const Subspace& sub) {
  std::vector<FpVector> added;
  Subspace cur = sub;
  const int n = sub.ambient_dim();
  for (int i = 0; i < n && cur.dim() < n; ++i) {
    FpVector e(n, 0);
    e[i] = 1;
    if (!cur.contains(e)) {
      added.push_back(e);
      cur = cur + Subspace::span(sub.p(), n, {e});
    }
  }
  return added;
}

/// The linear map killing `kernel_part` and sending the i-th complement
/// vector to images[i].
inline FpMatrix map_from_complement(const Subspace& kernel_part, const std::vector<FpVector>& complement,
                                    const std::vector<FpVector>& images) {
  const int p = kernel_part.p();
  const int n = kernel_part.ambient_dim();
  FpMatrix q(p, n, n);
  FpMatrix target(p, n, n);
  int col = 0;
  for (const auto& b : kernel_part.basis()) {
    for (int r = 0; r < n; ++r) q(r, col) = b[r];
    ++col;
  }
  for (std::size_t i = 0; i < complement.size(); ++i, ++col) {
    for (int r = 0; r < n; ++r) {
      q(r, col) = complement[i][r];
      target(r, col) = images[i][r];
    }
  }
  return target * q.inverse();
}

inline FpMatrix conjugate(const FpMatrix& m, const FpMatrix& p, const FpMatrix& p_inv) { return p * m * p_inv; }

inline Subspace coordinate_range(int p, int n, int from, int to) {
  std::vector<int> idx;
  for (int i = from; i < to; ++i) idx.push_back(i);
  return Subspace::coordinate(p, n, idx);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// purely toric case at two primes (ell = 5, primes 2 and 3)

struct ToricCase {
  GaloisModuleInstance inst;
  Subspace mu_part;  ///< the d-dimensional multiplicative submodule W
  int hat_prime = 2;
  int other_prime = 3;
};

/// Hypotheses: valid instance, Mt = Mf at both primes, W Galois-stable of
/// dimension d and fixed by sigma at the other prime, and the Galois module
/// generated by M(hat_prime) is everything. Conclusions follow the
/// derivation in order.
inline ReplayOutcome replay_toric_case(const ToricCase& tc) {
  ReplayOutcome out;
  const auto& inst = tc.inst;
  const int p = tc.hat_prime;
  const int q = tc.other_prime;
  out.hypotheses.push_back(detail::validity_check(inst));
  const bool have_primes = inst.primes.count(p) && inst.primes.count(q);
  out.hypotheses.push_back({"bad-primes-present", have_primes, have_primes ? "" : "missing data at one of the two primes"});
  if (!out.hypotheses_hold()) return out;
  const int n = inst.dim();
  const BadPrime& bp = inst.at(p);
  const BadPrime& bq = inst.at(q);
  const Subspace& w = tc.mu_part;

  out.hypotheses.push_back({"toric-at-both", bp.mt == bp.mf && bq.mt == bq.mf, "Mt = Mf is required at both primes"});
  const bool w_ok = w.ambient_dim() == n && w.dim() == inst.d && generate_submodule(w, inst.galois_gens) == w;
  out.hypotheses.push_back({"mu-part-stable", w_ok, "W must be a Galois-stable subspace of dimension d"});
  const FpMatrix one = FpMatrix::identity(inst.ell, n);
  const bool w_unram = w_ok && w.image(bq.sigma - one).is_zero();
  out.hypotheses.push_back({"mu-part-unramified", w_unram, "sigma at the other prime must fix W"});
  const Subspace hat_p = generate_submodule(bp.mt, inst.galois_gens);
  out.hypotheses.push_back({"hat-is-everything", hat_p.dim() == n, detail::dims(hat_p.dim(), n)});
  if (!out.hypotheses_hold()) return out;

  const Subspace& m = bp.mt;
  const Subspace meet = m.intersect(w);
  out.conclusions.push_back({"M-meets-W-trivially", meet.is_zero(), "dim(M & W) = " + std::to_string(meet.dim())});
  const bool direct = meet.is_zero() && (m + w).dim() == n;
  out.conclusions.push_back({"V-is-W-plus-M", direct, "dim(M + W) = " + std::to_string((m + w).dim())});
  const Subspace hat_q = hat_construction(m, bq.sigma);
  const bool hat_stable = generate_submodule(hat_q, inst.galois_gens) == hat_q;
  out.conclusions.push_back({"hat-of-M-is-V", hat_stable && hat_q.dim() == n,
                             "dim(M + sigma M) = " + std::to_string(hat_q.dim()) + (hat_stable ? "" : ", not Galois-stable")});
  const Subspace sm = m.image(bq.sigma);
  out.conclusions.push_back({"sigma-M-meets-M-trivially", sm.intersect(m).is_zero(),
                             "dim(sigma M & M) = " + std::to_string(sm.intersect(m).dim())});
  const Subspace fixed = kernel(bq.sigma - one);
  out.conclusions.push_back({"no-fixed-vectors-in-M", fixed.intersect(m).is_zero(),
                             "dim(ker(sigma - 1) & M) = " + std::to_string(fixed.intersect(m).dim())});
  out.conclusions.push_back({"fixed-vectors-are-W", fixed == w, detail::dims(fixed.dim(), inst.d)});
  const Subspace hat_other = generate_submodule(bq.mt, inst.galois_gens);
  out.conclusions.push_back({"hat-of-M-other-inside-W", w.contains(hat_other),
                             "dim(hat M(" + std::to_string(q) + ") & W) = " + std::to_string(hat_other.intersect(w).dim())});
  out.conclusions.push_back({"hat-of-M-other-equals-W", hat_other == w, detail::dims(hat_other.dim(), inst.d)});
  return out;
}

/// In the basis W + M: sigma_q = [[I, A], [0, I]], sigma_p = 1, complex
/// conjugation-like c = diag(chi I, I); everything conjugated by P.
inline ToricCase make_toric_case(int ell, int d, const FpMatrix& a, const FpMatrix& p_basis, int chi = 2,
                                 int hat_prime = 2, int other_prime = 3) {
  const int n = 2 * d;
  const FpMatrix id = FpMatrix::identity(ell, d);
  const FpMatrix zero(ell, d, d);
  const FpMatrix p_inv = p_basis.inverse();
  const FpMatrix sigma_q = detail::conjugate(FpMatrix::blocks(id, a, zero, id), p_basis, p_inv);
  const FpMatrix sigma_p = FpMatrix::identity(ell, n);
  const FpMatrix c = detail::conjugate(FpMatrix::blocks(id.scaled(chi), zero, zero, id), p_basis, p_inv);
  const Subspace w = detail::coordinate_range(ell, n, 0, d).image(p_basis);
  const Subspace m = detail::coordinate_range(ell, n, d, n).image(p_basis);

  ToricCase tc;
  tc.hat_prime = hat_prime;
  tc.other_prime = other_prime;
  tc.mu_part = w;
  tc.inst.ell = ell;
  tc.inst.d = d;
  tc.inst.galois_gens = {sigma_q, sigma_p, c};
  tc.inst.primes[hat_prime] = BadPrime{m, m, sigma_p, {c}, 1};
  tc.inst.primes[other_prime] = BadPrime{w, w, sigma_q, {sigma_q, c}, 1};
  return tc;
}

inline ToricCase toric_witness(int d = 1) {
  const int ell = 5;
  return make_toric_case(ell, d, FpMatrix::identity(ell, d), FpMatrix::identity(ell, 2 * d));
}

template <class Rng>
ToricCase random_toric_case(int d, Rng& rng, int ell = 5) {
  return make_toric_case(ell, d, random_invertible(ell, d, rng), random_invertible(ell, 2 * d, rng));
}

// ---------------------------------------------------------------------------
// t_2 = t_5 (ell = 3, primes 2 and 5)

/// Hypotheses: valid instance with both primes, and for each ordered pair
/// (p, p') the maximality consequence dim(Mt(p) + sigma_p' Mt(p)) = 2 t_p.
/// Conclusions: for both orders, dim (sigma_p' - 1)V <= t_p', which forces
/// t_p <= t_p'; then t_2 = t_5, and Mf(p) + hat Mt(p) = V.
inline ReplayOutcome replay_t2_equals_t5(const GaloisModuleInstance& inst, int p1 = 2, int p2 = 5) {
  ReplayOutcome out;
  out.hypotheses.push_back(detail::validity_check(inst));
  const bool have_primes = inst.primes.count(p1) && inst.primes.count(p2);
  out.hypotheses.push_back({"bad-primes-present", have_primes, have_primes ? "" : "missing data at one of the two primes"});
  if (!out.hypotheses_hold()) return out;
  const int n = inst.dim();
  const FpMatrix one = FpMatrix::identity(inst.ell, n);
  for (auto [p, q] : {std::pair{p1, p2}, std::pair{p2, p1}}) {
    const BadPrime& bp = inst.at(p);
    const Subspace hat = hat_construction(bp.mt, inst.at(q).sigma);
    out.hypotheses.push_back({"maximal-hat-" + std::to_string(p), hat.dim() == 2 * bp.t(), detail::dims(hat.dim(), 2 * bp.t())});
  }
  if (!out.hypotheses_hold()) return out;

  for (auto [p, q] : {std::pair{p1, p2}, std::pair{p2, p1}}) {
    const BadPrime& bp = inst.at(p);
    const BadPrime& bq = inst.at(q);
    const std::string tag = std::to_string(p) + "-" + std::to_string(q);
    const Subspace image_all = column_space(bq.sigma - one);
    out.conclusions.push_back({"image-bound-" + tag, image_all.dim() <= bq.t(),
                               "dim (sigma_" + std::to_string(q) + " - 1)V = " + std::to_string(image_all.dim()) +
                                   ", t_" + std::to_string(q) + " = " + std::to_string(bq.t())});
    const Subspace moved = bp.mt.image(bq.sigma - one);
    out.conclusions.push_back({"moved-part-" + tag, moved.dim() == bp.t() && bp.mt.intersect(moved).is_zero(),
                               "dim (sigma - 1)Mt = " + std::to_string(moved.dim())});
    out.conclusions.push_back({"t-order-" + tag, bp.t() <= bq.t(),
                               "t_" + std::to_string(p) + " = " + std::to_string(bp.t()) + ", t_" + std::to_string(q) + " = " + std::to_string(bq.t())});
    const Subspace kappa = hat_construction(bp.mt, bq.sigma);
    const int span = (bp.mf + kappa).dim();
    out.conclusions.push_back({"fills-V-" + std::to_string(p), span == n, detail::dims(span, n)});
  }
  out.conclusions.push_back({"t2-equals-t5", inst.at(p1).t() == inst.at(p2).t(), ""});
  return out;
}

/// Coordinates X = [0, t), Y = [t, 2t), Z = [2t, 2d); Mt(p1) = X, Mf(p1) = X+Z,
/// Mt(p2) = Y, Mf(p2) = Y+Z; sigma_p1 - 1 = A1: Y -> X and
/// sigma_p2 - 1 = A2: X -> Y; all conjugated by P.
inline GaloisModuleInstance make_t2_t5_instance(int ell, int d, int t, const FpMatrix& a1, const FpMatrix& a2,
                                                const FpMatrix& p_basis, int p1 = 2, int p2 = 5) {
  if (t < 0 || t > d) throw std::invalid_argument("make_t2_t5_instance: need 0 <= t <= d");
  const int n = 2 * d;
  FpMatrix s1 = FpMatrix::identity(ell, n);
  FpMatrix s2 = FpMatrix::identity(ell, n);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      s1(i, t + j) = a1(i, j);
      s2(t + i, j) = a2(i, j);
    }
  }
  const FpMatrix p_inv = p_basis.inverse();
  const Subspace x = detail::coordinate_range(ell, n, 0, t);
  const Subspace y = detail::coordinate_range(ell, n, t, 2 * t);
  const Subspace z = detail::coordinate_range(ell, n, 2 * t, n);
  GaloisModuleInstance inst;
  inst.ell = ell;
  inst.d = d;
  const FpMatrix g1 = detail::conjugate(s1, p_basis, p_inv);
  const FpMatrix g2 = detail::conjugate(s2, p_basis, p_inv);
  inst.galois_gens = {g1, g2};
  inst.primes[p1] = BadPrime{x.image(p_basis), (x + z).image(p_basis), g1, {g1}, 1};
  inst.primes[p2] = BadPrime{y.image(p_basis), (y + z).image(p_basis), g2, {g2}, 1};
  return inst;
}

/// t_2 = t_5 = 1 on F_3^4.
inline GaloisModuleInstance t2_t5_witness() {
  const int ell = 3;
  const FpMatrix one = FpMatrix::identity(ell, 1);
  return make_t2_t5_instance(ell, 2, 1, one, one, FpMatrix::identity(ell, 4));
}

template <class Rng>
GaloisModuleInstance random_t2_t5_instance(int d, Rng& rng, int ell = 3) {
  std::uniform_int_distribution<int> pick(0, d);
  const int t = pick(rng);
  const FpMatrix a1 = t ? random_invertible(ell, t, rng) : FpMatrix(ell, 0, 0);
  const FpMatrix a2 = t ? random_invertible(ell, t, rng) : FpMatrix(ell, 0, 0);
  return make_t2_t5_instance(ell, d, t, a1, a2, random_invertible(ell, 2 * d, rng));
}

/// Exhaustive search for a valid instance with the given toric dimensions
/// satisfying both maximality hypotheses. Mt(p1) <= Mf(p1) is fixed to
/// coordinate subspaces (every flag of these dimensions is a GL-translate
/// of it); Mt(p2) <= Mf(p2) and the two inertia maps are enumerated.
inline std::optional<GaloisModuleInstance> search_t2_t5_instance(int ell, int d, int t1, int t2, int p1 = 2, int p2 = 5) {
  if (d < 1 || d > 2) throw std::invalid_argument("search_t2_t5_instance: exhaustive only for d <= 2");
  if (t1 < 0 || t1 > d || t2 < 0 || t2 > d) throw std::invalid_argument("search_t2_t5_instance: need 0 <= t <= d");
  const int n = 2 * d;
  const Subspace mt1 = detail::coordinate_range(ell, n, 0, t1);
  const Subspace mf1 = detail::coordinate_range(ell, n, 0, n - t1);
  const auto comp1 = detail::complement_basis(mf1);

  // every linear map V -> Mt vanishing on Mf, as matrices
  auto inertia_maps = [&](const Subspace& mt, const Subspace& mf, const std::vector<FpVector>& comp) {
    std::vector<FpMatrix> out;
    const auto targets = mt.elements();
    const std::size_t k = comp.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= targets.size();
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<FpVector> images;
      std::size_t c = code;
      for (std::size_t i = 0; i < k; ++i, c /= targets.size()) images.push_back(targets[c % targets.size()]);
      out.push_back(FpMatrix::identity(ell, n) + detail::map_from_complement(mf, comp, images));
    }
    return out;
  };
  const auto sigma1_choices = inertia_maps(mt1, mf1, comp1);
  const auto subspaces = all_subspaces(ell, n);
  for (const auto& mt2 : subspaces) {
    if (mt2.dim() != t2) continue;
    for (const auto& mf2 : subspaces) {
      if (mf2.dim() != n - t2 || !mf2.contains(mt2)) continue;
      const auto comp2 = detail::complement_basis(mf2);
      std::optional<FpMatrix> sigma2;
      for (const auto& s : inertia_maps(mt2, mf2, comp2)) {
        if (hat_construction(mt1, s).dim() == 2 * t1) {
          sigma2 = s;
          break;
        }
      }
      if (!sigma2) continue;
      for (const auto& s1 : sigma1_choices) {
        if (hat_construction(mt2, s1).dim() != 2 * t2) continue;
        GaloisModuleInstance inst;
        inst.ell = ell;
        inst.d = d;
        inst.galois_gens = {s1, *sigma2};
        inst.primes[p1] = BadPrime{mt1, mf1, s1, {s1}, 1};
        inst.primes[p2] = BadPrime{mt2, mf2, *sigma2, {*sigma2}, 1};
        return inst;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// mixed reduction and the maximal fixed hull

/// kappa = Mf(p) & W for the multiplicative part W. When a_p > 0 this is
/// nonzero, it lies in Mf(p), and the component change reduces to
/// dim(kappa & Mt(p)) >= 0, so maximality survives the quotient and the
/// step repeats. Replayed for `steps` rounds; the kernel order exponent
/// grows by dim kappa each round.
inline ReplayOutcome replay_mixed_chain(const GaloisModuleInstance& inst, const Subspace& mu_part, int p, int steps = 3) {
  ReplayOutcome out;
  out.hypotheses.push_back(detail::validity_check(inst));
  out.hypotheses.push_back({"bad-prime-present", inst.primes.count(p) > 0, ""});
  if (!out.hypotheses_hold()) return out;
  const BadPrime& bp = inst.at(p);
  out.hypotheses.push_back({"mixed-reduction", bp.mf.dim() > inst.d, "dim Mf = " + std::to_string(bp.mf.dim()) + ", d = " + std::to_string(inst.d)});
  const bool w_ok = mu_part.ambient_dim() == inst.dim() && mu_part.dim() == inst.d;
  out.hypotheses.push_back({"mu-part-dimension", w_ok, "W must have dimension d"});
  if (!out.hypotheses_hold()) return out;

  const Subspace kappa = bp.mf.intersect(mu_part);
  out.conclusions.push_back({"kernel-nonzero", !kappa.is_zero(), "dim kappa = " + std::to_string(kappa.dim())});
  const int delta = component_delta(inst, p, kappa);
  out.conclusions.push_back({"delta-reduces", delta == kappa.intersect(bp.mt).dim(), "delta = " + std::to_string(delta)});
  out.conclusions.push_back({"maximality-preserved", delta >= 0, "delta = " + std::to_string(delta)});
  int exponent = 0;
  bool growing = !kappa.is_zero();
  for (int i = 1; i <= steps; ++i) {
    const int next = exponent + kappa.dim();
    growing = growing && next > exponent;
    exponent = next;
  }
  out.conclusions.push_back({"kernels-grow", growing, std::to_string(steps) + " rounds, kernel order ell^" + std::to_string(exponent)});
  return out;
}

/// kappa = Galois module generated by Mf(p). Since Mt <= Mf <= kappa the
/// component change is 2d - dim kappa >= 0; maximality forces kappa = V.
inline ReplayOutcome replay_maximal_fixed_hull(const GaloisModuleInstance& inst, int p) {
  ReplayOutcome out;
  out.hypotheses.push_back(detail::validity_check(inst));
  out.hypotheses.push_back({"bad-prime-present", inst.primes.count(p) > 0, ""});
  if (!out.hypotheses_hold()) return out;
  const BadPrime& bp = inst.at(p);
  const Subspace kappa = generate_submodule(bp.mf, inst.galois_gens);
  const int delta = component_delta(inst, p, kappa);
  out.conclusions.push_back({"flags-inside-kernel", kappa.contains(bp.mf) && bp.mf.contains(bp.mt), ""});
  out.conclusions.push_back({"delta-formula", delta == inst.dim() - kappa.dim(), "delta = " + std::to_string(delta)});
  out.conclusions.push_back({"delta-nonnegative", delta >= 0, ""});
  out.conclusions.push_back({"maximal-forces-everything", delta <= 0 && kappa.dim() == inst.dim(),
                             detail::dims(kappa.dim(), inst.dim())});
  return out;
}

// ---------------------------------------------------------------------------
// random valid instances

/// Random valid instance: for each prime a random t in [0, d], random
/// flags and a random inertia map V/Mf -> Mt, in a random basis.
template <class Rng>
GaloisModuleInstance random_instance(int ell, int d, const std::vector<int>& bad_primes, Rng& rng) {
  GaloisModuleInstance inst;
  inst.ell = ell;
  inst.d = d;
  const int n = 2 * d;
  std::uniform_int_distribution<int> pick_t(0, d);
  std::uniform_int_distribution<int> coef(0, ell - 1);
  for (int p : bad_primes) {
    const int t = pick_t(rng);
    const FpMatrix basis = random_invertible(ell, n, rng);
    const FpMatrix basis_inv = basis.inverse();
    // Mt = [0, t), Mf = [0, 2d - t); the top t coordinates map into Mt
    FpMatrix s = FpMatrix::identity(ell, n);
    for (int i = 0; i < t; ++i) {
      for (int j = n - t; j < n; ++j) s(i, j) = coef(rng);
    }
    const FpMatrix sigma = detail::conjugate(s, basis, basis_inv);
    BadPrime bp{detail::coordinate_range(ell, n, 0, t).image(basis), detail::coordinate_range(ell, n, 0, n - t).image(basis),
                sigma, {sigma}, 1};
    inst.galois_gens.push_back(sigma);
    inst.primes[p] = std::move(bp);
  }
  return inst;
}

// ---------------------------------------------------------------------------
// point counts

/// True iff (ell - 1)^2 > q, i.e. ell > 1 + sqrt(q), so ell^(4d) exceeds the
/// bound (1 + sqrt q)^(4d) for every d >= d_min >= 1.
inline bool weil_contradiction(long long ell, long long k, long long d_min, long long q) {
  if (q < 2 || ell < 2) throw std::invalid_argument("weil_contradiction: need ell, q >= 2");
  if (k < 1 || d_min < 1) throw std::invalid_argument("weil_contradiction: k and d_min must be positive");
  return (ell - 1) * (ell - 1) > q;
}

}  // namespace semistable
