#pragma once

/**
 * @file scripts.hpp
 * @brief The two compiled-in chains: N = 6 with ell = 5 and N = 10 with
 * ell = 3. Field ids refer to records in fields.json: K6 is
 * Q(zeta5, 2^(1/5), 3^(1/5)), Jn is Q(zeta5, n^(1/5)), K10 is the degree-18
 * field used for N = 10 and F10 its degree-6 subfield.
 */

#include <string>

#include <json.hpp>

#include "proof_script.hpp"

namespace semistable {

namespace script_detail {

using nlohmann::json;

struct Builder {
  ProofScript script;
  void add(std::string id, StepKind kind, std::string claim, json inputs) {
    script.steps.push_back(ProofStep{script.case_id + "." + std::move(id), kind, std::move(claim), std::move(inputs)});
  }
};

inline json pi_squared(int count) {
  json c = json::array();
  if (count == 1) return json::array({json::array({"pi", 2})});
  for (int i = 1; i <= count; ++i) c.push_back(json::array({"pi_" + std::to_string(i), 2}));
  return c;
}

}  // namespace script_detail

inline ProofScript build_script_n6() {
  using script_detail::json;
  script_detail::Builder b;
  b.script.case_id = "n6";
  const std::string bound = "5^5/4 * 6^4/5";

  b.add("fontaine-product", StepKind::RamExponent,
        "N=6: a field cut out by 5-power torsion of a semistable abelian variety with good reduction outside 6 has root discriminant below 5^(5/4) 6^(4/5)",
        {{"op", "fontaine_product"}, {"ell", 5}, {"tame_primes", {2, 3}}, {"expect", bound}});
  b.add("fontaine-n6", StepKind::CompareBound, "N=6: 5^(5/4) 6^(4/5) is about 31.349, below 31.645",
        {{"lhs", bound}, {"rhs", "31.645"}, {"expect", "Less"}, {"decimal", "31.349"}});
  b.add("degree-bound", StepKind::DegreeBound,
        "N=6: the GRH table then bounds [L:Q] < 2400, hence [L:K] < 24 over K = Q(zeta5, 2^(1/5), 3^(1/5))",
        {{"op", "max_degree"}, {"delta", bound}, {"expect_degree", 2400}, {"base_degree", 100}, {"expect_relative", 24}});
  b.add("delta-K", StepKind::RamExponent, "N=6: K has degree 100 and root discriminant 5^(23/20) 6^(4/5)",
        {{"op", "root_disc"}, {"field", "K6"}, {"degree", 100}, {"expect", "5^23/20 * 6^4/5"}});
  b.add("unramified-2-3", StepKind::RamExponent,
        "N=6: delta_K already attains the bound at 2 and 3, so L/K is unramified there",
        {{"op", "same_exponents"}, {"fields", {"K6"}}, {"rhs", bound}, {"primes", {2, 3}}});

  // tame case
  b.add("tame-norm", StepKind::RamExponent,
        "N=6, tame case: the relative discriminant contributes less than 5^(1/20) to the root discriminant",
        {{"op", "tame_norm_exponent"}, {"field", "K6"}, {"p", 5}, {"expect", "5^1/20"}});
  b.add("tame-delta", StepKind::CompareBound, "N=6, tame case: delta_L < 5^(23/20) 6^(4/5) 5^(1/20), about 28.925, below 29.094",
        {{"lhs", {"rd:K6", "5^1/20"}}, {"rhs", "29.094"}, {"expect", "Less"}, {"decimal", "28.925"}});
  b.add("tame-degree", StepKind::DegreeBound, "N=6, tame case: [L:Q] < 1000, so [L:K] < 10",
        {{"op", "odlyzko_cutoff"},
         {"delta", {"rd:K6", "5^1/20"}},
         {"degree", 1000},
         {"expect_bound", "29.094"},
         {"base_degree", 100},
         {"expect_relative", 10}});
  b.add("tame-aut", StepKind::GroupFact,
        "N=6, tame case: no group of order below 10 has an automorphism group of order divisible by 5",
        {{"op", "aut_coprime"}, {"max_order", 9}, {"prime", 5}});
  b.add("tame-class-number", StepKind::RayClassFact, "N=6, tame case: Q(zeta5, 2^(1/5)) has class number 1",
        {{"op", "class_number"}, {"field", "J2"}, {"expect", 1}});
  b.add("tame-unit", StepKind::RayClassFact,
        "N=6, tame case: the golden-ratio unit reduces to -2, a generator of F5*",
        {{"op", "residue_generation"}, {"record", "J2-units"}, {"expect", true}});
  b.add("tame-residue-field", StepKind::RamExponent,
        "N=6, tame case: 5 is totally ramified in Q(zeta5, 2^(1/5)), so the residue field at 5 is F5",
        {{"op", "residue_field"}, {"field", "J2"}, {"p", 5}, {"expect_f", 1}, {"expect_g", 1}});
  b.add("tame-unramified-degrees", StepKind::RamExponent,
        "N=6, tame case: a subextension of degree prime to 5 and below 10 has ramification index 1 at 5",
        {{"op", "unramified_degree"}, {"degrees", {2, 3, 4, 6, 7, 8, 9}}, {"upper", {1, 5}}, {"forbidden", 5}});

  // wild case
  b.add("wild-orders", StepKind::GroupFact, "N=6, wild case: [L:K] is 10, 15 or 20",
        {{"op", "group_orders"}, {"bound", 24}, {"prime", 5}, {"expect", {10, 15, 20}}});
  b.add("wild-groups", StepKind::GroupFact,
        "N=6, wild case: every group of order 10, 15 or 20 has a normal 5-Sylow and an abelianization that is not a 5-group",
        {{"op", "sylow_abelianization"}, {"orders", {10, 15, 20}}, {"prime", 5}});

  // degree-5 case
  b.add("order125-surjectors", StepKind::GroupFact, "N=6, degree-5 case: three groups of order 125 surject onto (Z/5)^2",
        {{"op", "surjector_count"}, {"order", 125}, {"target", "C5xC5"}, {"expect_count", 3}});
  b.add("order125-kernel", StepKind::GroupFact,
        "N=6, degree-5 case: each group of order 125 that surjects onto (Z/5)^2 maps onto Z/5 with kernel (Z/5)^2",
        {{"op", "kernel_property"}, {"order", 125}, {"target", "C5xC5"}, {"image", "C5"}, {"kernel", "C5xC5"}});
  b.add("fontaine-cap", StepKind::RamExponent,
        "N=6, degree-5 case: over a wildly ramified D, 5^(23/20) 5^(10/100) = 5^(5/4), so the discriminant exponent of E/D is below 10",
        {{"op", "fontaine_cap"}, {"field", "J2"}, {"p", 5}, {"ell", 5}, {"ext_degree", 5}, {"expect_cap", 10}});
  b.add("fontaine-cap-identity", StepKind::RamExponent, "N=6, degree-5 case: 5^(23/20) 5^(10/100) = 5^(5/4) exactly",
        {{"op", "identity"}, {"lhs", {"5^23/20", "5^10/100"}}, {"rhs", "5^5/4"}});
  b.add("exponent-sieve", StepKind::RamExponent,
        "N=6, degree-5 case: the only admissible discriminant exponent of a ramified Z/5 extension below 10 is 8",
        {{"op", "wild_sieve"}, {"ell", 5}, {"e", 5}, {"strict_upper", 10}, {"expect", {8}}});
  b.add("filtration", StepKind::RamExponent, "N=6, degree-5 case: ramification groups of orders 5, 5 give different exponent 8",
        {{"op", "filtration"}, {"orders", {5, 5}}, {"expect", 8}});
  b.add("tame-D-cap", StepKind::RamExponent,
        "N=6, degree-5 case: for D = Q(zeta5, 24^(1/5)), 5^(23/20) 5^(50/500) = 5^(5/4) bounds the exponent over K below 10",
        {{"op", "fontaine_cap"}, {"field", "K6"}, {"p", 5}, {"ell", 5}, {"ext_degree", 5}, {"expect_cap", 10}});
  b.add("tame-D-tower", StepKind::RamExponent,
        "N=6, degree-5 case: for D = Q(zeta5, 24^(1/5)) the tower L/K/D keeps the exponent of E/D below 10",
        {{"op", "tower_cap"}, {"inner_exponent", 8}, {"inner_multiplicity", 5}, {"outer_strict", 10}, {"scale", 5}, {"expect_cap", 10}});
  b.add("conductor", StepKind::RamExponent, "N=6, degree-5 case: discriminant exponent 8 over 4 faithful characters gives conductor exponent 2",
        {{"op", "conductor_cyclic"}, {"disc_exponent", 8}, {"group_order", 5}, {"expect", 2}});
  b.add("conductor-discriminant", StepKind::RamExponent,
        "N=6, degree-5 case: a Z/5 extension of conductor pi^2 has discriminant pi^8",
        {{"op", "conductor_discriminant"}, {"field", "J2"}, {"conductor", json::array({json::array({"pi", 2})})}, {"group", "C5"},
         {"expect", json::array({json::array({"pi", 8})})}});
  b.add("D-unramified-2-3", StepKind::RamExponent,
        "N=6, degree-5 case: for n in {6, 12, 24, 48}, delta_D matches delta_K at 2 and 3, so E/D is unramified there",
        {{"op", "same_exponents"}, {"fields", {"J6", "J12", "J24", "J48"}}, {"rhs", "rd:K6"}, {"primes", {2, 3}}});
  b.add("D-inertia", StepKind::RamExponent,
        "N=6, degree-5 case: for n in {2, 3}, K/D has ramification index 5 at the missing prime, so E can be taken unramified there",
        {{"op", "inertia_index"}, {"top", "K6"}, {"cases", json::array({{{"base", "J2"}, {"p", 3}}, {{"base", "J3"}, {"p", 2}}})}, {"expect", 5}});
  const struct {
    const char* id;
    int primes;
    int value;
  } rows[] = {{"J2", 1, 1}, {"J3", 1, 1}, {"J6", 1, 5}, {"J12", 1, 5}, {"J24", 5, 5}, {"J48", 1, 5}};
  for (const auto& r : rows) {
    const std::string n = std::string(r.id).substr(1);
    b.add(std::string("rayclass-") + r.id, StepKind::RayClassFact,
          "N=6, degree-5 case: Q(zeta5, " + n + "^(1/5)) has ray class number " + std::to_string(r.value) +
              " modulo the square of the primes above 5" + (r.value == 1 ? ", so no E exists" : ", and the only such E is K"),
          {{"op", "ray_class_value"}, {"field", r.id}, {"conductor", script_detail::pi_squared(r.primes)}, {"expect", r.value}});
  }

  // module-theoretic steps
  b.add("fixed-points", StepKind::GroupFact, "N=6: a 5-group acting on a nonzero F5-space fixes at least 4 nonzero vectors",
        {{"op", "ell_fixed_points"}, {"ell", 5}, {"dims", {2, 3}}, {"samples", 20}});
  b.add("sim-toric", StepKind::SimReplay, "N=6: the purely toric configuration at 2 and 3 forces the fixed vectors at 3 to be the multiplicative part",
        {{"op", "toric"}, {"ell", 5}, {"primes", {2, 3}}, {"dims", {1, 2}}, {"random", 50}});
  b.add("sim-mixed", StepKind::SimReplay, "N=6: mixed reduction yields an infinite chain of isogenous varieties",
        {{"op", "mixed_chain"}, {"ell", 5}, {"dims", {1, 2}}, {"steps", 3}, {"random", 10}});
  b.add("sim-hull", StepKind::SimReplay, "N=6: the Galois module generated by the finite part is everything",
        {{"op", "maximal_hull"}, {"ell", 5}, {"dims", {1, 2}}, {"random", 20}});
  b.add("kronecker-weber", StepKind::KWFact, "N=6: Q has no cyclic quintic extension unramified outside 2 and 3",
        {{"ell", 5}, {"primes", {2, 3}}, {"expect", false}});
  b.add("weil", StepKind::WeilCheck, "N=6: 5^(4d) points exceed the Weil bound over F7",
        {{"ell", 5}, {"k", 2}, {"d_min", 1}, {"q", 7}, {"expect", true}});
  return b.script;
}

inline ProofScript build_script_n10() {
  using script_detail::json;
  script_detail::Builder b;
  b.script.case_id = "n10";
  const std::string bound = "3^3/2 * 10^2/3";

  b.add("fontaine-product", StepKind::RamExponent,
        "N=10: a field cut out by 3-power torsion of a semistable abelian variety with good reduction outside 10 has root discriminant below 3^(3/2) 10^(2/3)",
        {{"op", "fontaine_product"}, {"ell", 3}, {"tame_primes", {2, 5}}, {"expect", bound}});
  b.add("fontaine-n10", StepKind::CompareBound, "N=10: 3^(3/2) 10^(2/3) is about 24.118, below 24.258",
        {{"lhs", bound}, {"rhs", "24.258"}, {"expect", "Less"}, {"decimal", "24.118"}});
  b.add("degree-bound", StepKind::DegreeBound, "N=10: the GRH table bounds [L:Q] < 280, hence [L:K] < 16 over the degree-18 field K",
        {{"op", "max_degree"}, {"delta", bound}, {"expect_degree", 280}, {"base_degree", 18}, {"expect_relative", 16}});
  b.add("delta-K", StepKind::RamExponent, "N=10: K has degree 18 and root discriminant 3^(7/6) 10^(2/3)",
        {{"op", "root_disc"}, {"field", "K10"}, {"degree", 18}, {"expect", "3^7/6 * 10^2/3"}});
  b.add("unramified-2-5", StepKind::RamExponent, "N=10: delta_K attains the bound at 2 and 5, so L/K is unramified there",
        {{"op", "same_exponents"}, {"fields", {"K10"}}, {"rhs", bound}, {"primes", {2, 5}}});
  b.add("splitting-2", StepKind::RayClassFact, "N=10: the Hilbert class field H of K has exactly 3 primes above 2",
        {{"op", "splitting"}, {"k", "K10"}, {"h", "H54"}, {"p", 2}, {"expect", 3}});
  b.add("splitting-5", StepKind::RayClassFact, "N=10: the Hilbert class field H of K has exactly 3 primes above 5",
        {{"op", "splitting"}, {"k", "K10"}, {"h", "H54"}, {"p", 5}, {"expect", 3}});

  // module-theoretic steps
  b.add("sim-t2-t5", StepKind::SimReplay, "N=10: the toric dimensions at 2 and 5 agree",
        {{"op", "t2_t5"}, {"ell", 3}, {"dims", {1, 2}}, {"random", 50}});
  b.add("sim-t2-t5-search", StepKind::SimReplay, "N=10: configurations with different toric dimensions at 2 and 5 do not exist in small dimension",
        {{"op", "t2_t5_search"}, {"ell", 3}, {"d_max", 2}});
  b.add("sim-toric", StepKind::SimReplay, "N=10: the purely toric configuration at 2 and 5 behaves as for N=6",
        {{"op", "toric"}, {"ell", 3}, {"primes", {2, 5}}, {"dims", {1, 2}}, {"random", 50}});
  b.add("sim-mixed", StepKind::SimReplay, "N=10: mixed reduction yields an infinite chain of isogenous varieties",
        {{"op", "mixed_chain"}, {"ell", 3}, {"dims", {1, 2}}, {"steps", 3}, {"random", 10}});
  b.add("sim-hull", StepKind::SimReplay, "N=10: the Galois module generated by the finite part is everything",
        {{"op", "maximal_hull"}, {"ell", 3}, {"dims", {1, 2}}, {"random", 20}});
  b.add("sim-hat-law", StepKind::SimReplay, "N=10: M + (sigma-1)M has twice the dimension of M exactly when sigma-1 is injective on M and misses M",
        {{"op", "hat_law"}, {"ell", 3}, {"dims", {1, 2}}, {"random", 50}});
  b.add("unipotent-pair", StepKind::GroupFact,
        "N=10: block unipotent pairs over F3 generate a group of order dividing 27 only when the off-diagonal block vanishes (t = 1, 2)",
        {{"op", "unipotent_pair"}, {"t", {1, 2}}});
  b.add("nilpotent-pair", StepKind::GroupFact,
        "N=10: [[1,a],[0,1]] and [[1,0],[1,1]] over F3[a]/(a^k) generate a group of order dividing 27 only for k = 1",
        {{"op", "nilpotent_pair"}, {"q", 3}, {"k_max", 3}, {"bound", 27}, {"expect_k", {1}}});
  b.add("commutator-relation", StepKind::GroupFact,
        "N=10: the commutator of the pair commutes with the first matrix exactly when a^2 = 0",
        {{"op", "commutator_relation"}, {"q", 3}, {"k", 3}});

  // tame case
  b.add("tame-norm", StepKind::RamExponent, "N=10, tame case: the relative discriminant contributes less than 3^(3/18)",
        {{"op", "tame_norm_exponent"}, {"field", "K10"}, {"p", 3}, {"expect", "3^3/18"}});
  b.add("tame-delta", StepKind::CompareBound, "N=10, tame case: delta_L < 3^(4/3) 10^(2/3), about 20.082, below 20.221",
        {{"lhs", {"rd:K10", "3^3/18"}}, {"rhs", "20.221"}, {"expect", "Less"}, {"decimal", "20.082"}});
  b.add("tame-degree", StepKind::DegreeBound, "N=10, tame case: [L:Q] < 126, so [L:K] <= 6",
        {{"op", "odlyzko_cutoff"},
         {"delta", {"rd:K10", "3^3/18"}},
         {"degree", 126},
         {"expect_bound", "20.221"},
         {"base_degree", 18},
         {"expect_relative", 7}});
  b.add("tame-class-number", StepKind::RayClassFact, "N=10, tame case: K has class number 3",
        {{"op", "class_number"}, {"field", "K10"}, {"expect", 3}});
  b.add("tame-residue-field-K", StepKind::RamExponent, "N=10, tame case: the three primes of K above 3 have residue field F3",
        {{"op", "residue_field"}, {"field", "K10"}, {"p", 3}, {"expect_f", 1}, {"expect_g", 3}});
  b.add("tame-residue-field-F", StepKind::RamExponent, "N=10, tame case: the three primes of F above 3 have residue field F3",
        {{"op", "residue_field"}, {"field", "F10"}, {"p", 3}, {"expect_f", 1}, {"expect_g", 3}});
  b.add("tame-units", StepKind::RayClassFact, "N=10, tame case: -1 and the fundamental units of F generate (F3*)^3",
        {{"op", "residue_generation"}, {"record", "F10-units"}, {"expect", true}});

  // wild case
  b.add("wild-candidates", StepKind::GroupFact,
        "N=10, wild case: of the groups of order 6, 12, 15, only A4 has abelianization a 3-group",
        {{"op", "ab_candidates"}, {"orders", {6, 12, 15}}, {"prime", 3}, {"expect", {"A4"}}});
  b.add("a4-unique", StepKind::GroupFact, "N=10, wild case: A4 is the only group of order 12 with abelianization Z/3",
        {{"op", "unique_with_abelianization"}, {"order", 12}, {"abelianization", {3}}, {"expect", "A4"}});
  b.add("a4-normal", StepKind::GroupFact, "N=10, wild case: A4 has no normal subgroup of order 6 or 3",
        {{"op", "no_normal_subgroup"}, {"group", "A4"}, {"orders", {6, 3}}});
  b.add("window-low", StepKind::CompareBound,
        "N=10, wild case: a relative discriminant of norm at most 3^63 would give delta_L about 23.039, below 23.089",
        {{"lhs", {"rd:K10", "3^63/216"}}, {"rhs", "23.089"}, {"expect", "Less"}, {"decimal", "23.039"}});
  b.add("window-low-degree", StepKind::DegreeBound, "N=10, wild case: that is impossible in degree 216, so the norm is at least 3^66",
        {{"op", "odlyzko_cutoff"}, {"delta", {"rd:K10", "3^63/216"}}, {"degree", 216}, {"expect_bound", "23.089"}, {"contradicts_degree", 216}});
  b.add("window-high", StepKind::RamExponent,
        "N=10, wild case: norm 3^72 would already reach 3^(3/2) 10^(2/3), so the norm is at most 3^69",
        {{"op", "identity"}, {"lhs", {"rd:K10", "3^72/216"}}, {"rhs", bound}});
  b.add("window-frv", StepKind::RamExponent, "N=10, wild case: 3^66 <= 3^(3 frv) <= 3^69 gives frv in {22, 23}",
        {{"op", "norm_window"}, {"low", 66}, {"high", 69}, {"step", 3}, {"expect", {22, 23}}});
  b.add("e-elimination", StepKind::RamExponent,
        "N=10, wild case: e = 3 is impossible since fr = 4 divides neither 22 nor 23; e = 6 and 12 need the A4 facts",
        {{"op", "e_elimination"}, {"degree", 12}, {"ell", 3}, {"frv", {22, 23}}, {"expect_survivors", {6, 12}}});

  // conductor cases
  const struct {
    const char* group;
    const char* expect;
  } cases[] = {{"C9", "3^3/2"}, {"C3xC3", "3^3/2"}, {"C3", "3^3/2"}};
  for (const auto& c : cases) {
    b.add(std::string("conductor-") + c.group, StepKind::RamExponent,
          std::string("N=10: with group ") + c.group + ", a conductor divisible by the cube of the primes above 3 pushes delta_L,3 to 3^(3/2)",
          {{"op", "conductor_fontaine"}, {"field", "K10"}, {"p", 3}, {"ell", 3}, {"conductor_exponent", 3}, {"group", c.group}, {"expect", c.expect}});
  }
  b.add("conductor-identity", StepKind::RamExponent, "N=10: 3^(7/6) 3^(54/162) = 3^(3/2) exactly",
        {{"op", "identity"}, {"lhs", {"3^7/6", "3^54/162"}}, {"rhs", "3^3/2"}});
  b.add("rayclass-K10", StepKind::RayClassFact,
        "N=10: K has ray class number 3 modulo the square of the primes above 3, equal to its class number",
        {{"op", "ray_class_value"}, {"field", "K10"}, {"conductor", script_detail::pi_squared(3)}, {"expect", 3}, {"equals_class_number", true}});
  b.add("kronecker-weber", StepKind::KWFact, "N=10: Q has no cyclic cubic extension unramified outside 2 and 5",
        {{"ell", 3}, {"primes", {2, 5}}, {"expect", false}});
  b.add("weil", StepKind::WeilCheck, "N=10: 3^(4d) points exceed the Weil bound over F3",
        {{"ell", 3}, {"k", 2}, {"d_min", 1}, {"q", 3}, {"expect", true}});
  return b.script;
}

inline ProofScript build_script(const std::string& case_id) {
  if (case_id == "n6") return build_script_n6();
  if (case_id == "n10") return build_script_n10();
  throw ConfigError("unknown case '" + case_id + "'");
}

}  // namespace semistable
