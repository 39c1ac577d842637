#pragma once

/**
 * @file cft_data.hpp
 * @brief Certified class-field data (field descriptors, ray class numbers,
 * unit residue images, splitting data) plus the checks that can be done
 * internally: residue generation, Kronecker-Weber over Q, and splitting
 * bookkeeping.
 *
 * Ray class numbers, class numbers and unit images are trusted inputs.
 * Everything derivable from them is recomputed at load time and any
 * mismatch raises DataError naming the record.
 */

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "factored_real.hpp"
#include "ramification.hpp"

namespace semistable {

struct RayClassRecord {
  std::string field_id;
  std::vector<std::pair<std::string, std::int64_t>> conductor;  ///< formal prime symbol, exponent
  std::int64_t ray_class_number = 1;
  std::int64_t class_number = 1;
  std::string provenance;

  FormalIdeal conductor_ideal() const {
    FormalIdeal out;
    for (const auto& [sym, e] : conductor) out = out * FormalIdeal::atom(sym, Rational(e));
    return out;
  }
};

struct UnitImageRecord {
  std::string id;
  std::string field_id;
  std::string modulus;
  std::uint64_t q = 0;
  int copies = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<std::int64_t>> images;  ///< residues mod q, one k-tuple per unit
  std::string provenance;
};

struct SplittingRecord {
  std::string field_id;
  std::int64_t degree = 0;
  std::vector<std::string> compositum_of;  ///< empty for a field given by local data
  std::map<std::uint64_t, PrimeLocalData> local;  ///< e, f, g per prime
  std::string provenance;
};

struct CertifiedData {
  std::map<std::string, FieldDescriptor> fields;
  std::vector<RayClassRecord> ray_class;  ///< in table order
  std::vector<UnitImageRecord> unit_images;
  std::map<std::string, SplittingRecord> splitting;

  const FieldDescriptor& field(const std::string& id) const {
    auto it = fields.find(id);
    if (it == fields.end()) throw ConfigError("no field record '" + id + "'");
    return it->second;
  }
  const RayClassRecord& ray_class_for(const std::string& field_id) const {
    for (const auto& r : ray_class) {
      if (r.field_id == field_id) return r;
    }
    throw ConfigError("no ray class record for field '" + field_id + "'");
  }
  const UnitImageRecord& unit_image(const std::string& id) const {
    for (const auto& u : unit_images) {
      if (u.id == id) return u;
    }
    throw ConfigError("no unit image record '" + id + "'");
  }
  const SplittingRecord& splitting_for(const std::string& field_id) const {
    auto it = splitting.find(field_id);
    if (it == splitting.end()) throw ConfigError("no splitting record for field '" + field_id + "'");
    return it->second;
  }
};

/// Records the built-in proof scripts consume.
struct RequiredRecords {
  std::vector<std::string> fields;
  std::vector<std::string> ray_class_fields;
  std::vector<std::string> unit_images;
  std::vector<std::string> splitting;
};

inline const RequiredRecords& builtin_requirements() {
  static const RequiredRecords r{{"J2", "J3", "J6", "K6", "J12", "J24", "J48", "K10", "F10"},
                                 {"J2", "J3", "J6", "J12", "J24", "J48", "K10"},
                                 {"J2-units", "F10-units"},
                                 {"K10", "B20", "H54"}};
  return r;
}

namespace detail {

using nlohmann::json;

inline const json& member(const json& j, const char* key, const std::string& record) {
  if (!j.is_object() || !j.contains(key)) throw DataError(record + ": missing field '" + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const json& j, const char* key, const std::string& record) {
  try {
    return member(j, key, record).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(record + ": field '" + key + "' has the wrong type");
  }
}

inline Rational get_rational(const json& j, const char* key, const std::string& record) {
  const json& v = member(j, key, record);
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return Rational::parse(v.get<std::string>());
  } catch (const std::exception&) {
  }
  throw DataError(record + ": field '" + key + "' is not an exact rational");
}

inline PrimeLocalData parse_local(const json& j, const std::string& record) {
  PrimeLocalData d;
  d.p = get_as<std::uint64_t>(j, "p", record);
  const std::string where = record + " at p=" + std::to_string(d.p);
  d.e = get_as<std::int64_t>(j, "e", where);
  d.f = get_as<std::int64_t>(j, "f", where);
  d.g = get_as<std::int64_t>(j, "g", where);
  if (j.contains("different")) d.different_valuation = get_rational(j, "different", where);
  return d;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.filename().string() + ": " + e.what());
  }
}

}  // namespace detail

/// Parses and cross-checks the four documents. Throws DataError naming the
/// offending record.
inline CertifiedData parse_certified_data(const nlohmann::json& fields_doc, const nlohmann::json& rayclass_doc,
                                          const nlohmann::json& units_doc, const nlohmann::json& splitting_doc,
                                          const RequiredRecords& required = builtin_requirements()) {
  using detail::get_as;
  CertifiedData data;

  for (const auto& jf : detail::member(fields_doc, "fields", "fields.json")) {
    FieldDescriptor fd;
    fd.id = get_as<std::string>(jf, "id", "fields.json record");
    const std::string rec = "field " + fd.id;
    fd.name = get_as<std::string>(jf, "name", rec);
    fd.degree = get_as<std::int64_t>(jf, "degree", rec);
    try {
      fd.declared_root_disc = parse_factored(get_as<std::string>(jf, "root_disc", rec));
    } catch (const DataError&) {
      throw;
    } catch (const std::exception& e) {
      throw DataError(rec + ": root_disc: " + e.what());
    }
    if (jf.contains("defining_polynomials")) {
      fd.defining_polynomials = get_as<std::vector<std::vector<std::int64_t>>>(jf, "defining_polynomials", rec);
    }
    for (const auto& jl : detail::member(jf, "local_data", rec)) fd.local_data.push_back(detail::parse_local(jl, rec));
    if (jf.contains("formal_primes")) {
      for (const auto& [sym, jp] : jf.at("formal_primes").items()) {
        fd.formal_primes[sym] = FormalPrime{get_as<std::uint64_t>(jp, "norm", rec + " prime " + sym),
                                            jp.contains("count") ? get_as<std::int64_t>(jp, "count", rec) : 1};
      }
    }
    for (const auto& d : fd.local_data) {
      if (auto problem = local_data_problem(fd, d); !problem.empty()) throw DataError(problem);
    }
    const FactoredReal computed = root_disc_from_local_data(fd);
    if (!(computed == fd.declared_root_disc)) {
      throw DataError(rec + ": declared root discriminant " + fd.declared_root_disc.to_string() +
                      " but local data give " + computed.to_string());
    }
    if (!data.fields.emplace(fd.id, fd).second) throw DataError(rec + ": duplicate field id");
  }

  for (const auto& jr : detail::member(rayclass_doc, "rows", "rayclass.json")) {
    RayClassRecord r;
    r.field_id = get_as<std::string>(jr, "field", "rayclass.json row");
    const std::string rec = "ray class row for " + r.field_id;
    for (const auto& jc : detail::member(jr, "conductor", rec)) {
      r.conductor.emplace_back(get_as<std::string>(jc, "prime", rec), get_as<std::int64_t>(jc, "exponent", rec));
    }
    r.ray_class_number = get_as<std::int64_t>(jr, "ray_class_number", rec);
    r.class_number = get_as<std::int64_t>(jr, "class_number", rec);
    r.provenance = jr.value("provenance", "");
    if (r.ray_class_number < 1 || r.class_number < 1) throw DataError(rec + ": class numbers must be positive");
    if (r.ray_class_number % r.class_number != 0) {
      throw DataError(rec + ": class number " + std::to_string(r.class_number) + " does not divide ray class number " +
                      std::to_string(r.ray_class_number));
    }
    auto fit = data.fields.find(r.field_id);
    if (fit == data.fields.end()) throw DataError(rec + ": unknown field");
    for (const auto& [sym, e] : r.conductor) {
      if (e < 1) throw DataError(rec + ": conductor exponent of " + sym + " must be positive");
      if (!fit->second.formal_primes.count(sym)) throw DataError(rec + ": conductor prime " + sym + " is not declared for the field");
    }
    data.ray_class.push_back(std::move(r));
  }

  for (const auto& ju : detail::member(units_doc, "records", "unit_images.json")) {
    UnitImageRecord u;
    u.id = get_as<std::string>(ju, "id", "unit_images.json record");
    const std::string rec = "unit images " + u.id;
    u.field_id = get_as<std::string>(ju, "field", rec);
    u.modulus = get_as<std::string>(ju, "modulus", rec);
    u.q = get_as<std::uint64_t>(ju, "q", rec);
    u.copies = get_as<int>(ju, "copies", rec);
    u.labels = ju.value("labels", std::vector<std::string>{});
    u.images = get_as<std::vector<std::vector<std::int64_t>>>(ju, "images", rec);
    u.provenance = ju.value("provenance", "");
    if (!is_prime(u.q)) throw DataError(rec + ": q is not prime");
    if (u.copies < 1) throw DataError(rec + ": copies must be positive");
    if (!data.fields.count(u.field_id)) throw DataError(rec + ": unknown field " + u.field_id);
    for (auto& img : u.images) {
      if (static_cast<int>(img.size()) != u.copies) throw DataError(rec + ": image tuple has wrong length");
      for (auto& x : img) {
        x = ((x % static_cast<std::int64_t>(u.q)) + static_cast<std::int64_t>(u.q)) % static_cast<std::int64_t>(u.q);
        if (x == 0) throw DataError(rec + ": image entry is zero mod " + std::to_string(u.q));
      }
    }
    data.unit_images.push_back(std::move(u));
  }

  for (const auto& js : detail::member(splitting_doc, "fields", "splitting.json")) {
    SplittingRecord s;
    s.field_id = get_as<std::string>(js, "id", "splitting.json record");
    const std::string rec = "splitting " + s.field_id;
    s.degree = get_as<std::int64_t>(js, "degree", rec);
    s.compositum_of = js.value("compositum_of", std::vector<std::string>{});
    s.provenance = js.value("provenance", "");
    if (js.contains("primes")) {
      for (const auto& jl : js.at("primes")) {
        auto d = detail::parse_local(jl, rec);
        if (!s.local.emplace(d.p, d).second) throw DataError(rec + ": duplicate prime " + std::to_string(d.p));
      }
    }
    for (const auto& c : s.compositum_of) {
      if (!data.splitting.count(c)) throw DataError(rec + ": compositum factor " + c + " must be listed earlier");
    }
    // a splitting record for a field that also has a descriptor must agree with it
    if (auto fit = data.fields.find(s.field_id); fit != data.fields.end()) {
      if (fit->second.degree != s.degree) throw DataError(rec + ": degree disagrees with field record");
      for (const auto& [p, d] : s.local) {
        const PrimeLocalData* ref = fit->second.at(p);
        if (ref && (ref->e != d.e || ref->f != d.f || ref->g != d.g)) {
          throw DataError(rec + " at p=" + std::to_string(p) + ": e, f, g disagree with field record");
        }
      }
    }
    data.splitting.emplace(s.field_id, std::move(s));
  }

  for (const auto& id : required.fields) {
    if (!data.fields.count(id)) throw DataError("missing required field record '" + id + "'");
  }
  for (const auto& id : required.ray_class_fields) {
    if (std::none_of(data.ray_class.begin(), data.ray_class.end(), [&](const auto& r) { return r.field_id == id; })) {
      throw DataError("missing required ray class record for '" + id + "'");
    }
  }
  for (const auto& id : required.unit_images) {
    if (std::none_of(data.unit_images.begin(), data.unit_images.end(), [&](const auto& u) { return u.id == id; })) {
      throw DataError("missing required unit image record '" + id + "'");
    }
  }
  for (const auto& id : required.splitting) {
    if (!data.splitting.count(id)) throw DataError("missing required splitting record '" + id + "'");
  }
  return data;
}

/// Loads fields.json, rayclass.json, unit_images.json and splitting.json
/// from a directory.
inline CertifiedData load_certified_data(const std::filesystem::path& dir,
                                         const RequiredRecords& required = builtin_requirements()) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("data directory " + dir.string() + " does not exist");
  return parse_certified_data(detail::read_json_file(dir / "fields.json"), detail::read_json_file(dir / "rayclass.json"),
                              detail::read_json_file(dir / "unit_images.json"),
                              detail::read_json_file(dir / "splitting.json"), required);
}

// ---------------------------------------------------------------------------
// checks

/// True iff the images generate all of (F_q^*)^k.
inline bool residue_generation_check(const UnitImageRecord& rec) {
  const auto q = static_cast<std::int64_t>(rec.q);
  std::uint64_t full = 1;
  for (int i = 0; i < rec.copies; ++i) full *= rec.q - 1;
  std::set<std::vector<std::int64_t>> seen{std::vector<std::int64_t>(rec.copies, 1)};
  std::vector<std::vector<std::int64_t>> queue(seen.begin(), seen.end());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : rec.images) {
      auto x = queue[i];
      for (int c = 0; c < rec.copies; ++c) x[c] = x[c] * (((g[c] % q) + q) % q) % q;
      if (seen.insert(x).second) queue.push_back(std::move(x));
    }
  }
  return seen.size() == full;
}

/// True iff a cyclic degree-ell extension of Q unramified outside S exists:
/// ell in S, or some p in S has p = 1 mod ell.
inline bool kronecker_weber_check(std::uint64_t ell, const std::set<std::uint64_t>& s) {
  if (!is_prime(ell)) throw std::invalid_argument("kronecker_weber_check: ell must be prime");
  for (auto p : s) {
    if (!is_prime(p)) throw std::invalid_argument("kronecker_weber_check: " + std::to_string(p) + " is not prime");
    if (p == ell || p % ell == 1) return true;
  }
  return false;
}

struct SplittingVerdict {
  bool holds = false;
  std::int64_t lower = 0;  ///< g in H is at least this
  std::int64_t upper = 0;  ///< and at most this
  std::string detail;
};

/// Number of primes of H above p, bracketed from the records: the local
/// degree e*f in H is a multiple of the local degree in each compositum
/// factor, and primes of a subfield cannot merge.
inline SplittingVerdict splitting_bounds(const CertifiedData& data, const std::string& k_id, const std::string& h_id,
                                         std::uint64_t p) {
  const SplittingRecord& h = data.splitting_for(h_id);
  const SplittingRecord& k = data.splitting_for(k_id);
  auto local_of = [&](const SplittingRecord& r) -> const PrimeLocalData& {
    auto it = r.local.find(p);
    if (it == r.local.end()) throw ConfigError("splitting record " + r.field_id + " has no data at p=" + std::to_string(p));
    return it->second;
  };
  auto consistent = [](const SplittingRecord& r, const PrimeLocalData& d) { return d.e * d.f * d.g == r.degree; };
  SplittingVerdict v;
  if (k_id == h_id) {
    const auto& d = local_of(k);
    if (!consistent(k, d)) {
      v.detail = k_id + ": e*f*g = " + std::to_string(d.e * d.f * d.g) + " != degree " + std::to_string(k.degree);
      return v;
    }
    v.lower = v.upper = d.g;
    v.holds = true;
    v.detail = "g = " + std::to_string(d.g);
    return v;
  }
  if (std::find(h.compositum_of.begin(), h.compositum_of.end(), k_id) == h.compositum_of.end()) {
    throw ConfigError(h_id + " is not recorded as a compositum containing " + k_id);
  }
  std::int64_t local_lcm = 1;
  for (const auto& c : h.compositum_of) {
    const SplittingRecord& r = data.splitting_for(c);
    const auto& d = local_of(r);
    if (!consistent(r, d)) {
      v.detail = c + ": e*f*g = " + std::to_string(d.e * d.f * d.g) + " != degree " + std::to_string(r.degree);
      return v;
    }
    if (h.degree % r.degree != 0) {
      v.detail = c + ": degree " + std::to_string(r.degree) + " does not divide " + std::to_string(h.degree);
      return v;
    }
    local_lcm = std::lcm(local_lcm, d.e * d.f);
  }
  if (h.degree % local_lcm != 0) {
    v.detail = "local degree lcm " + std::to_string(local_lcm) + " does not divide " + std::to_string(h.degree);
    return v;
  }
  v.lower = local_of(k).g;
  v.upper = h.degree / local_lcm;
  v.holds = v.lower <= v.upper;
  v.detail = std::to_string(v.lower) + " <= g <= " + std::to_string(v.upper) + " (local degree multiple of " +
             std::to_string(local_lcm) + ")";
  return v;
}

/// True iff the records force exactly `expected` primes of H above p.
inline bool splitting_consistency_check(const CertifiedData& data, const std::string& k_id, const std::string& h_id,
                                        std::uint64_t p, std::int64_t expected) {
  const auto v = splitting_bounds(data, k_id, h_id, p);
  return v.holds && v.lower == expected && v.upper == expected;
}

// ---------------------------------------------------------------------------
// optional external oracle (disabled unless a command is supplied)

/// "rayclassno <field_id> <conductor_spec>" with the conductor written as
/// symbol^exponent terms joined by '*'.
inline std::string oracle_request(const RayClassRecord& r) {
  std::string spec;
  for (const auto& [sym, e] : r.conductor) spec += (spec.empty() ? "" : "*") + sym + "^" + std::to_string(e);
  return "rayclassno " + r.field_id + " " + (spec.empty() ? "1" : spec);
}

inline std::int64_t parse_oracle_response(const std::string& line) {
  std::istringstream in(line);
  std::int64_t v = 0;
  std::string rest;
  if (!(in >> v) || (in >> rest) || v < 1) throw DataError("oracle: malformed response '" + line + "'");
  return v;
}

/// Runs `command`, writes one request per record and reads one integer per
/// line. Returns the responses in order.
inline std::vector<std::int64_t> query_oracle(const std::string& command, const std::vector<RayClassRecord>& rows) {
  const auto req = std::filesystem::temp_directory_path() / "semistable_oracle_requests.txt";
  {
    std::ofstream out(req);
    for (const auto& r : rows) out << oracle_request(r) << '\n';
  }
  const std::string cmd = command + " < '" + req.string() + "'";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw ConfigError("oracle: cannot run '" + command + "'");
  std::vector<std::int64_t> out;
  char buf[256];
  while (fgets(buf, sizeof buf, pipe)) {
    std::string line(buf);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    if (!line.empty()) out.push_back(parse_oracle_response(line));
  }
  const int status = pclose(pipe);
  std::filesystem::remove(req);
  if (status != 0) throw ConfigError("oracle: command exited with status " + std::to_string(status));
  if (out.size() != rows.size()) throw DataError("oracle: expected " + std::to_string(rows.size()) + " responses");
  return out;
}

}  // namespace semistable
