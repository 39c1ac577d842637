#pragma once

/**
 * @file odlyzko.hpp
 * @brief GRH lower bounds for root discriminants, as a step function in degree.
 *
 * The table is data. Between rows we only use the bound of the largest
 * tabulated degree not exceeding the query, which under-claims because the
 * underlying bound is nondecreasing.
 */

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "factored_real.hpp"
#include "rational.hpp"

namespace semistable {

struct OdlyzkoRow {
  std::uint64_t degree = 0;
  Rational bound;
  std::size_t line = 0;  ///< source line, for diagnostics
};

/// Result of max_degree_below: either a certified strict upper bound on the
/// degree, or nothing certified.
struct DegreeBound {
  std::optional<std::uint64_t> degree;  ///< empty means Unbounded
  bool unbounded() const { return !degree.has_value(); }
  std::string to_string() const { return degree ? "< " + std::to_string(*degree) : "Unbounded"; }
};

class OdlyzkoTable {
 public:
  /// CSV with header `degree,bound`. Blank lines and lines starting with '#'
  /// are skipped. `source` only labels diagnostics.
  static OdlyzkoTable load(std::istream& in, const std::string& source = "odlyzko table") {
    OdlyzkoTable t;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    auto fail = [&](const std::string& what) -> void {
      throw DataError(source + ": line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      if (!header_seen) {
        std::string compact;
        for (char c : line) {
          if (c != ' ' && c != '\t') compact += c;
        }
        if (compact != "degree,bound") fail("expected header 'degree,bound'");
        header_seen = true;
        continue;
      }
      const auto comma = line.find(',');
      if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
        fail("malformed row '" + line + "'");
      }
      OdlyzkoRow row;
      row.line = lineno;
      try {
        Rational d = Rational::parse(line.substr(0, comma));
        auto di = d.to_int64();
        if (!di || *di <= 0) fail("malformed row '" + line + "': degree must be a positive integer");
        row.degree = static_cast<std::uint64_t>(*di);
        row.bound = Rational::parse(line.substr(comma + 1));
      } catch (const std::invalid_argument&) {
        fail("malformed row '" + line + "'");
      }
      if (row.bound.sign() <= 0) fail("malformed row '" + line + "': bound must be positive");
      if (!t.rows_.empty()) {
        const OdlyzkoRow& prev = t.rows_.back();
        if (row.degree == prev.degree) fail("duplicate degree " + std::to_string(row.degree));
        if (row.degree < prev.degree) fail("not sorted: degree " + std::to_string(row.degree) +
                                           " after " + std::to_string(prev.degree));
        if (row.bound < prev.bound) {
          fail("non-monotone bounds: " + row.bound.to_string() + " at degree " +
               std::to_string(row.degree) + " is below " + prev.bound.to_string() + " at degree " +
               std::to_string(prev.degree));
        }
      }
      t.rows_.push_back(row);
    }
    if (!header_seen || t.rows_.empty()) throw DataError(source + ": no rows");
    return t;
  }

  static OdlyzkoTable load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return load(in, path);
  }

  static OdlyzkoTable from_string(const std::string& csv, const std::string& source = "odlyzko table") {
    std::istringstream in(csv);
    return load(in, source);
  }

  const std::vector<OdlyzkoRow>& rows() const { return rows_; }

  /// Bound at the largest tabulated degree <= `degree`.
  Rational min_root_disc(std::uint64_t degree) const {
    const OdlyzkoRow* best = nullptr;
    for (const auto& r : rows_) {
      if (r.degree <= degree) best = &r;
    }
    if (!best) {
      throw std::out_of_range("degree " + std::to_string(degree) + " is below the table range (first row " +
                              std::to_string(rows_.front().degree) + ")");
    }
    return best->bound;
  }

  /// Smallest tabulated n with delta <= bound(n): any field with root
  /// discriminant delta then has degree < n. Ties count as below.
  DegreeBound max_degree_below(const FactoredReal& delta, Precision prec = {}) const {
    for (const auto& r : rows_) {
      if (compare(delta, r.bound, prec) != Ordering::Greater) return DegreeBound{r.degree};
    }
    return DegreeBound{};
  }

 private:
  std::vector<OdlyzkoRow> rows_;
};

}  // namespace semistable
