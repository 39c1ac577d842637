#include <gtest/gtest.h>

#include <filesystem>

#include <semistable/cft_data.hpp>
#include <semistable/fp_linear.hpp>

using namespace semistable;
using nlohmann::json;

namespace {

const std::filesystem::path kData = SEMISTABLE_DATA_DIR;

struct Docs {
  json fields, rayclass, units, splitting;
  CertifiedData parse() const { return parse_certified_data(fields, rayclass, units, splitting); }
};

Docs shipped_docs() {
  return {detail::read_json_file(kData / "fields.json"), detail::read_json_file(kData / "rayclass.json"),
          detail::read_json_file(kData / "unit_images.json"), detail::read_json_file(kData / "splitting.json")};
}

std::string data_error(const Docs& d) {
  try {
    d.parse();
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

json& field_record(json& doc, const std::string& id) {
  for (auto& f : doc.at("fields")) {
    if (f.at("id") == id) return f;
  }
  throw std::logic_error("no record " + id);
}

// Oracle via discrete logs: the images generate (F_q^*)^k iff for every
// prime r | q - 1 their log vectors span F_r^k.
bool generation_oracle(const UnitImageRecord& rec) {
  const auto q = static_cast<std::int64_t>(rec.q);
  std::int64_t g = 2;
  for (;; ++g) {
    std::set<std::int64_t> powers;
    std::int64_t x = 1;
    for (std::int64_t i = 0; i < q - 1; ++i, x = x * g % q) powers.insert(x);
    if (static_cast<std::int64_t>(powers.size()) == q - 1) break;
  }
  std::map<std::int64_t, int> log;
  std::int64_t x = 1;
  for (int i = 0; i < q - 1; ++i, x = x * g % q) log[x] = i;
  if (q == 2) return true;
  for (std::int64_t r = 2; r <= q - 1; ++r) {
    if ((q - 1) % r != 0 || !is_prime(static_cast<std::uint64_t>(r))) continue;
    std::vector<std::vector<int>> rows;
    for (const auto& img : rec.images) {
      std::vector<int> row;
      for (auto v : img) row.push_back(log.at(((v % q) + q) % q) % static_cast<int>(r));
      rows.push_back(row);
    }
    if (rows.empty()) return false;
    if (FpMatrix(static_cast<int>(r), rows).rank() < rec.copies) return false;
  }
  return true;
}

std::int64_t phi(std::int64_t m) {
  std::int64_t out = m;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    out -= out / p;
  }
  if (m > 1) out -= out / m;
  return out;
}

// Oracle: some m supported on S with exponents <= 2 has ell | phi(m).
bool kw_oracle(std::int64_t ell, const std::set<std::uint64_t>& s) {
  const std::vector<std::uint64_t> ps(s.begin(), s.end());
  std::vector<int> exps(ps.size(), 0);
  while (true) {
    std::int64_t m = 1;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (int k = 0; k < exps[i]; ++k) m *= static_cast<std::int64_t>(ps[i]);
    }
    if (phi(m) % ell == 0) return true;
    std::size_t i = 0;
    while (i < exps.size() && exps[i] == 2) exps[i++] = 0;
    if (i == exps.size()) return false;
    ++exps[i];
  }
}

}  // namespace

TEST(CftData, ShippedDataLoads) {
  const auto data = load_certified_data(kData);
  std::vector<std::int64_t> values;
  std::vector<std::string> ids;
  for (const auto& r : data.ray_class) {
    values.push_back(r.ray_class_number);
    ids.push_back(r.field_id);
  }
  EXPECT_EQ(values, (std::vector<std::int64_t>{1, 1, 5, 5, 5, 5, 3}));
  EXPECT_EQ(ids, (std::vector<std::string>{"J2", "J3", "J6", "J12", "J24", "J48", "K10"}));
  for (const auto& [id, fd] : data.fields) EXPECT_EQ(root_disc_from_local_data(fd), fd.declared_root_disc) << id;
  EXPECT_EQ(data.field("K6").declared_root_disc, parse_factored("5^23/20 * 6^4/5"));
  EXPECT_THROW(data.field("nope"), ConfigError);
}

TEST(CftData, ResidueGeneration) {
  const auto data = load_certified_data(kData);
  for (const auto& rec : data.unit_images) {
    EXPECT_TRUE(residue_generation_check(rec)) << rec.id;
    EXPECT_EQ(residue_generation_check(rec), generation_oracle(rec)) << rec.id;
  }
  auto f10 = data.unit_image("F10-units");
  f10.images[2] = f10.images[1];
  EXPECT_FALSE(residue_generation_check(f10));
  EXPECT_FALSE(generation_oracle(f10));
  auto j2 = data.unit_image("J2-units");
  j2.images = {{4}};  // -1 has order 2 in F_5^*
  EXPECT_FALSE(residue_generation_check(j2));
}

TEST(CftData, ResidueGenerationMatchesOracleExhaustively) {
  for (std::uint64_t q : {3u, 5u, 7u}) {
    for (int k = 1; k <= 2; ++k) {
      // all pairs of generators
      std::vector<std::vector<std::int64_t>> tuples;
      const int total = k == 1 ? static_cast<int>(q - 1) : static_cast<int>((q - 1) * (q - 1));
      for (int c = 0; c < total; ++c) {
        std::vector<std::int64_t> t;
        int r = c;
        for (int i = 0; i < k; ++i, r /= static_cast<int>(q - 1)) t.push_back(1 + r % static_cast<int>(q - 1));
        tuples.push_back(t);
      }
      for (const auto& a : tuples) {
        for (const auto& b : tuples) {
          UnitImageRecord rec;
          rec.q = q;
          rec.copies = k;
          rec.images = {a, b};
          EXPECT_EQ(residue_generation_check(rec), generation_oracle(rec)) << "q=" << q;
        }
      }
    }
  }
}

TEST(CftData, KroneckerWeber) {
  EXPECT_FALSE(kronecker_weber_check(5, {2, 3}));
  EXPECT_FALSE(kronecker_weber_check(3, {2, 5}));
  const std::vector<std::uint64_t> base{2, 3, 5, 7};
  for (std::uint64_t ell : {3u, 5u}) {
    for (int mask = 0; mask < 16; ++mask) {
      std::set<std::uint64_t> s;
      for (int i = 0; i < 4; ++i) {
        if (mask >> i & 1) s.insert(base[i]);
      }
      EXPECT_EQ(kronecker_weber_check(ell, s), kw_oracle(static_cast<std::int64_t>(ell), s)) << "ell=" << ell << " mask=" << mask;
    }
  }
  EXPECT_THROW(kronecker_weber_check(4, {2}), std::invalid_argument);
}

TEST(CftData, Splitting) {
  const auto data = load_certified_data(kData);
  EXPECT_TRUE(splitting_consistency_check(data, "K10", "H54", 2, 3));
  EXPECT_TRUE(splitting_consistency_check(data, "K10", "H54", 5, 3));
  EXPECT_FALSE(splitting_consistency_check(data, "K10", "H54", 2, 6));
  EXPECT_THROW(splitting_bounds(data, "B20", "K10", 2), ConfigError);
  EXPECT_THROW(splitting_bounds(data, "K10", "H54", 7), ConfigError);
}

TEST(CftData, MissingDirectoryOrFilesAreConfigErrors) {
  EXPECT_THROW(load_certified_data("/nonexistent/dir"), ConfigError);
  const auto empty = std::filesystem::temp_directory_path() / "semistable_empty_data";
  std::filesystem::create_directories(empty);
  EXPECT_THROW(load_certified_data(empty), ConfigError);
  std::filesystem::remove_all(empty);
}

TEST(CftData, DataErrorsNameTheRecord) {
  {
    auto d = shipped_docs();
    field_record(d.fields, "J6")["root_disc"] = "5^23/20 * 6^3/5";
    EXPECT_NE(data_error(d).find("field J6"), std::string::npos) << data_error(d);
  }
  {
    auto d = shipped_docs();
    field_record(d.fields, "K10")["local_data"][0]["different"] = "1/2";
    EXPECT_NE(data_error(d).find("K10"), std::string::npos) << data_error(d);
  }
  {
    auto d = shipped_docs();
    d.rayclass["rows"][0]["class_number"] = 2;
    EXPECT_NE(data_error(d).find("J2"), std::string::npos) << data_error(d);
  }
  {
    auto d = shipped_docs();
    d.rayclass["rows"][0]["conductor"][0]["prime"] = "rho";
    EXPECT_NE(data_error(d).find("rho"), std::string::npos) << data_error(d);
  }
  {
    auto d = shipped_docs();
    d.units["records"][0]["images"][0][0] = 5;
    EXPECT_NE(data_error(d).find("J2-units"), std::string::npos) << data_error(d);
  }
  {
    auto d = shipped_docs();
    field_record(d.splitting, "K10")["primes"][0]["g"] = 1;
    EXPECT_NE(data_error(d).find("splitting K10"), std::string::npos) << data_error(d);
  }
  {
    auto d = shipped_docs();
    d.rayclass["rows"].erase(d.rayclass["rows"].begin() + 6);
    EXPECT_NE(data_error(d).find("K10"), std::string::npos) << data_error(d);
  }
  {
    auto d = shipped_docs();
    field_record(d.fields, "J2").erase("degree");
    EXPECT_NE(data_error(d).find("field J2: missing field 'degree'"), std::string::npos) << data_error(d);
  }
}

TEST(CftData, OracleProtocol) {
  const auto data = load_certified_data(kData);
  EXPECT_EQ(oracle_request(data.ray_class_for("J2")), "rayclassno J2 pi^2");
  EXPECT_EQ(parse_oracle_response("5"), 5);
  EXPECT_THROW(parse_oracle_response("five"), DataError);
  EXPECT_THROW(parse_oracle_response("5 6"), DataError);
  const auto got = query_oracle("awk '{print 1}'", data.ray_class);
  EXPECT_EQ(got.size(), data.ray_class.size());
}
