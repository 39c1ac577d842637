#include <gtest/gtest.h>

#include <semistable/odlyzko.hpp>

using namespace semistable;

namespace {

OdlyzkoTable shipped() { return OdlyzkoTable::load_file(std::string(SEMISTABLE_DATA_DIR) + "/odlyzko_grh.csv"); }

}  // namespace

TEST(Odlyzko, ShippedTableRows) {
  const auto t = shipped();
  ASSERT_EQ(t.rows().size(), 5u);
  EXPECT_EQ(t.rows().front().degree, 126u);
  EXPECT_EQ(t.rows().back().degree, 2400u);
  EXPECT_EQ(t.rows().back().bound, Rational::parse("31.645"));
}

TEST(Odlyzko, MinRootDiscUsesLargestRowBelow) {
  const auto t = shipped();
  EXPECT_EQ(t.min_root_disc(1000), Rational::parse("29.094"));
  EXPECT_EQ(t.min_root_disc(126), Rational::parse("20.221"));
  EXPECT_EQ(t.min_root_disc(999), Rational::parse("24.258"));
  EXPECT_EQ(t.min_root_disc(100000), Rational::parse("31.645"));
  EXPECT_THROW(t.min_root_disc(125), std::out_of_range);
}

TEST(Odlyzko, MaxDegreeBelowForTheTwoCases) {
  const auto t = shipped();
  auto n6 = t.max_degree_below(parse_factored("5^5/4 * 6^4/5"));
  ASSERT_FALSE(n6.unbounded());
  EXPECT_EQ(*n6.degree, 2400u);
  auto n10 = t.max_degree_below(parse_factored("3^3/2 * 10^2/3"));
  ASSERT_FALSE(n10.unbounded());
  EXPECT_EQ(*n10.degree, 280u);
  EXPECT_EQ(n10.to_string(), "< 280");
}

TEST(Odlyzko, UnboundedAboveTheLastRow) {
  const auto t = shipped();
  EXPECT_TRUE(t.max_degree_below(parse_factored("32")).unbounded());
  EXPECT_EQ(t.max_degree_below(parse_factored("32")).to_string(), "Unbounded");
}

TEST(Odlyzko, TieCountsAsBelow) {
  const auto t = OdlyzkoTable::from_string("degree,bound\n10,4\n20,9\n");
  EXPECT_EQ(*t.max_degree_below(parse_factored("2^2")).degree, 10u);
  EXPECT_EQ(*t.max_degree_below(parse_factored("3^2")).degree, 20u);
  EXPECT_EQ(*t.max_degree_below(parse_factored("2^1/2")).degree, 10u);
}

TEST(Odlyzko, CommentsAndBlankLinesSkipped) {
  const auto t = OdlyzkoTable::from_string("# note\n\ndegree, bound\n 10,4\r\n# x\n20,9\n");
  EXPECT_EQ(t.rows().size(), 2u);
  EXPECT_EQ(t.rows()[1].line, 6u);
}

TEST(Odlyzko, MalformedTablesRejected) {
  for (const char* bad : {"", "degree,bound\n", "deg,bnd\n1,2\n", "degree,bound\n10\n", "degree,bound\n10,4,5\n",
                          "degree,bound\nx,4\n", "degree,bound\n10,-1\n", "degree,bound\n10,4\n10,5\n",
                          "degree,bound\n20,4\n10,5\n", "degree,bound\n10,5\n20,4\n", "degree,bound\n1.5,4\n"}) {
    EXPECT_THROW(OdlyzkoTable::from_string(bad), DataError) << bad;
  }
  EXPECT_THROW(OdlyzkoTable::load_file("/nonexistent/odlyzko.csv"), DataError);
}

TEST(Odlyzko, ErrorNamesTheLine) {
  try {
    OdlyzkoTable::from_string("degree,bound\n10,4\n20,3\n", "t.csv");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("t.csv: line 3"), std::string::npos) << e.what();
  }
}
