#include <sstream>

#include <gtest/gtest.h>

#include "mtgender/csv.hpp"
#include "mtgender/errors.hpp"

namespace csv = mtg::csv;

TEST(Csv, EscapeAndParseRoundTrip) {
  const std::vector<std::string> row = {"plain", "with,comma", "with \"quote\"", "", "ü"};
  std::ostringstream out;
  csv::write_row(out, row);
  EXPECT_EQ(out.str(), "plain,\"with,comma\",\"with \"\"quote\"\"\",,ü\n");
  std::string line = out.str();
  line.pop_back();
  EXPECT_EQ(csv::parse_line(line), row);
}

TEST(Csv, ReadTable) {
  std::istringstream in("a,b\n1,2\n3,\"x,y\"\n");
  const auto t = csv::read(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][t.column("b")], "x,y");
  EXPECT_THROW(t.column("c"), mtg::SchemaError);
}

TEST(Csv, Numbers) {
  EXPECT_EQ(csv::number(20.0), "20");
  EXPECT_EQ(csv::number(0.01), "0.01");
  EXPECT_EQ(csv::number(0.1 + 0.2), "0.30000000000000004");
  EXPECT_EQ(csv::fixed(83.333333, 2), "83.33");
  EXPECT_EQ(csv::fixed(0.0, 2), "0.00");
}
