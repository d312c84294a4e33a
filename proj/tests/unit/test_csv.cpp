// Copyright 2026 The mmdbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmdbayes/csv.hpp"
#include "mmdbayes/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace mmdbayes {
namespace {

TEST(FormatDouble, RoundTripsBitExactly) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t bits = rng();
    double x;
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) continue;
    const double back = parse_double(format_double(x));
    ASSERT_EQ(std::memcmp(&x, &back, sizeof x), 0) << format_double(x);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "NA");
  EXPECT_EQ(format_double(INFINITY), "NA");
  EXPECT_TRUE(std::isnan(parse_double("NA")));
  EXPECT_THROW(parse_double("abc"), std::invalid_argument);
  EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
}

TEST(ReadSamples, HeaderCommentsAndBlankLines) {
  std::istringstream in("# x,y\n1,2\n\n3.5,-4\n# trailing note\n");
  const Samples s = read_samples_csv(in);
  ASSERT_EQ(s.rows(), 2);
  ASSERT_EQ(s.cols(), 2);
  EXPECT_EQ(s(1, 0), 3.5);
  EXPECT_EQ(s(1, 1), -4.0);
}

TEST(ReadSamples, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_samples_csv(in);
    } catch (const CsvError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("1,2\n3,4\n5\n"), 3u);
  EXPECT_EQ(line_of("1\n# c\nfoo\n"), 3u);
  EXPECT_EQ(line_of("1\nnan\n"), 2u);
  EXPECT_EQ(line_of("1\ninf\n"), 2u);
  std::istringstream empty("");
  EXPECT_THROW(read_samples_csv(empty), CsvError);
  std::istringstream only_header("# x\n\n");
  EXPECT_THROW(read_samples_csv(only_header), CsvError);
  EXPECT_THROW(read_samples_csv_file("/nonexistent/file.csv"), CsvError);
}

TEST(ReadTable, HeaderAndRows) {
  std::istringstream in("a,b\n1,NA\n2,3\n");
  const CsvTable t = read_table(in);
  EXPECT_EQ(t.column("b"), 1u);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "NA");
  EXPECT_THROW(t.column("c"), std::out_of_range);
  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(read_table(ragged), CsvError);
}

}  // namespace
}  // namespace mmdbayes
