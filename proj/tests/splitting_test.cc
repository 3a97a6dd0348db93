//
// Copyright 2026 The przcdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "przcdp/splitting.h"

#include <limits>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace przcdp {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

constexpr double kInf = std::numeric_limits<double>::infinity();

SplitThresholds Table2Caps() {
  return SplitThresholds({{"Employees", 50}, {"Payroll", 5000000}});
}

GroupedThresholds IndustryCaps() {
  GroupedThresholds g;
  g.key_attribute = "Industry";
  g.fallback = Table2Caps();
  g.groups["Mining"] =
      SplitThresholds({{"Employees", 50}, {"Payroll", 10000000}});
  return g;
}

TEST(PiecesNeededTest, Basics) {
  EXPECT_EQ(PiecesNeeded(0, 5), 0);
  EXPECT_EQ(PiecesNeeded(5, 5), 1);
  EXPECT_EQ(PiecesNeeded(5.0001, 5), 2);
  EXPECT_EQ(PiecesNeeded(150, 50), 3);
  EXPECT_EQ(PiecesNeeded(1e9, kInf), 1);
}

TEST(PiecesNeededTest, AgreesWithBruteForce) {
  std::mt19937_64 engine(1);
  std::lognormal_distribution<double> value(2, 3);
  std::uniform_real_distribution<double> cap(0.1, 100);
  for (int i = 0; i < 20000; ++i) {
    const double v = value(engine), c = cap(engine);
    EXPECT_EQ(std::max<int64_t>(1, PiecesNeeded(v, c)),
              testing::OracleSplitCount({v}, {c}))
        << v << " / " << c;
  }
}

TEST(SplitMeasureTest, GreedyThenZeros) {
  EXPECT_THAT(SplitMeasure(150, 50, 3), ElementsAre(50, 50, 50));
  EXPECT_THAT(SplitMeasure(10000000, 5000000, 3),
              ElementsAre(5000000, 5000000, 0));
  EXPECT_THAT(SplitMeasure(20, 50, 1), ElementsAre(20));
  EXPECT_THAT(SplitMeasure(70, 50, 3), ElementsAre(50, 20, 0));
}

TEST(CheckThresholdsTest, Errors) {
  const Schema schema = testing::Table2a().schema();
  EXPECT_TRUE(CheckThresholds(Table2Caps(), schema).ok());
  absl::Status missing =
      CheckThresholds(SplitThresholds({{"Employees", 50}}), schema);
  EXPECT_THAT(std::string(missing.message()), HasSubstr("MissingThreshold"));
  EXPECT_FALSE(CheckThresholds(
                   SplitThresholds({{"Employees", 0}, {"Payroll", 1}}), schema)
                   .ok());
  GroupedThresholds bad = IndustryCaps();
  bad.key_attribute = "Payroll";
  EXPECT_THAT(
      std::string(CheckThresholds(ThresholdScheme(bad), schema).message()),
      HasSubstr("KeyAttributeNotConditional"));
}

TEST(UnitSplitTest, FiveEstablishments) {
  absl::StatusOr<SplitTable> split =
      UnitSplit(testing::Table2a(), Table2Caps());
  ASSERT_TRUE(split.ok()) << split.status();
  ASSERT_EQ(split->size(), 11u);
  EXPECT_EQ(split->CountDistinctOrigins(), 5u);
  std::vector<RowId> origins;
  for (const Row& row : split->rows()) origins.push_back(row.origin_row_id);
  EXPECT_THAT(origins, ElementsAre(1, 1, 1, 2, 2, 2, 3, 3, 4, 4, 5));
  const Row& third = split->rows()[2];
  EXPECT_THAT(third.measures, ElementsAre(50, 0));
  EXPECT_EQ(third.labels[0], "Agriculture");
}

TEST(UnitSplitTest, GroupedThresholdsPerIndustry) {
  const Table table = testing::Table2a();
  std::vector<int64_t> counts;
  for (const Row& row : table.rows()) {
    counts.push_back(
        *SplitCount(table.schema(), row, ThresholdScheme(IndustryCaps())));
  }
  EXPECT_THAT(counts, ElementsAre(3, 3, 2, 1, 1));
  absl::StatusOr<SplitTable> split =
      UnitSplit(table, ThresholdScheme(IndustryCaps()));
  ASSERT_TRUE(split.ok());
  EXPECT_EQ(split->size(), 10u);
}

TEST(UnitSplitTest, PreservesColumnSums) {
  std::mt19937_64 engine(3);
  for (int t = 0; t < 50; ++t) {
    Table table = testing::RandomTable(engine, 30);
    SplitThresholds caps({{"M1", 7}, {"M2", 13}});
    absl::StatusOr<SplitTable> split = UnitSplit(table, caps);
    ASSERT_TRUE(split.ok());
    for (size_t k = 0; k < 2; ++k) {
      double raw = 0, after = 0, max_piece = 0;
      for (const Row& r : table.rows()) raw += r.measures[k];
      for (const Row& r : split->rows()) {
        after += r.measures[k];
        max_piece = std::max(max_piece, r.measures[k]);
      }
      EXPECT_EQ(raw, after);
      EXPECT_LE(max_piece, k == 0 ? 7 : 13);
    }
  }
}

TEST(UnitSplitTest, InfiniteCapNeverSplits) {
  SplitThresholds caps({{"Employees", kInf}, {"Payroll", kInf}});
  absl::StatusOr<SplitTable> split = UnitSplit(testing::Table2a(), caps);
  ASSERT_TRUE(split.ok());
  EXPECT_EQ(split->size(), 5u);
}

}  // namespace
}  // namespace przcdp
