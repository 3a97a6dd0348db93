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

#include "przcdp/table.h"

#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace przcdp {
namespace {

using ::testing::HasSubstr;
using ::testing::IsEmpty;
using ::testing::SizeIs;

TEST(SchemaTest, SeparatesKinds) {
  Schema schema = testing::Table2a().schema();
  EXPECT_TRUE(schema.IsConditional("Industry"));
  EXPECT_TRUE(schema.IsMeasure("Payroll"));
  EXPECT_FALSE(schema.IsMeasure("Industry"));
  EXPECT_FALSE(schema.Contains("Revenue"));
  EXPECT_EQ(*schema.MeasureIndex("Payroll"), 1u);
}

TEST(SchemaTest, RejectsDuplicatesAndReservedNames) {
  EXPECT_FALSE(Schema::Create({{"A", AttributeKind::kMeasure},
                               {"A", AttributeKind::kConditional}})
                   .ok());
  EXPECT_FALSE(Schema::Create({{"ROW_ID", AttributeKind::kMeasure}}).ok());
}

TEST(TableTest, FindRow) {
  Table table = testing::Table2a();
  ASSERT_NE(table.FindRow(3), nullptr);
  EXPECT_EQ(LabelOf(table.schema(), *table.FindRow(3), "Industry"), "Mining");
  EXPECT_EQ(table.FindRow(42), nullptr);
}

TEST(TableTest, ValidateFlagsNegativeMeasures) {
  Table good = testing::Table2a();
  EXPECT_THAT(Validate(good), IsEmpty());
  std::vector<Row> rows = good.rows();
  rows[1].measures[0] = -1;
  EXPECT_THAT(Validate(Table(good.schema(), rows)), SizeIs(1));
}

TEST(GroupKeyTest, EncodingDoesNotCollide) {
  EXPECT_NE(EncodeGroupKey({"a|b"}), EncodeGroupKey({"a", "b"}));
  EXPECT_NE(EncodeGroupKey({"a\\", "b"}), EncodeGroupKey({"a", "\\b"}));
  EXPECT_EQ(EncodeGroupKey({}), "");
  EXPECT_EQ(EncodeGroupKey({"Mining"}), "Mining");
}

TEST(CsvTableTest, RoundTrip) {
  Table table = testing::Table2a();
  std::string text = FormatCsv(table);
  absl::StatusOr<Table> back = ParseCsv(text, table.schema());
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->rows(), table.rows());
}

TEST(CsvTableTest, SkipsCommentsAndFillsRowIds) {
  absl::StatusOr<Table> table = ParseCsv(
      "# provenance\nPayroll,Industry,Employees\n5,Mining,2\n7,Retail,1\n",
      testing::Table2a().schema());
  ASSERT_TRUE(table.ok()) << table.status();
  ASSERT_EQ(table->size(), 2u);
  EXPECT_EQ(table->rows()[1].row_id, 2u);
  EXPECT_EQ(MeasureOf(table->schema(), table->rows()[0], "Payroll"), 5);
}

TEST(CsvTableTest, RejectsMissingColumnAndBadNumber) {
  const Schema schema = testing::Table2a().schema();
  absl::StatusOr<Table> missing = ParseCsv("Industry,Employees\nA,1\n", schema);
  EXPECT_FALSE(missing.ok());
  EXPECT_THAT(std::string(missing.status().message()), HasSubstr("Payroll"));
  EXPECT_FALSE(
      ParseCsv("Industry,Employees,Payroll\nA,x,1\n", schema).ok());
}

TEST(FormatNumberTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatNumber(5000000), "5000000");
  EXPECT_EQ(FormatNumber(0.5), "0.5");
  EXPECT_EQ(FormatNumber(0), "0");
}

}  // namespace
}  // namespace przcdp
