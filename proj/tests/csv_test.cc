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

#include "przcdp/csv.h"

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace przcdp::csv {
namespace {

using ::testing::ElementsAre;

TEST(CsvParseTest, QuotedFields) {
  absl::StatusOr<std::vector<Record>> records =
      Parse("a,\"b,c\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",x,\n");
  ASSERT_TRUE(records.ok()) << records.status();
  ASSERT_EQ(records->size(), 2u);
  EXPECT_THAT((*records)[0], ElementsAre("a", "b,c", "say \"hi\""));
  EXPECT_THAT((*records)[1], ElementsAre("multi\nline", "x", ""));
}

TEST(CsvParseTest, UnterminatedQuoteFails) {
  EXPECT_FALSE(Parse("a,\"open\n").ok());
}

TEST(CsvFormatTest, EscapesOnlyWhenNeeded) {
  EXPECT_EQ(EscapeField("plain"), "plain");
  EXPECT_EQ(EscapeField("a,b"), "\"a,b\"");
  EXPECT_EQ(EscapeField("q\""), "\"q\"\"\"");
  EXPECT_EQ(FormatRecord({"x", "y,z"}), "x,\"y,z\"\n");
}

TEST(CsvFormatTest, ParseInvertsFormat) {
  const Record record = {"", "with space", "a\"b", "line\nbreak"};
  absl::StatusOr<std::vector<Record>> back = Parse(FormatRecord(record));
  ASSERT_TRUE(back.ok());
  ASSERT_EQ(back->size(), 1u);
  EXPECT_EQ((*back)[0], record);
}

TEST(CsvFileTest, AtomicWriteThenRead) {
  const auto dir = przcdp::testing::FreshDir("csv_file");
  ASSERT_TRUE(WriteFileAtomically(dir / "f.csv", "a,b\n").ok());
  ASSERT_TRUE(WriteFileAtomically(dir / "f.csv", "c\n").ok());
  absl::StatusOr<std::string> text = ReadFile(dir / "f.csv");
  ASSERT_TRUE(text.ok());
  EXPECT_EQ(*text, "c\n");
  EXPECT_FALSE(ReadFile(dir / "missing.csv").ok());
}

}  // namespace
}  // namespace przcdp::csv
