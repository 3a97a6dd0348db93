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

#include "przcdp/policy.h"

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace przcdp {
namespace {

using ::testing::HasSubstr;

ThresholdScheme Caps() {
  return SplitThresholds({{"Employees", 50}, {"Payroll", 5000000}});
}

std::vector<double> EvaluateAll(const PolicyFunction& p, const Table& t) {
  std::vector<double> out;
  for (const Row& row : t.rows()) out.push_back(*Evaluate(p, t.schema(), row));
  return out;
}

TEST(PolicyTest, ConstantAndSplitCost) {
  const Table table = testing::Table2a();
  EXPECT_EQ(EvaluateAll(ConstantPolicy(0.3), table),
            std::vector<double>(5, 0.3));
  EXPECT_EQ(EvaluateAll(SplitCostPolicy(0.5, Caps()), table),
            (std::vector<double>{4.5, 4.5, 2, 2, 0.5}));
}

TEST(PolicyTest, SumFlattensAndAdds) {
  PolicyFunction p = SumPolicy({ConstantPolicy(1),
                                SumPolicy({SplitCostPolicy(1, Caps()),
                                           ConstantPolicy(0.5)})});
  const auto& sum = std::get<SumTerm>(p.node().term);
  EXPECT_EQ(sum.terms.size(), 3u);
  EXPECT_EQ(EvaluateAll(p, testing::Table2a()),
            (std::vector<double>{10.5, 10.5, 5.5, 5.5, 2.5}));
  EXPECT_EQ(PolicyMin(p), 2.5);
  EXPECT_EQ(PolicySupremum(p, 4), 17.5);
}

TEST(PolicyTest, PiecewiseUsesBranchOrFallback) {
  PolicyFunction p = PiecewisePolicy(
      {"Industry"}, {{"Mining", ConstantPolicy(2)}}, ConstantPolicy(1));
  EXPECT_EQ(EvaluateAll(p, testing::Table2a()),
            (std::vector<double>{1, 1, 2, 2, 1}));
  EXPECT_EQ(PolicyMin(p), 1);
}

TEST(PolicyTest, CheckPolicyCatchesSchemaMismatch) {
  const Schema schema = testing::Table2a().schema();
  EXPECT_TRUE(CheckPolicy(SplitCostPolicy(1, Caps()), schema).ok());
  PolicyFunction bad = PiecewisePolicy({"Payroll"}, {}, ConstantPolicy(1));
  EXPECT_THAT(std::string(CheckPolicy(bad, schema).message()),
              HasSubstr("SchemaMismatch"));
  EXPECT_FALSE(CheckPolicy(ConstantPolicy(-1), schema).ok());
}

TEST(PolicyTest, JsonRoundTrip) {
  GroupedThresholds g;
  g.key_attribute = "Industry";
  g.fallback = std::get<SplitThresholds>(Caps());
  g.groups["Mining"] =
      SplitThresholds({{"Employees", 50}, {"Payroll", 10000000}});
  PolicyFunction p = SumPolicy(
      {SplitCostPolicy(0.25, g),
       PiecewisePolicy({"Industry"}, {{"Retail", ConstantPolicy(0.5)}},
                       ConstantPolicy(0.125))});
  absl::StatusOr<PolicyFunction> back = PolicyFromJson(ToJson(p));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_TRUE(StructurallyEqual(p, *back));
  EXPECT_EQ(EvaluateAll(p, testing::Table2a()),
            EvaluateAll(*back, testing::Table2a()));
}

TEST(PolicyTest, DescribeMentionsSplitCount) {
  EXPECT_THAT(Describe(SumPolicy({ConstantPolicy(0.5),
                                  SplitCostPolicy(1.5, Caps())})),
              HasSubstr("m(r)^2"));
}

}  // namespace
}  // namespace przcdp
