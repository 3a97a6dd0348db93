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

#include "przcdp/accountant.h"

#include <cmath>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace przcdp {
namespace {

using ::testing::DoubleNear;

ThresholdScheme Caps() {
  return SplitThresholds({{"Employees", 50}, {"Payroll", 5000000}});
}

TEST(CompositionTest, SequentialAddsPointwise) {
  const Table table = testing::Table2a();
  absl::StatusOr<PolicyFunction> p = SequentialCompose(
      SplitCostPolicy(0.25, Caps()), ZcdpAsPolicy(0.5), table.schema());
  ASSERT_TRUE(p.ok());
  const std::vector<double> m2 = {9, 9, 4, 4, 1};
  for (size_t i = 0; i < table.size(); ++i) {
    EXPECT_EQ(*Evaluate(*p, table.schema(), table.rows()[i]),
              0.25 * m2[i] + 0.5);
  }
}

TEST(CompositionTest, ParallelChargesOneBranch) {
  const Table table = testing::Table2a();
  absl::StatusOr<PolicyFunction> p = ParallelCompose(
      table.schema(), {"Industry"},
      {{"Mining", ZcdpAsPolicy(3)}, {"Retail", ZcdpAsPolicy(1)}},
      ZcdpAsPolicy(2));
  ASSERT_TRUE(p.ok());
  std::vector<double> got;
  for (const Row& row : table.rows()) {
    got.push_back(*Evaluate(*p, table.schema(), row));
  }
  EXPECT_EQ(got, (std::vector<double>{2, 2, 3, 3, 1}));
  EXPECT_FALSE(ParallelCompose(table.schema(), {"Payroll"}, {},
                               ZcdpAsPolicy(1))
                   .ok());
}

TEST(GroupBoundTest, SimpleIsGroupSizeTimesTotal) {
  const std::vector<double> losses = {1, 2, 3};
  EXPECT_EQ(*SimpleGroupBound(losses), 18);
  const Table table = testing::Table2a();
  EXPECT_EQ(*SimpleGroupBound(SplitCostPolicy(1, Caps()), table.schema(),
                              std::span(table.rows()).first(2)),
            36);
}

TEST(GroupBoundTest, PairClosedForm) {
  EXPECT_EQ(PairGroupBound(4, 1), 9);
  EXPECT_EQ(PairGroupBound(1, 1), 4);
  const std::vector<double> losses = {4, 1};
  EXPECT_THAT(*AdvancedGroupBound(losses), DoubleNear(9, 1e-6));
  EXPECT_EQ(*GroupBound(losses), *AdvancedGroupBound(losses));
}

TEST(GroupBoundTest, ObjectiveAtOptimumMatchesClosedForm) {
  // For J = 2 the optimum is at k = 1 + sqrt(P1 / P2).
  const double p1 = 5, p2 = 2;
  const std::vector<double> sorted = {p1, p2};
  const double k = 1 + std::sqrt(p1 / p2);
  EXPECT_THAT(AdvancedGroupObjective(sorted, k),
              DoubleNear(PairGroupBound(p1, p2), 1e-12));
  EXPECT_GT(AdvancedGroupObjective(sorted, k + 0.1),
            AdvancedGroupObjective(sorted, k));
}

TEST(GroupBoundTest, ConstantLossesFallBackToSimple) {
  for (int j = 1; j <= 6; ++j) {
    const std::vector<double> losses(j, 0.5);
    EXPECT_THAT(*GroupBound(losses), DoubleNear(0.5 * j * j, 1e-9));
  }
}

TEST(GroupBoundTest, RejectsEmptyAndNegative) {
  EXPECT_FALSE(SimpleGroupBound(std::vector<double>{}).ok());
  EXPECT_FALSE(AdvancedGroupBound(std::vector<double>{1, -1}).ok());
}

TEST(OneSidedTest, DoublesTheSensitiveSupremum) {
  absl::StatusOr<OneSidedGuarantee> g =
      OneSidedBound(SplitCostPolicy(0.5, Caps()), 4.5, "small firms");
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(g->rho, 9);
  EXPECT_FALSE(OneSidedBound(ConstantPolicy(1), -1).ok());
}

TEST(LedgerTest, CombinedIsSequentialSum) {
  PrivacyLedger ledger;
  ledger.Add("a", ConstantPolicy(0.25));
  ledger.Add("b", SplitCostPolicy(0.5, Caps()));
  ASSERT_EQ(ledger.charges().size(), 2u);
  EXPECT_EQ(ledger.charges()[1].stage, "b");
  const Table table = testing::Table2a();
  EXPECT_EQ(*Evaluate(ledger.Combined(), table.schema(), table.rows()[0]),
            4.75);
}

}  // namespace
}  // namespace przcdp
