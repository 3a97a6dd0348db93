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

#include "przcdp/generators.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "przcdp/analysis.h"

namespace przcdp {
namespace {

using ::testing::DoubleNear;
using ::testing::HasSubstr;

TEST(ZipfTest, WeightsDecay) {
  std::vector<double> w = ZipfWeights(4, 1);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_THAT(w[0] / w[3], DoubleNear(4, 1e-12));
}

TEST(ParetoTest, TailMatchesShape) {
  std::mt19937_64 engine(1);
  const int n = 200000;
  int above = 0;
  for (int i = 0; i < n; ++i) {
    const double x = SamplePareto(engine, 1, 1.5);
    ASSERT_GE(x, 1);
    if (x > 4) ++above;
  }
  // P(X > 4) = 4^-1.5 = 0.125.
  EXPECT_THAT(static_cast<double>(above) / n, DoubleNear(0.125, 0.003));
}

TEST(SimDataTest, ShapeAndDeterminism) {
  absl::StatusOr<Table> a = GenSimData(2000, SeededRng(4));
  absl::StatusOr<Table> b = GenSimData(2000, SeededRng(4));
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->rows(), b->rows());
  EXPECT_EQ(a->schema(), SimSchema());
  std::vector<double> ht1;
  for (const Row& row : a->rows()) {
    ht1.push_back(MeasureOf(a->schema(), row, "HT1"));
    const int cat = std::stoi(LabelOf(a->schema(), row, "CatIX"));
    EXPECT_GE(cat, 1);
    EXPECT_LE(cat, kSimCategories);
  }
  // Median of Pareto(1, 1.2) is 2^(1/1.2) ~ 1.78.
  EXPECT_THAT(Quantile(ht1, 0.5), DoubleNear(std::pow(2, 1 / 1.2), 0.15));
}

TEST(SimDataTest, BadWeights) {
  SimParams params;
  params.category_weights = {1, 2};
  EXPECT_THAT(
      std::string(GenSimData(10, SeededRng(1), params).status().message()),
      HasSubstr("BadWeights"));
}

TEST(BusinessDataTest, PlausibleValues) {
  absl::StatusOr<Table> t = GenBusinessData(5000, SeededRng(2));
  ASSERT_TRUE(t.ok());
  EXPECT_EQ(t->schema(), BusinessSchema());
  std::vector<double> emp, pay, qtr;
  for (const Row& row : t->rows()) {
    emp.push_back(MeasureOf(t->schema(), row, "EMP"));
    pay.push_back(MeasureOf(t->schema(), row, "PAYANN"));
    qtr.push_back(MeasureOf(t->schema(), row, "PAYQTR1"));
    EXPECT_EQ(emp.back(), std::floor(emp.back()));
    EXPECT_GE(pay.back(), 0);
  }
  EXPECT_GT(Quantile(pay, 0.99), 10 * Quantile(pay, 0.5));
  EXPECT_LT(Quantile(qtr, 0.5), Quantile(pay, 0.5));
}

TEST(BusinessDataTest, BadParams) {
  BusinessParams p;
  p.correlation = 1.5;
  EXPECT_THAT(
      std::string(GenBusinessData(10, SeededRng(1), p).status().message()),
      HasSubstr("BadParams"));
}

}  // namespace
}  // namespace przcdp
