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

#include "przcdp/presets.h"

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace przcdp {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::Pair;

TEST(PresetTest, TopCodes) {
  EXPECT_THAT(*TopCodePreset("Conservative"),
              ElementsAre(Pair("EMP", 1000), Pair("PAYANN", 100000),
                          Pair("PAYQTR1", 25000)));
  EXPECT_THAT(*TopCodePreset("Aggressive"),
              ElementsAre(Pair("EMP", 100), Pair("PAYANN", 1000),
                          Pair("PAYQTR1", 250)));
}

TEST(PresetTest, SplitThresholds) {
  EXPECT_THAT(SplitPreset("Moderate")->caps(),
              ElementsAre(Pair("EMP", 5), Pair("PAYANN", 500),
                          Pair("PAYQTR1", 125)));
  EXPECT_THAT(SplitPreset("Median")->caps(),
              ElementsAre(Pair("EMP", 2), Pair("PAYANN", 104),
                          Pair("PAYQTR1", 24)));
}

TEST(PresetTest, UnknownName) {
  EXPECT_THAT(std::string(SplitPreset("Bold").status().message()),
              HasSubstr("UnknownPreset"));
  EXPECT_EQ(TopCodePresetNames().size(), 3u);
  EXPECT_EQ(SplitPresetNames().size(), 3u);
}

}  // namespace
}  // namespace przcdp
