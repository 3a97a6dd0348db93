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

#include "absl/strings/str_cat.h"

namespace przcdp {
namespace {

struct Preset {
  const char* name;
  double emp;
  double payann;
  double payqtr1;
};

constexpr Preset kTopCodes[] = {
    {"Conservative", 1e3, 1e5, 2.5e4},
    {"Moderate", 3e2, 1e4, 2.5e3},
    {"Aggressive", 1e2, 1e3, 2.5e2},
};

constexpr Preset kSplits[] = {
    {"Conservative", 100, 10000, 2500},
    {"Moderate", 5, 500, 125},
    {"Median", 2, 104, 24},
};

std::map<std::string, double> AsMap(const Preset& p) {
  return {{"EMP", p.emp}, {"PAYANN", p.payann}, {"PAYQTR1", p.payqtr1}};
}

}  // namespace

absl::StatusOr<std::map<std::string, double>> TopCodePreset(
    std::string_view name) {
  for (const Preset& p : kTopCodes) {
    if (name == p.name) return AsMap(p);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("UnknownPreset: no top-code scheme '", std::string(name), "'"));
}

absl::StatusOr<SplitThresholds> SplitPreset(std::string_view name) {
  for (const Preset& p : kSplits) {
    if (name == p.name) return SplitThresholds(AsMap(p));
  }
  return absl::InvalidArgumentError(
      absl::StrCat("UnknownPreset: no splitting scheme '", std::string(name), "'"));
}

std::vector<std::string> TopCodePresetNames() {
  std::vector<std::string> out;
  for (const Preset& p : kTopCodes) out.emplace_back(p.name);
  return out;
}

std::vector<std::string> SplitPresetNames() {
  std::vector<std::string> out;
  for (const Preset& p : kSplits) out.emplace_back(p.name);
  return out;
}

}  // namespace przcdp
