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

// Named top-code and splitting schemes for the business schema
// (EMP, PAYANN, PAYQTR1).

#ifndef PRZCDP_PRESETS_H_
#define PRZCDP_PRESETS_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "przcdp/splitting.h"

namespace przcdp {

// "Conservative", "Moderate", "Aggressive".
absl::StatusOr<std::map<std::string, double>> TopCodePreset(
    std::string_view name);

// "Conservative", "Moderate", "Median".
absl::StatusOr<SplitThresholds> SplitPreset(std::string_view name);

std::vector<std::string> TopCodePresetNames();
std::vector<std::string> SplitPresetNames();

}  // namespace przcdp

#endif  // PRZCDP_PRESETS_H_
