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

// JSON run configuration (schema version 1). Relative paths resolve against
// the directory of the config file.

#ifndef PRZCDP_CLI_CONFIG_H_
#define PRZCDP_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "przcdp/generators.h"
#include "przcdp/table.h"
#include "przcdp/workload.h"

namespace przcdp::cli {

inline constexpr int kConfigVersion = 1;

struct TableSource {
  std::optional<std::filesystem::path> csv;
  std::string generator;  // "sim" or "business" when csv is unset
  int64_t n = 0;
  std::optional<uint64_t> seed;  // defaults to the run seed
  SimParams sim;
  BusinessParams business;
};

struct SweepConfig {
  std::string attribute;           // the one attribute that is split
  std::vector<double> thresholds;  // +inf allowed
  std::vector<double> rhos;
};

struct MseConfig {
  int64_t n = 1000;
  std::vector<double> alphas;
  std::vector<double> rhos;
  double delta_min = 1;
  double delta_max = 1e12;
  int points = 121;
};

struct FfuConfig {
  std::vector<double> deltas;
  double gamma = 0.95;
};

struct RunConfig {
  std::filesystem::path base_dir;
  uint64_t seed = 0;
  std::optional<Schema> schema;
  std::optional<TableSource> source;
  Workload workload;
  std::string scheme_label;
  std::filesystem::path output_dir;
  std::optional<SweepConfig> sweep;
  std::optional<MseConfig> mse;
  std::optional<FfuConfig> ffu;
};

absl::StatusOr<RunConfig> ParseConfig(const nlohmann::json& json,
                                      const std::filesystem::path& base_dir);
absl::StatusOr<RunConfig> LoadConfig(const std::filesystem::path& path);

// Univariate splitting: `attribute` capped at `threshold`, every other
// measure uncapped.
SplitThresholds SweepThresholds(const Schema& schema,
                                const std::string& attribute,
                                double threshold);

// Reads or generates the input table.
absl::StatusOr<Table> LoadTable(const RunConfig& config);

}  // namespace przcdp::cli

#endif  // PRZCDP_CLI_CONFIG_H_
