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

// Subcommands of the przcdp tool. Each reads a config, writes CSV/JSON files
// into the output directory and prints a short summary.

#ifndef PRZCDP_CLI_COMMANDS_H_
#define PRZCDP_CLI_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "absl/status/status.h"

namespace przcdp::cli {

struct CommandOptions {
  std::filesystem::path config;
  std::optional<uint64_t> seed;             // overrides the config seed
  std::optional<std::filesystem::path> out;  // overrides the config output
  bool no_noise = false;
  int jobs = 1;
  std::ostream* log = nullptr;  // summary lines; nullptr for silence
};

std::string ProvenanceComment(uint64_t seed);

absl::Status CmdSplit(const CommandOptions& options);
absl::Status CmdRun(const CommandOptions& options);
absl::Status CmdBaseline(const CommandOptions& options);
absl::Status CmdSweep(const CommandOptions& options);
absl::Status CmdMseTheory(const CommandOptions& options);
absl::Status CmdFfu(const CommandOptions& options);
absl::Status CmdMetrics(const CommandOptions& options);

// 0 success, 2 config or validation failure, 3 runtime failure.
int ExitCodeFor(const absl::Status& status);

}  // namespace przcdp::cli

#endif  // PRZCDP_CLI_COMMANDS_H_
