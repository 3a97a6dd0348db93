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

#include <cstdint>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "przcdp/cli/commands.h"

namespace {

using przcdp::cli::CommandOptions;
using Command = std::function<absl::Status(const CommandOptions&)>;

struct Flags {
  std::string config;
  uint64_t seed = 0;
  std::string out;
  bool no_noise = false;
  int jobs = 1;
};

void AddFlags(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", flags.seed, "Root seed (overrides the config)");
  sub->add_option("--out", flags.out,
                  "Output directory (overrides the config)");
  sub->add_flag("--no-noise", flags.no_noise,
                "Release exact answers (testing only)");
  sub->add_option("--jobs", flags.jobs, "Worker threads for sweeps")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-record zCDP aggregate release with unit splitting"};
  app.set_version_flag("--version", PRZCDP_VERSION);
  app.require_subcommand(1);

  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"split", "Unit-split a table and write split.csv",
       przcdp::cli::CmdSplit},
      {"run", "Execute a workload; write answers.csv, trace.csv, policy.json",
       przcdp::cli::CmdRun},
      {"baseline", "Execute the workload as clamped zCDP queries",
       przcdp::cli::CmdBaseline},
      {"sweep", "Threshold x rho sweep; write are_sweep.csv, policy_cdf.csv",
       przcdp::cli::CmdSweep},
      {"mse-theory", "Clamped Pareto-sum MSE grid; write mse_ratio.csv",
       przcdp::cli::CmdMseTheory},
      {"ffu", "Minimum budgets for relative-error targets; write ffu_cdf.csv",
       przcdp::cli::CmdFfu},
      {"metrics", "Re-run a workload and report errors and realized losses",
       przcdp::cli::CmdMetrics},
  };

  Flags flags;
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [name, help, command] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    AddFlags(sub, flags);
    subs.emplace_back(sub, command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CommandOptions options;
  options.config = flags.config;
  for (const auto& [sub, command] : subs) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed") > 0) options.seed = flags.seed;
    if (!flags.out.empty()) options.out = flags.out;
    options.no_noise = flags.no_noise;
    options.jobs = flags.jobs;
    options.log = &std::cout;
    const absl::Status status = command(options);
    if (!status.ok()) std::cerr << "error: " << status.message() << "\n";
    return przcdp::cli::ExitCodeFor(status);
  }
  return 2;
}
