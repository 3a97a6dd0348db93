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

// Aggregation workloads: queries, their rewriting onto a split table,
// sensitivities, and private execution with a full release trace.

#ifndef PRZCDP_WORKLOAD_H_
#define PRZCDP_WORKLOAD_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "przcdp/accountant.h"
#include "przcdp/policy.h"
#include "przcdp/rng.h"
#include "przcdp/splitting.h"
#include "przcdp/table.h"

namespace przcdp {

enum class QueryKind { kCount, kCountDistinct, kSum, kAvg };
enum class Formalism { kZcdpPresplit, kPrzcdpPostsplit };

std::string_view QueryKindName(QueryKind kind);
absl::StatusOr<QueryKind> ParseQueryKind(std::string_view name);
std::string_view FormalismName(Formalism formalism);
absl::StatusOr<Formalism> ParseFormalism(std::string_view name);

// attribute IN values.
struct Filter {
  std::string attribute;
  std::vector<std::string> values;
};

struct Query {
  std::string id;
  QueryKind kind = QueryKind::kCount;
  std::string attribute;  // measure for SUM / AVG
  std::vector<std::string> group_by;
  std::vector<Filter> filters;  // conjunction
  Formalism formalism = Formalism::kPrzcdpPostsplit;
  double rho = 0;
  // Optional per-cell budgets keyed by the encoded group key; cells not
  // listed use `rho`.
  std::map<std::string, double> cell_budgets;

  double BudgetFor(const std::string& cell) const;
};

struct PartitionStage {
  std::vector<std::string> group_by;
  double sigma = 0;
  double tau = 0;
};

struct Workload {
  std::vector<Query> queries;
  ThresholdScheme thresholds;
  std::optional<PartitionStage> partition;
  // Clamping bounds for pre-split queries and the zCDP baseline.
  std::map<std::string, double> top_codes;
};

absl::Status ValidateWorkload(const Workload& workload, const Schema& schema);

bool PassesFilters(const Schema& schema, const Row& row,
                   const std::vector<Filter>& filters);

// A query over the split table.
struct RewrittenQuery {
  enum class Kind { kCountDistinctOrigin, kSum, kSumOverCountDistinct };
  Kind kind = Kind::kCountDistinctOrigin;
  std::string attribute;
  std::vector<std::string> group_by;
  std::vector<Filter> filters;

  // SQL-like rendering, e.g. "SUM(Payroll)/COUNT_DISTINCT(ROW_ID)".
  std::string ToString() const;
};

absl::StatusOr<RewrittenQuery> Rewrite(const Query& query);

// Sensitivity of the query's aggregate over split rows. COUNT-like queries
// have sensitivity 1; SUM and AVG use the cap of their attribute. With grouped
// thresholds, `branch` names the key label of a cell; without it the largest
// cap over all branches and the default applies.
absl::StatusOr<double> Sensitivity(
    const Query& query, const ThresholdScheme& thresholds,
    const std::optional<std::string>& branch = std::nullopt);

// One Gaussian release.
struct TraceEntry {
  enum class Kind { kPartitionCount, kCount, kSum };
  int query_index = -1;  // -1 for partition selection
  Kind kind = Kind::kCount;
  Formalism stage = Formalism::kPrzcdpPostsplit;
  std::string label;  // query id, with "#sum" / "#count" for AVG parts
  std::string attribute;
  std::optional<double> clamp;  // top-code for pre-split sums
  GroupKey group;
  std::string group_key;  // encoded
  double delta = 0;
  double sigma = 0;
  double rho = 0;
  double true_value = 0;      // answer the noise was added to
  double raw_true_value = 0;  // unclamped raw-table answer
  double noisy_value = 0;
};

struct NoisyAnswer {
  int query_index = 0;
  std::string query_id;
  std::string group_key;
  double true_value = 0;
  double value = 0;
  // Set for AVG cells whose noisy count is not positive; `value` is NaN.
  bool missing = false;
  std::vector<size_t> trace_entries;
};

struct RunTrace {
  Workload workload;
  std::vector<TraceEntry> entries;
  PrivacyLedger ledger;
  std::optional<std::vector<std::string>> released_keys;
};

struct ExecutionResult {
  std::vector<NoisyAnswer> answers;
  PolicyFunction policy;
  RunTrace trace;
};

struct ExecutionOptions {
  // Test hook: release exact answers while still recording sigma.
  bool add_noise = true;
};

// Pre-split queries run on the raw table with clamping; the table is split
// once; optional partition selection restricts the keysets of queries that
// group by the same attributes; post-split queries run on the split table.
// Noise streams: {"presplit"|"postsplit", query index, group key,
// "sum"|"count"} and {"partition", group key}.
absl::StatusOr<ExecutionResult> Execute(const Workload& workload,
                                        const Table& table,
                                        const SeededRng& rng,
                                        const ExecutionOptions& options = {});

struct BaselineResult {
  std::vector<NoisyAnswer> answers;
  double rho = 0;
  RunTrace trace;
};

// Every query as a pre-split zCDP query on the clamped raw table.
absl::StatusOr<BaselineResult> ExecuteZcdpBaseline(
    const Workload& workload, const Table& table, const SeededRng& rng,
    const ExecutionOptions& options = {});

}  // namespace przcdp

#endif  // PRZCDP_WORKLOAD_H_
