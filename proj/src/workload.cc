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

#include "przcdp/workload.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "przcdp/mechanisms.h"

namespace przcdp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

absl::Status Invalid(absl::string_view kind, absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat(kind, ": ", message));
}

bool IsPositiveFinite(double x) { return x > 0 && std::isfinite(x); }

bool UsesMeasure(QueryKind kind) {
  return kind == QueryKind::kSum || kind == QueryKind::kAvg;
}

// Per-cell accumulator over the rows of one group.
struct Cell {
  GroupKey key;
  double sum = 0;
  double raw_sum = 0;
  std::unordered_set<RowId> origins;
  int64_t rows = 0;
};

std::map<std::string, Cell> Aggregate(const Schema& schema,
                                      const std::vector<Row>& rows,
                                      const Query& query,
                                      std::optional<double> clamp) {
  std::map<std::string, Cell> cells;
  const bool has_measure = UsesMeasure(query.kind);
  for (const Row& row : rows) {
    if (!PassesFilters(schema, row, query.filters)) continue;
    GroupKey key = GroupKeyOf(schema, row, query.group_by);
    std::string encoded = EncodeGroupKey(key);
    Cell& cell = cells[encoded];
    if (cell.rows == 0) cell.key = std::move(key);
    cell.rows += 1;
    cell.origins.insert(row.origin_row_id);
    if (has_measure) {
      const double v = MeasureOf(schema, row, query.attribute);
      cell.raw_sum += v;
      cell.sum += clamp ? Clamp(v, *clamp) : v;
    }
  }
  return cells;
}

// Largest cap of `attribute` among the branches a cell can draw rows from.
absl::StatusOr<double> CapBound(const Query& query,
                                const ThresholdScheme& scheme,
                                const std::optional<std::string>& branch) {
  auto cap_of = [&](const SplitThresholds& t) -> absl::StatusOr<double> {
    std::optional<double> cap = t.Get(query.attribute);
    if (!cap) {
      return Invalid("MissingThreshold",
                     absl::StrCat("no threshold for '", query.attribute, "'"));
    }
    return *cap;
  };
  if (const auto* flat = std::get_if<SplitThresholds>(&scheme)) {
    return cap_of(*flat);
  }
  const auto& grouped = std::get<GroupedThresholds>(scheme);
  if (branch) return cap_of(grouped.For(*branch));

  std::vector<const SplitThresholds*> candidates;
  const Filter* key_filter = nullptr;
  for (const Filter& f : query.filters) {
    if (f.attribute == grouped.key_attribute) key_filter = &f;
  }
  if (key_filter != nullptr) {
    for (const std::string& v : key_filter->values) {
      candidates.push_back(&grouped.For(v));
    }
  } else {
    candidates.push_back(&grouped.fallback);
    for (const auto& [label, t] : grouped.groups) candidates.push_back(&t);
  }
  double most = 0;
  for (const SplitThresholds* t : candidates) {
    absl::StatusOr<double> cap = cap_of(*t);
    if (!cap.ok()) return cap.status();
    most = std::max(most, *cap);
  }
  return most;
}

std::optional<std::string> BranchOfCell(const Query& query,
                                        const ThresholdScheme& scheme,
                                        const GroupKey& key) {
  const auto* grouped = std::get_if<GroupedThresholds>(&scheme);
  if (grouped == nullptr) return std::nullopt;
  for (size_t i = 0; i < query.group_by.size(); ++i) {
    if (query.group_by[i] == grouped->key_attribute) return key[i];
  }
  return std::nullopt;
}

// Charge of a query whose per-cell charge is `make(rho_cell)`.
PolicyFunction QueryCharge(const Query& query,
                           const std::function<PolicyFunction(double)>& make) {
  if (query.cell_budgets.empty() || query.group_by.empty()) {
    return make(query.BudgetFor(EncodeGroupKey({})));
  }
  std::map<std::string, PolicyFunction> branches;
  for (const auto& [cell, rho] : query.cell_budgets) branches[cell] = make(rho);
  return PiecewisePolicy(query.group_by, std::move(branches), make(query.rho));
}

class Runner {
 public:
  Runner(const Workload& workload, const SeededRng& rng,
         const ExecutionOptions& options)
      : rng_(rng), options_(options) {
    trace_.workload = workload;
  }

  absl::StatusOr<TraceEntry> Release(TraceEntry entry, const SeededRng& path) {
    absl::StatusOr<double> sigma = SigmaForRho(entry.delta, entry.rho);
    if (!sigma.ok()) return sigma.status();
    absl::StatusOr<GaussianNoiseSpec> spec =
        GaussianNoiseSpec::Create(entry.delta, *sigma);
    if (!spec.ok()) return spec.status();
    entry.sigma = *sigma;
    if (options_.add_noise) {
      absl::StatusOr<double> noisy =
          GaussianRelease(entry.true_value, *spec, path);
      if (!noisy.ok()) return noisy.status();
      entry.noisy_value = *noisy;
    } else {
      entry.noisy_value = entry.true_value;
    }
    return entry;
  }

  size_t Push(TraceEntry entry) {
    trace_.entries.push_back(std::move(entry));
    return trace_.entries.size() - 1;
  }

  absl::Status RunPresplit(int index, const Query& query, const Table& table) {
    std::optional<double> clamp;
    if (UsesMeasure(query.kind)) clamp = trace_.workload.top_codes.at(query.attribute);
    const SeededRng base = rng_.Child("presplit").Child(index);
    for (auto& [encoded, cell] :
         Aggregate(table.schema(), table.rows(), query, clamp)) {
      const double rho = query.BudgetFor(encoded);
      TraceEntry common;
      common.query_index = index;
      common.stage = Formalism::kZcdpPresplit;
      common.attribute = query.attribute;
      common.group = cell.key;
      common.group_key = encoded;
      absl::Status s = EmitCell(query, cell, encoded, rho, common, clamp,
                                clamp.value_or(1), base.Child(encoded));
      if (!s.ok()) return s;
    }
    trace_.ledger.Add(absl::StrCat("presplit:", query.id),
                      QueryCharge(query, ConstantPolicy));
    return absl::OkStatus();
  }

  absl::Status RunPartition(const PartitionStage& stage,
                            const SplitTable& split) {
    absl::StatusOr<PartitionSelection> selection =
        PartitionSelect(split, stage.group_by, stage.sigma, stage.tau,
                        rng_.Child("partition"));
    if (!selection.ok()) return selection.status();
    std::map<std::string, GroupKey> labels;
    for (const Row& row : split.rows()) {
      GroupKey key = GroupKeyOf(split.schema(), row, stage.group_by);
      labels.try_emplace(EncodeGroupKey(key), std::move(key));
    }
    const double rho = 1 / (2 * stage.sigma * stage.sigma);
    for (const auto& [encoded, count] : selection->true_counts) {
      TraceEntry entry;
      entry.kind = TraceEntry::Kind::kPartitionCount;
      entry.stage = Formalism::kPrzcdpPostsplit;
      entry.label = "partition";
      entry.group = labels.at(encoded);
      entry.group_key = encoded;
      entry.delta = 1;
      entry.sigma = stage.sigma;
      entry.rho = rho;
      entry.true_value = count;
      entry.raw_true_value = count;
      entry.noisy_value = selection->noisy_counts.at(encoded);
      Push(std::move(entry));
    }
    released_ = selection->released;
    trace_.released_keys.emplace(released_->begin(), released_->end());
    trace_.ledger.Add("partition_selection",
                      PartitionSelectionCharge(stage.sigma,
                                               trace_.workload.thresholds));
    return absl::OkStatus();
  }

  absl::Status RunPostsplit(int index, const Query& query,
                            const SplitTable& split) {
    const Workload& w = trace_.workload;
    const bool restricted = released_.has_value() && w.partition &&
                            w.partition->group_by == query.group_by;
    const SeededRng base = rng_.Child("postsplit").Child(index);
    for (auto& [encoded, cell] :
         Aggregate(split.schema(), split.rows(), query, std::nullopt)) {
      if (restricted && !released_->contains(encoded)) continue;
      double delta = 1;
      if (UsesMeasure(query.kind)) {
        absl::StatusOr<double> cap = CapBound(
            query, w.thresholds, BranchOfCell(query, w.thresholds, cell.key));
        if (!cap.ok()) return cap.status();
        delta = *cap;
      }
      TraceEntry common;
      common.query_index = index;
      common.stage = Formalism::kPrzcdpPostsplit;
      common.attribute = query.attribute;
      common.group = cell.key;
      common.group_key = encoded;
      absl::Status s = EmitCell(query, cell, encoded, query.BudgetFor(encoded),
                                common, std::nullopt, delta,
                                base.Child(encoded));
      if (!s.ok()) return s;
    }
    const ThresholdScheme& scheme = w.thresholds;
    std::function<PolicyFunction(double)> make;
    switch (query.kind) {
      case QueryKind::kCount:
      case QueryKind::kCountDistinct:
        make = ConstantPolicy;
        break;
      case QueryKind::kSum:
        make = [&](double rho) { return SplitCostPolicy(rho, scheme); };
        break;
      case QueryKind::kAvg:
        make = [&](double rho) {
          return SumPolicy(
              {SplitCostPolicy(rho / 2, scheme), ConstantPolicy(rho / 2)});
        };
        break;
    }
    trace_.ledger.Add(absl::StrCat("postsplit:", query.id),
                      QueryCharge(query, make));
    return absl::OkStatus();
  }

  std::vector<NoisyAnswer>& answers() { return answers_; }
  RunTrace& trace() { return trace_; }

 private:
  // Releases one cell. `sum_delta` is the sensitivity of the sum part.
  absl::Status EmitCell(const Query& query, const Cell& cell,
                        const std::string& encoded, double rho,
                        const TraceEntry& common, std::optional<double> clamp,
                        double sum_delta, const SeededRng& path) {
    NoisyAnswer answer;
    answer.query_index = common.query_index;
    answer.query_id = query.id;
    answer.group_key = encoded;
    const double count = static_cast<double>(cell.origins.size());

    auto count_entry = [&](double budget, std::string label) {
      TraceEntry e = common;
      e.kind = TraceEntry::Kind::kCount;
      e.label = std::move(label);
      e.attribute.clear();
      e.delta = 1;
      e.rho = budget;
      e.true_value = count;
      e.raw_true_value = count;
      return e;
    };
    auto sum_entry = [&](double budget, std::string label) {
      TraceEntry e = common;
      e.kind = TraceEntry::Kind::kSum;
      e.label = std::move(label);
      e.clamp = clamp;
      e.delta = sum_delta;
      e.rho = budget;
      e.true_value = cell.sum;
      e.raw_true_value = cell.raw_sum;
      return e;
    };

    switch (query.kind) {
      case QueryKind::kCount:
      case QueryKind::kCountDistinct:
      case QueryKind::kSum: {
        TraceEntry e = query.kind == QueryKind::kSum
                           ? sum_entry(rho, query.id)
                           : count_entry(rho, query.id);
        const SeededRng stream =
            path.Child(query.kind == QueryKind::kSum ? "sum" : "count");
        absl::StatusOr<TraceEntry> done = Release(std::move(e), stream);
        if (!done.ok()) return done.status();
        answer.true_value = done->true_value;
        answer.value = done->noisy_value;
        answer.trace_entries.push_back(Push(*std::move(done)));
        break;
      }
      case QueryKind::kAvg: {
        absl::StatusOr<TraceEntry> sum = Release(
            sum_entry(rho / 2, absl::StrCat(query.id, "#sum")),
            path.Child("sum"));
        if (!sum.ok()) return sum.status();
        absl::StatusOr<TraceEntry> cnt = Release(
            count_entry(rho / 2, absl::StrCat(query.id, "#count")),
            path.Child("count"));
        if (!cnt.ok()) return cnt.status();
        answer.true_value = sum->true_value / cnt->true_value;
        if (cnt->noisy_value > 0) {
          answer.value = sum->noisy_value / cnt->noisy_value;
        } else {
          answer.value = kNaN;
          answer.missing = true;
        }
        answer.trace_entries.push_back(Push(*std::move(sum)));
        answer.trace_entries.push_back(Push(*std::move(cnt)));
        break;
      }
    }
    answers_.push_back(std::move(answer));
    return absl::OkStatus();
  }

  SeededRng rng_;
  ExecutionOptions options_;
  RunTrace trace_;
  std::vector<NoisyAnswer> answers_;
  std::optional<std::set<std::string>> released_;
};

}  // namespace

std::string_view QueryKindName(QueryKind kind) {
  switch (kind) {
    case QueryKind::kCount:
      return "COUNT";
    case QueryKind::kCountDistinct:
      return "COUNT_DISTINCT";
    case QueryKind::kSum:
      return "SUM";
    case QueryKind::kAvg:
      return "AVG";
  }
  return "";
}

absl::StatusOr<QueryKind> ParseQueryKind(std::string_view name) {
  for (QueryKind k : {QueryKind::kCount, QueryKind::kCountDistinct,
                      QueryKind::kSum, QueryKind::kAvg}) {
    if (name == QueryKindName(k)) return k;
  }
  return Invalid("UnsupportedKind", absl::StrCat("unknown query kind '", std::string(name), "'"));
}

std::string_view FormalismName(Formalism formalism) {
  return formalism == Formalism::kZcdpPresplit ? "zcdp_presplit"
                                               : "przcdp_postsplit";
}

absl::StatusOr<Formalism> ParseFormalism(std::string_view name) {
  if (name == "zcdp_presplit") return Formalism::kZcdpPresplit;
  if (name == "przcdp_postsplit") return Formalism::kPrzcdpPostsplit;
  return Invalid("ParseFailure", absl::StrCat("unknown formalism '", std::string(name), "'"));
}

double Query::BudgetFor(const std::string& cell) const {
  auto it = cell_budgets.find(cell);
  return it == cell_budgets.end() ? rho : it->second;
}

bool PassesFilters(const Schema& schema, const Row& row,
                   const std::vector<Filter>& filters) {
  for (const Filter& f : filters) {
    const std::string& label = LabelOf(schema, row, f.attribute);
    if (std::find(f.values.begin(), f.values.end(), label) == f.values.end()) {
      return false;
    }
  }
  return true;
}

absl::Status ValidateWorkload(const Workload& workload, const Schema& schema) {
  auto check_conditional = [&](const std::string& name,
                               const std::string& where) -> absl::Status {
    if (!schema.Contains(name)) {
      return Invalid("UnknownAttribute",
                     absl::StrCat("'", name, "' in ", where));
    }
    if (!schema.IsConditional(name)) {
      return Invalid("KeyAttributeNotConditional",
                     absl::StrCat("'", name, "' in ", where));
    }
    return absl::OkStatus();
  };

  bool needs_split = workload.partition.has_value();
  std::set<std::string> ids;
  for (const Query& q : workload.queries) {
    const std::string where = absl::StrCat("query '", q.id, "'");
    if (q.id.empty()) return Invalid("ParseFailure", "query without an id");
    if (!ids.insert(q.id).second) {
      return Invalid("DuplicateQueryId", absl::StrCat("'", q.id, "'"));
    }
    if (!IsPositiveFinite(q.rho)) {
      return Invalid("NonpositiveBudget",
                     absl::StrCat(where, " has rho ", q.rho));
    }
    for (const auto& [cell, rho] : q.cell_budgets) {
      if (!IsPositiveFinite(rho)) {
        return Invalid("NonpositiveBudget",
                       absl::StrCat(where, " cell '", cell, "' has rho ", rho));
      }
    }
    if (UsesMeasure(q.kind)) {
      if (!schema.Contains(q.attribute)) {
        return Invalid("UnknownAttribute",
                       absl::StrCat("'", q.attribute, "' in ", where));
      }
      if (!schema.IsMeasure(q.attribute)) {
        return Invalid("NotAMeasure",
                       absl::StrCat("'", q.attribute, "' in ", where));
      }
    }
    for (const std::string& g : q.group_by) {
      if (absl::Status s = check_conditional(g, where); !s.ok()) return s;
    }
    for (const Filter& f : q.filters) {
      if (absl::Status s = check_conditional(f.attribute, where); !s.ok()) {
        return s;
      }
    }
    if (q.formalism == Formalism::kZcdpPresplit && UsesMeasure(q.kind)) {
      auto it = workload.top_codes.find(q.attribute);
      if (it == workload.top_codes.end()) {
        return Invalid("MissingTopCode",
                       absl::StrCat("no top-code for '", q.attribute, "' (",
                                    where, ")"));
      }
      if (!IsPositiveFinite(it->second)) {
        return Invalid("MissingTopCode",
                       absl::StrCat("top-code for '", q.attribute,
                                    "' must be positive and finite"));
      }
    }
    if (q.formalism == Formalism::kPrzcdpPostsplit) needs_split = true;
  }

  if (needs_split) {
    if (absl::Status s = CheckThresholds(workload.thresholds, schema); !s.ok()) {
      return s;
    }
    for (const Query& q : workload.queries) {
      if (q.formalism != Formalism::kPrzcdpPostsplit || !UsesMeasure(q.kind)) {
        continue;
      }
      absl::StatusOr<double> delta = Sensitivity(q, workload.thresholds);
      if (!delta.ok()) return delta.status();
      if (!std::isfinite(*delta)) {
        return Invalid("UnboundedSensitivity",
                       absl::StrCat("query '", q.id, "' sums '", q.attribute,
                                    "' whose threshold is infinite"));
      }
    }
  }

  if (workload.partition) {
    const PartitionStage& p = *workload.partition;
    if (p.group_by.empty()) {
      return Invalid("KeyAttributeNotConditional",
                     "partition selection needs at least one attribute");
    }
    for (const std::string& g : p.group_by) {
      if (absl::Status s = check_conditional(g, "partition selection");
          !s.ok()) {
        return s;
      }
    }
    if (!IsPositiveFinite(p.sigma)) {
      return Invalid("NonpositiveSigma", absl::StrCat("sigma = ", p.sigma));
    }
    if (!IsPositiveFinite(p.tau)) {
      return Invalid("NonpositiveTau", absl::StrCat("tau = ", p.tau));
    }
  }
  return absl::OkStatus();
}

std::string RewrittenQuery::ToString() const {
  std::string out;
  switch (kind) {
    case Kind::kCountDistinctOrigin:
      out = "COUNT_DISTINCT(ROW_ID)";
      break;
    case Kind::kSum:
      out = absl::StrCat("SUM(", attribute, ")");
      break;
    case Kind::kSumOverCountDistinct:
      out = absl::StrCat("SUM(", attribute, ")/COUNT_DISTINCT(ROW_ID)");
      break;
  }
  for (const Filter& f : filters) {
    absl::StrAppend(&out, " WHERE ", f.attribute, " IN (",
                    absl::StrJoin(f.values, ","), ")");
  }
  if (!group_by.empty()) {
    absl::StrAppend(&out, " GROUP BY ", absl::StrJoin(group_by, ","));
  }
  return out;
}

absl::StatusOr<RewrittenQuery> Rewrite(const Query& query) {
  RewrittenQuery out;
  out.group_by = query.group_by;
  out.filters = query.filters;
  switch (query.kind) {
    case QueryKind::kCount:
    case QueryKind::kCountDistinct:
      out.kind = RewrittenQuery::Kind::kCountDistinctOrigin;
      return out;
    case QueryKind::kSum:
      out.kind = RewrittenQuery::Kind::kSum;
      out.attribute = query.attribute;
      return out;
    case QueryKind::kAvg:
      out.kind = RewrittenQuery::Kind::kSumOverCountDistinct;
      out.attribute = query.attribute;
      return out;
  }
  return Invalid("UnsupportedKind", "unknown query kind");
}

absl::StatusOr<double> Sensitivity(const Query& query,
                                   const ThresholdScheme& thresholds,
                                   const std::optional<std::string>& branch) {
  if (!UsesMeasure(query.kind)) return 1.0;
  return CapBound(query, thresholds, branch);
}

absl::StatusOr<ExecutionResult> Execute(const Workload& workload,
                                        const Table& table,
                                        const SeededRng& rng,
                                        const ExecutionOptions& options) {
  if (absl::Status s = ValidateWorkload(workload, table.schema()); !s.ok()) {
    return s;
  }
  Runner runner(workload, rng, options);
  bool needs_split = workload.partition.has_value();
  for (size_t i = 0; i < workload.queries.size(); ++i) {
    const Query& q = workload.queries[i];
    if (q.formalism != Formalism::kZcdpPresplit) {
      needs_split = true;
      continue;
    }
    absl::Status s = runner.RunPresplit(static_cast<int>(i), q, table);
    if (!s.ok()) return s;
  }
  if (needs_split) {
    absl::StatusOr<SplitTable> split = UnitSplit(table, workload.thresholds);
    if (!split.ok()) return split.status();
    if (workload.partition) {
      absl::Status s = runner.RunPartition(*workload.partition, *split);
      if (!s.ok()) return s;
    }
    for (size_t i = 0; i < workload.queries.size(); ++i) {
      const Query& q = workload.queries[i];
      if (q.formalism != Formalism::kPrzcdpPostsplit) continue;
      absl::Status s = runner.RunPostsplit(static_cast<int>(i), q, *split);
      if (!s.ok()) return s;
    }
  }
  ExecutionResult out;
  out.answers = std::move(runner.answers());
  out.trace = std::move(runner.trace());
  out.policy = out.trace.ledger.Combined();
  return out;
}

absl::StatusOr<BaselineResult> ExecuteZcdpBaseline(
    const Workload& workload, const Table& table, const SeededRng& rng,
    const ExecutionOptions& options) {
  Workload baseline = workload;
  baseline.partition.reset();
  for (Query& q : baseline.queries) q.formalism = Formalism::kZcdpPresplit;
  absl::StatusOr<ExecutionResult> run = Execute(baseline, table, rng, options);
  if (!run.ok()) return run.status();
  BaselineResult out;
  out.answers = std::move(run->answers);
  out.rho = PolicySupremum(run->policy, 1);
  out.trace = std::move(run->trace);
  return out;
}

}  // namespace przcdp
