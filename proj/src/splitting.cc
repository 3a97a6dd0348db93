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

#include "przcdp/splitting.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "absl/strings/str_cat.h"

namespace przcdp {
namespace {

// Materialized split tables above this size are refused.
constexpr int64_t kMaxSplitRows = int64_t{1} << 31;

}  // namespace

std::optional<double> SplitThresholds::Get(std::string_view attribute) const {
  auto it = caps_.find(std::string(attribute));
  if (it == caps_.end()) return std::nullopt;
  return it->second;
}

const SplitThresholds& GroupedThresholds::For(std::string_view label) const {
  auto it = groups.find(std::string(label));
  return it == groups.end() ? fallback : it->second;
}

absl::Status CheckThresholds(const SplitThresholds& thresholds,
                             const Schema& schema) {
  for (const std::string& measure : schema.measure_names()) {
    std::optional<double> cap = thresholds.Get(measure);
    if (!cap.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("MissingThreshold: no threshold for measure '",
                       measure, "'"));
    }
    if (!(*cap > 0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("NonpositiveThreshold: threshold for '", measure,
                       "' must be > 0"));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckThresholds(const ThresholdScheme& scheme,
                             const Schema& schema) {
  if (const auto* flat = std::get_if<SplitThresholds>(&scheme)) {
    return CheckThresholds(*flat, schema);
  }
  const auto& grouped = std::get<GroupedThresholds>(scheme);
  if (!schema.IsConditional(grouped.key_attribute)) {
    return absl::InvalidArgumentError(
        absl::StrCat("KeyAttributeNotConditional: '", grouped.key_attribute,
                     "'"));
  }
  if (absl::Status s = CheckThresholds(grouped.fallback, schema); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(s.message(), " (default branch)"));
  }
  for (const auto& [label, thresholds] : grouped.groups) {
    if (absl::Status s = CheckThresholds(thresholds, schema); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(s.message(), " (branch '", label, "')"));
    }
  }
  return absl::OkStatus();
}

const SplitThresholds& ThresholdsForRow(const ThresholdScheme& scheme,
                                        const Schema& schema, const Row& row) {
  if (const auto* flat = std::get_if<SplitThresholds>(&scheme)) return *flat;
  const auto& grouped = std::get<GroupedThresholds>(scheme);
  return grouped.For(LabelOf(schema, row, grouped.key_attribute));
}

int64_t PiecesNeeded(double value, double cap) {
  if (value <= 0) return 0;
  if (std::isinf(cap)) return 1;
  double pieces = std::ceil(value / cap);
  while (pieces > 1 && (pieces - 1) * cap >= value) pieces -= 1;
  while (pieces * cap < value) pieces += 1;
  return static_cast<int64_t>(pieces);
}

absl::StatusOr<int64_t> SplitCount(const Schema& schema, const Row& row,
                                   const SplitThresholds& thresholds) {
  int64_t m = 1;
  for (size_t i = 0; i < schema.measure_names().size(); ++i) {
    std::optional<double> cap = thresholds.Get(schema.measure_names()[i]);
    if (!cap.has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("MissingThreshold: no threshold for measure '",
                       schema.measure_names()[i], "'"));
    }
    m = std::max(m, PiecesNeeded(row.measures[i], *cap));
  }
  return m;
}

absl::StatusOr<int64_t> SplitCount(const Schema& schema, const Row& row,
                                   const ThresholdScheme& scheme) {
  if (const auto* grouped = std::get_if<GroupedThresholds>(&scheme)) {
    if (!schema.IsConditional(grouped->key_attribute)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "KeyAttributeNotConditional: '", grouped->key_attribute, "'"));
    }
  }
  return SplitCount(schema, row, ThresholdsForRow(scheme, schema, row));
}

std::vector<double> SplitMeasure(double value, double cap, int64_t parts) {
  std::vector<double> out(static_cast<size_t>(parts), 0.0);
  if (value <= 0 || parts == 0) return out;
  if (std::isinf(cap)) {
    out[0] = value;
    return out;
  }
  const int64_t needed = PiecesNeeded(value, cap);
  for (int64_t i = 0; i + 1 < needed; ++i) out[static_cast<size_t>(i)] = cap;
  const double remainder = value - static_cast<double>(needed - 1) * cap;
  out[static_cast<size_t>(needed - 1)] = std::min(remainder, cap);
  return out;
}

size_t SplitTable::CountDistinctOrigins() const {
  std::unordered_set<RowId> origins;
  for (const Row& row : table_.rows()) origins.insert(row.origin_row_id);
  return origins.size();
}

absl::StatusOr<SplitTable> UnitSplit(const Table& table,
                                     const ThresholdScheme& scheme) {
  const Schema& schema = table.schema();
  if (absl::Status s = CheckThresholds(scheme, schema); !s.ok()) return s;

  std::vector<int64_t> counts;
  counts.reserve(table.size());
  int64_t total = 0;
  for (const Row& row : table.rows()) {
    absl::StatusOr<int64_t> m =
        SplitCount(schema, row, ThresholdsForRow(scheme, schema, row));
    if (!m.ok()) return m.status();
    counts.push_back(*m);
    total += *m;
    if (total > kMaxSplitRows) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "split table would exceed ", kMaxSplitRows, " rows"));
    }
  }

  std::vector<Row> out;
  out.reserve(static_cast<size_t>(total));
  RowId next_id = 1;
  const size_t num_measures = schema.measure_names().size();
  for (size_t r = 0; r < table.size(); ++r) {
    const Row& row = table.rows()[r];
    const SplitThresholds& thresholds = ThresholdsForRow(scheme, schema, row);
    const int64_t m = counts[r];
    std::vector<std::vector<double>> columns(num_measures);
    for (size_t a = 0; a < num_measures; ++a) {
      columns[a] = SplitMeasure(row.measures[a],
                                *thresholds.Get(schema.measure_names()[a]), m);
    }
    for (int64_t i = 0; i < m; ++i) {
      Row split;
      split.row_id = next_id++;
      split.origin_row_id = row.row_id;
      split.labels = row.labels;
      split.measures.resize(num_measures);
      for (size_t a = 0; a < num_measures; ++a) {
        split.measures[a] = columns[a][static_cast<size_t>(i)];
      }
      out.push_back(std::move(split));
    }
  }
  return SplitTable(Table(schema, std::move(out)));
}

absl::StatusOr<SplitTable> UnitSplit(const Table& table,
                                     const SplitThresholds& thresholds) {
  return UnitSplit(table, ThresholdScheme(thresholds));
}

absl::StatusOr<SplitTable> UnitSplitGrouped(const Table& table,
                                            const GroupedThresholds& grouped) {
  return UnitSplit(table, ThresholdScheme(grouped));
}

}  // namespace przcdp
