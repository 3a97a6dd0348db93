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

// Unit splitting: each record r becomes m(r) = max(1, max_a ceil(r(a)/T(a)))
// sub-records whose measure values are capped at T(a) and sum back to r(a).
// Conditional attributes are copied to every sub-record.

#ifndef PRZCDP_SPLITTING_H_
#define PRZCDP_SPLITTING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "przcdp/table.h"

namespace przcdp {

// Per-measure caps T(a). Caps are positive reals; +infinity means the
// attribute never forces a split.
class SplitThresholds {
 public:
  SplitThresholds() = default;
  explicit SplitThresholds(std::map<std::string, double> caps)
      : caps_(std::move(caps)) {}

  std::optional<double> Get(std::string_view attribute) const;
  const std::map<std::string, double>& caps() const { return caps_; }

  friend bool operator==(const SplitThresholds&,
                         const SplitThresholds&) = default;

 private:
  std::map<std::string, double> caps_;
};

// Thresholds chosen by the value of one conditional attribute. Labels not in
// `groups` use `fallback`.
struct GroupedThresholds {
  std::string key_attribute;
  std::map<std::string, SplitThresholds> groups;
  SplitThresholds fallback;

  const SplitThresholds& For(std::string_view label) const;

  friend bool operator==(const GroupedThresholds&,
                         const GroupedThresholds&) = default;
};

using ThresholdScheme = std::variant<SplitThresholds, GroupedThresholds>;

// MissingThreshold / NonpositiveThreshold when a measure lacks a usable cap.
absl::Status CheckThresholds(const SplitThresholds& thresholds,
                             const Schema& schema);
// Also KeyAttributeNotConditional for grouped schemes.
absl::Status CheckThresholds(const ThresholdScheme& scheme,
                             const Schema& schema);

// Thresholds that apply to `row`: the row's group branch for grouped schemes.
const SplitThresholds& ThresholdsForRow(const ThresholdScheme& scheme,
                                        const Schema& schema, const Row& row);

// Smallest m with m * cap >= value (0 for value 0). Robust to rounding in
// value / cap.
int64_t PiecesNeeded(double value, double cap);

absl::StatusOr<int64_t> SplitCount(const Schema& schema, const Row& row,
                                   const SplitThresholds& thresholds);
absl::StatusOr<int64_t> SplitCount(const Schema& schema, const Row& row,
                                   const ThresholdScheme& scheme);

// Greedy decomposition of `value` into `parts` entries: cap, cap, ...,
// remainder, then zeros. Requires parts >= PiecesNeeded(value, cap).
std::vector<double> SplitMeasure(double value, double cap, int64_t parts);

// A table produced by unit splitting. Split rows get fresh sequential row ids
// (1, 2, ...) and carry their source row in `origin_row_id`. Rows are emitted
// in source-row order, sub-records in greedy order.
class SplitTable {
 public:
  SplitTable() = default;
  explicit SplitTable(Table table) : table_(std::move(table)) {}

  const Table& table() const { return table_; }
  const Schema& schema() const { return table_.schema(); }
  const std::vector<Row>& rows() const { return table_.rows(); }
  size_t size() const { return table_.size(); }

  size_t CountDistinctOrigins() const;

 private:
  Table table_;
};

absl::StatusOr<SplitTable> UnitSplit(const Table& table,
                                     const SplitThresholds& thresholds);
absl::StatusOr<SplitTable> UnitSplitGrouped(const Table& table,
                                            const GroupedThresholds& grouped);
absl::StatusOr<SplitTable> UnitSplit(const Table& table,
                                     const ThresholdScheme& scheme);

}  // namespace przcdp

#endif  // PRZCDP_SPLITTING_H_
