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

#ifndef PRZCDP_TABLE_H_
#define PRZCDP_TABLE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace przcdp {

// Conditional attributes are grouped and filtered on and are duplicated
// across split rows; measure attributes are aggregated and divided across
// split rows.
enum class AttributeKind { kConditional, kMeasure };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::kConditional;
};

inline constexpr std::string_view kRowIdColumn = "ROW_ID";
inline constexpr std::string_view kOriginRowIdColumn = "ORIGIN_ROW_ID";

using RowId = uint64_t;

// Ordered attribute list with name lookup. Attribute names are unique and may
// not collide with the reserved id columns.
class Schema {
 public:
  Schema() = default;

  static absl::StatusOr<Schema> Create(std::vector<Attribute> attributes);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  const std::vector<std::string>& conditional_names() const {
    return conditional_names_;
  }
  const std::vector<std::string>& measure_names() const {
    return measure_names_;
  }

  // Position of the attribute among attributes of the same kind.
  std::optional<size_t> ConditionalIndex(std::string_view name) const;
  std::optional<size_t> MeasureIndex(std::string_view name) const;

  bool IsConditional(std::string_view name) const {
    return ConditionalIndex(name).has_value();
  }
  bool IsMeasure(std::string_view name) const {
    return MeasureIndex(name).has_value();
  }
  bool Contains(std::string_view name) const {
    return IsConditional(name) || IsMeasure(name);
  }

  friend bool operator==(const Schema& a, const Schema& b);

 private:
  std::vector<Attribute> attributes_;
  std::vector<std::string> conditional_names_;
  std::vector<std::string> measure_names_;
  std::unordered_map<std::string, size_t> conditional_index_;
  std::unordered_map<std::string, size_t> measure_index_;
};

// One tuple. Values are stored by kind in schema order. For rows of a split
// table `origin_row_id` names the source row; otherwise it equals `row_id`.
struct Row {
  RowId row_id = 0;
  RowId origin_row_id = 0;
  std::vector<std::string> labels;
  std::vector<double> measures;

  friend bool operator==(const Row&, const Row&) = default;
};

// Multiset of rows over one schema. Immutable once built.
class Table {
 public:
  Table() = default;
  Table(Schema schema, std::vector<Row> rows)
      : schema_(std::move(schema)), rows_(std::move(rows)) {}

  const Schema& schema() const { return schema_; }
  const std::vector<Row>& rows() const { return rows_; }
  size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  // Linear scan by row_id.
  const Row* FindRow(RowId id) const;

 private:
  Schema schema_;
  std::vector<Row> rows_;
};

struct Violation {
  RowId row_id = 0;
  std::string column;
  std::string message;
};

// Every invariant violation in the table; empty means the table is valid.
std::vector<Violation> Validate(const Table& table);

// Label of `row` for a conditional attribute; the caller guarantees the name
// is a conditional attribute of `schema`.
const std::string& LabelOf(const Schema& schema, const Row& row,
                           std::string_view attribute);
double MeasureOf(const Schema& schema, const Row& row,
                 std::string_view attribute);

// Group keys are tuples of conditional labels. The string form joins labels
// with '|' and backslash-escapes '|' and '\' so distinct tuples never collide.
using GroupKey = std::vector<std::string>;
std::string EncodeGroupKey(const GroupKey& key);
GroupKey GroupKeyOf(const Schema& schema, const Row& row,
                    const std::vector<std::string>& attributes);

// CSV ingestion. The header must name every schema attribute (any order) and
// may add ROW_ID and, for split tables, ORIGIN_ROW_ID. Leading lines starting
// with '#' are provenance comments and are skipped. Missing ROW_ID columns are
// filled with 1, 2, ... in file order.
absl::StatusOr<Table> ParseCsv(std::string_view text, const Schema& schema);
absl::StatusOr<Table> LoadCsv(const std::filesystem::path& path,
                              const Schema& schema);

struct CsvWriteOptions {
  bool include_origin = false;
  // Written verbatim as a '#'-prefixed first line when non-empty.
  std::string comment;
};

std::string FormatCsv(const Table& table, const CsvWriteOptions& options = {});
absl::Status WriteCsv(const std::filesystem::path& path, const Table& table,
                      const CsvWriteOptions& options = {});

// Shortest decimal form that parses back to the same double, never in
// exponent notation ("5000000", "0.1").
std::string FormatNumber(double value);

}  // namespace przcdp

#endif  // PRZCDP_TABLE_H_
