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

#include "przcdp/table.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "przcdp/csv.h"

namespace przcdp {

absl::StatusOr<Schema> Schema::Create(std::vector<Attribute> attributes) {
  Schema schema;
  std::unordered_set<std::string> seen;
  for (const Attribute& attribute : attributes) {
    if (attribute.name.empty()) {
      return absl::InvalidArgumentError("attribute names must be non-empty");
    }
    if (attribute.name == kRowIdColumn || attribute.name == kOriginRowIdColumn) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute name '", attribute.name, "' is reserved"));
    }
    if (!seen.insert(attribute.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("DuplicateAttribute: '", attribute.name, "'"));
    }
    if (attribute.kind == AttributeKind::kConditional) {
      schema.conditional_index_[attribute.name] =
          schema.conditional_names_.size();
      schema.conditional_names_.push_back(attribute.name);
    } else {
      schema.measure_index_[attribute.name] = schema.measure_names_.size();
      schema.measure_names_.push_back(attribute.name);
    }
  }
  schema.attributes_ = std::move(attributes);
  return schema;
}

std::optional<size_t> Schema::ConditionalIndex(std::string_view name) const {
  auto it = conditional_index_.find(std::string(name));
  if (it == conditional_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<size_t> Schema::MeasureIndex(std::string_view name) const {
  auto it = measure_index_.find(std::string(name));
  if (it == measure_index_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const Schema& a, const Schema& b) {
  if (a.attributes_.size() != b.attributes_.size()) return false;
  for (size_t i = 0; i < a.attributes_.size(); ++i) {
    if (a.attributes_[i].name != b.attributes_[i].name ||
        a.attributes_[i].kind != b.attributes_[i].kind) {
      return false;
    }
  }
  return true;
}

const Row* Table::FindRow(RowId id) const {
  for (const Row& row : rows_) {
    if (row.row_id == id) return &row;
  }
  return nullptr;
}

std::vector<Violation> Validate(const Table& table) {
  std::vector<Violation> violations;
  const Schema& schema = table.schema();
  std::unordered_set<RowId> ids;
  for (const Row& row : table.rows()) {
    if (!ids.insert(row.row_id).second) {
      violations.push_back({row.row_id, std::string(kRowIdColumn),
                            absl::StrCat("DuplicateRowId: ", row.row_id)});
    }
    if (row.labels.size() != schema.conditional_names().size() ||
        row.measures.size() != schema.measure_names().size()) {
      violations.push_back(
          {row.row_id, "", "ArityMismatch: row does not have one value per "
                           "attribute"});
      continue;
    }
    for (size_t m = 0; m < row.measures.size(); ++m) {
      const double v = row.measures[m];
      if (!std::isfinite(v)) {
        violations.push_back({row.row_id, schema.measure_names()[m],
                              "NonFiniteMeasure: value is NaN or infinite"});
      } else if (v < 0) {
        violations.push_back(
            {row.row_id, schema.measure_names()[m],
             absl::StrCat("NegativeMeasure: ", FormatNumber(v))});
      }
    }
  }
  return violations;
}

const std::string& LabelOf(const Schema& schema, const Row& row,
                           std::string_view attribute) {
  return row.labels[*schema.ConditionalIndex(attribute)];
}

double MeasureOf(const Schema& schema, const Row& row,
                 std::string_view attribute) {
  return row.measures[*schema.MeasureIndex(attribute)];
}

std::string EncodeGroupKey(const GroupKey& key) {
  std::string out;
  for (size_t i = 0; i < key.size(); ++i) {
    if (i > 0) out.push_back('|');
    for (char c : key[i]) {
      if (c == '|' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
  }
  return out;
}

GroupKey GroupKeyOf(const Schema& schema, const Row& row,
                    const std::vector<std::string>& attributes) {
  GroupKey key;
  key.reserve(attributes.size());
  for (const std::string& attribute : attributes) {
    key.push_back(LabelOf(schema, row, attribute));
  }
  return key;
}

namespace {

absl::StatusOr<double> ParseMeasure(const std::string& text, size_t line,
                                    const std::string& column) {
  double value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    return absl::InvalidArgumentError(
        absl::StrCat("ParseFailure: line ", line, ", column '", column,
                     "': '", text, "' is not a number"));
  }
  if (!std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("ParseFailure: line ", line, ", column '", column,
                     "': non-finite value '", text, "'"));
  }
  if (value < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("NegativeMeasure: line ", line, ", column '", column,
                     "': ", text));
  }
  return value;
}

absl::StatusOr<RowId> ParseRowId(const std::string& text, size_t line,
                                 std::string_view column) {
  RowId value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    return absl::InvalidArgumentError(
        absl::StrCat("ParseFailure: line ", line, ", column '", std::string(column),
                     "': '", text, "' is not an unsigned 64-bit id"));
  }
  return value;
}

}  // namespace

absl::StatusOr<Table> ParseCsv(std::string_view text, const Schema& schema) {
  // Skip a UTF-8 byte order mark and provenance comments.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  size_t comment_lines = 0;
  while (!text.empty() && text.front() == '#') {
    const size_t eol = text.find('\n');
    text = eol == std::string_view::npos ? std::string_view()
                                         : text.substr(eol + 1);
    ++comment_lines;
  }
  absl::StatusOr<std::vector<csv::Record>> records = csv::Parse(text);
  if (!records.ok()) return records.status();
  if (records->empty()) {
    return absl::InvalidArgumentError("MissingColumn: CSV has no header row");
  }
  const csv::Record& header = records->front();

  constexpr size_t kAbsent = std::numeric_limits<size_t>::max();
  size_t row_id_col = kAbsent;
  size_t origin_col = kAbsent;
  std::vector<size_t> label_cols(schema.conditional_names().size(), kAbsent);
  std::vector<size_t> measure_cols(schema.measure_names().size(), kAbsent);
  for (size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    size_t* slot = nullptr;
    if (name == kRowIdColumn) {
      slot = &row_id_col;
    } else if (name == kOriginRowIdColumn) {
      slot = &origin_col;
    } else if (auto i = schema.ConditionalIndex(name)) {
      slot = &label_cols[*i];
    } else if (auto m = schema.MeasureIndex(name)) {
      slot = &measure_cols[*m];
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("ParseFailure: unexpected column '", name, "'"));
    }
    if (*slot != kAbsent) {
      return absl::InvalidArgumentError(
          absl::StrCat("ParseFailure: column '", name, "' appears twice"));
    }
    *slot = c;
  }
  for (size_t i = 0; i < label_cols.size(); ++i) {
    if (label_cols[i] == kAbsent) {
      return absl::InvalidArgumentError(absl::StrCat(
          "MissingColumn: '", schema.conditional_names()[i], "'"));
    }
  }
  for (size_t m = 0; m < measure_cols.size(); ++m) {
    if (measure_cols[m] == kAbsent) {
      return absl::InvalidArgumentError(
          absl::StrCat("MissingColumn: '", schema.measure_names()[m], "'"));
    }
  }

  std::vector<Row> rows;
  rows.reserve(records->size() - 1);
  for (size_t r = 1; r < records->size(); ++r) {
    const csv::Record& record = (*records)[r];
    // Line numbers are 1-based and count skipped comments and the header.
    const size_t line = comment_lines + r + 1;
    if (record.size() != header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "ParseFailure: line ", line, " has ", record.size(),
          " fields, header has ", header.size()));
    }
    Row row;
    if (row_id_col != kAbsent) {
      absl::StatusOr<RowId> id =
          ParseRowId(record[row_id_col], line, kRowIdColumn);
      if (!id.ok()) return id.status();
      row.row_id = *id;
    } else {
      row.row_id = r;
    }
    if (origin_col != kAbsent) {
      absl::StatusOr<RowId> id =
          ParseRowId(record[origin_col], line, kOriginRowIdColumn);
      if (!id.ok()) return id.status();
      row.origin_row_id = *id;
    } else {
      row.origin_row_id = row.row_id;
    }
    row.labels.reserve(label_cols.size());
    for (size_t col : label_cols) row.labels.push_back(record[col]);
    row.measures.reserve(measure_cols.size());
    for (size_t m = 0; m < measure_cols.size(); ++m) {
      absl::StatusOr<double> value = ParseMeasure(
          record[measure_cols[m]], line, schema.measure_names()[m]);
      if (!value.ok()) return value.status();
      row.measures.push_back(*value);
    }
    rows.push_back(std::move(row));
  }

  Table table(schema, std::move(rows));
  std::vector<Violation> violations = Validate(table);
  if (!violations.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat(violations.front().message, " (row ",
                     violations.front().row_id, ")"));
  }
  return table;
}

absl::StatusOr<Table> LoadCsv(const std::filesystem::path& path,
                              const Schema& schema) {
  absl::StatusOr<std::string> text = csv::ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseCsv(*text, schema);
}

std::string FormatNumber(double value) {
  char buffer[400];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                 std::chars_format::fixed);
  if (ec != std::errc()) {
    // Only reachable for magnitudes beyond ~1e380, which are not finite.
    return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
  }
  return std::string(buffer, ptr);
}

std::string FormatCsv(const Table& table, const CsvWriteOptions& options) {
  const Schema& schema = table.schema();
  std::string out;
  if (!options.comment.empty()) out += absl::StrCat("# ", options.comment, "\n");

  csv::Record header;
  header.emplace_back(kRowIdColumn);
  if (options.include_origin) header.emplace_back(kOriginRowIdColumn);
  for (const Attribute& attribute : schema.attributes()) {
    header.push_back(attribute.name);
  }
  out += csv::FormatRecord(header);

  for (const Row& row : table.rows()) {
    csv::Record record;
    record.reserve(header.size());
    record.push_back(absl::StrCat(row.row_id));
    if (options.include_origin) {
      record.push_back(absl::StrCat(row.origin_row_id));
    }
    for (const Attribute& attribute : schema.attributes()) {
      if (attribute.kind == AttributeKind::kConditional) {
        record.push_back(LabelOf(schema, row, attribute.name));
      } else {
        record.push_back(FormatNumber(MeasureOf(schema, row, attribute.name)));
      }
    }
    out += csv::FormatRecord(record);
  }
  return out;
}

absl::Status WriteCsv(const std::filesystem::path& path, const Table& table,
                      const CsvWriteOptions& options) {
  return csv::WriteFileAtomically(path, FormatCsv(table, options));
}

}  // namespace przcdp
