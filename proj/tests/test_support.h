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

// Fixtures and brute-force oracles shared by the tests. The oracles work on
// the raw table only and never call into the splitting or workload code.

#ifndef PRZCDP_TESTS_TEST_SUPPORT_H_
#define PRZCDP_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "przcdp/table.h"
#include "przcdp/workload.h"

namespace przcdp::testing {

inline std::filesystem::path SourcePath(const std::string& relative) {
  return std::filesystem::path(PRZCDP_SOURCE_DIR) / relative;
}

inline std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::filesystem::path FreshDir(const std::string& name) {
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() / ("przcdp_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline Schema MakeSchema(
    const std::vector<std::pair<std::string, AttributeKind>>& columns) {
  std::vector<Attribute> attributes;
  for (const auto& [name, kind] : columns) attributes.push_back({name, kind});
  return *Schema::Create(std::move(attributes));
}

// Industry / Employees / Payroll, five establishments.
inline Table Table2a() {
  Schema schema = MakeSchema({{"Industry", AttributeKind::kConditional},
                              {"Employees", AttributeKind::kMeasure},
                              {"Payroll", AttributeKind::kMeasure}});
  auto row = [](RowId id, std::string industry, double emp, double pay) {
    return Row{id, id, {std::move(industry)}, {emp, pay}};
  };
  return Table(schema, {row(1, "Agriculture", 150, 10000000),
                        row(2, "Agriculture", 50, 15000000),
                        row(3, "Mining", 100, 10000000),
                        row(4, "Mining", 50, 10000000),
                        row(5, "Retail", 20, 1000000)});
}

// Two conditional attributes (G, H) and two measures (M1, M2) with small
// integer values and an occasional large outlier.
inline Schema RandomSchema() {
  return MakeSchema({{"G", AttributeKind::kConditional},
                     {"H", AttributeKind::kConditional},
                     {"M1", AttributeKind::kMeasure},
                     {"M2", AttributeKind::kMeasure}});
}

inline Table RandomTable(std::mt19937_64& engine, int rows) {
  std::uniform_int_distribution<int> g(0, 3);
  std::uniform_int_distribution<int> h(0, 1);
  std::uniform_int_distribution<int> small(0, 60);
  std::uniform_int_distribution<int> large(100, 5000);
  std::bernoulli_distribution outlier(0.2);
  std::vector<Row> out;
  for (int i = 0; i < rows; ++i) {
    Row row;
    row.row_id = row.origin_row_id = static_cast<RowId>(i + 1);
    row.labels = {std::string(1, static_cast<char>('a' + g(engine))),
                  h(engine) ? "x" : "y"};
    for (int k = 0; k < 2; ++k) {
      row.measures.push_back(outlier(engine) ? large(engine) : small(engine));
    }
    out.push_back(std::move(row));
  }
  return Table(RandomSchema(), std::move(out));
}

// Smallest m >= 1 with m * cap >= value for every measure.
inline int64_t OracleSplitCount(const std::vector<double>& values,
                                const std::vector<double>& caps) {
  int64_t m = 1;
  for (size_t i = 0; i < values.size(); ++i) {
    if (std::isinf(caps[i])) continue;
    int64_t k = std::max<int64_t>(1, static_cast<int64_t>(values[i] / caps[i]));
    while (static_cast<double>(k) * caps[i] < values[i]) ++k;
    while (k > 1 && static_cast<double>(k - 1) * caps[i] >= values[i]) --k;
    m = std::max(m, k);
  }
  return m;
}

// Raw-table answers keyed by encoded group key: COUNT, SUM or AVG.
inline std::map<std::string, double> OracleAnswers(const Table& table,
                                                   const Query& query) {
  const Schema& schema = table.schema();
  std::map<std::string, std::pair<double, double>> acc;  // sum, count
  for (const Row& row : table.rows()) {
    bool keep = true;
    for (const Filter& f : query.filters) {
      const std::string& label = LabelOf(schema, row, f.attribute);
      bool hit = false;
      for (const std::string& v : f.values) hit = hit || v == label;
      keep = keep && hit;
    }
    if (!keep) continue;
    GroupKey key;
    for (const std::string& g : query.group_by) {
      key.push_back(LabelOf(schema, row, g));
    }
    auto& [sum, count] = acc[EncodeGroupKey(key)];
    if (!query.attribute.empty()) sum += MeasureOf(schema, row, query.attribute);
    count += 1;
  }
  std::map<std::string, double> out;
  for (const auto& [key, sc] : acc) {
    switch (query.kind) {
      case QueryKind::kCount:
      case QueryKind::kCountDistinct:
        out[key] = sc.second;
        break;
      case QueryKind::kSum:
        out[key] = sc.first;
        break;
      case QueryKind::kAvg:
        out[key] = sc.first / sc.second;
        break;
    }
  }
  return out;
}

}  // namespace przcdp::testing

#endif  // PRZCDP_TESTS_TEST_SUPPORT_H_
