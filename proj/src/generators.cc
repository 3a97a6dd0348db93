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

#include "przcdp/generators.h"

#include <array>
#include <cmath>
#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace przcdp {
namespace {

constexpr std::array<const char*, 20> kSectors = {
    "11", "21", "22", "23", "31", "42", "44", "48", "51", "52",
    "53", "54", "55", "56", "61", "62", "71", "72", "81", "92"};

absl::Status BadParams(absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat("BadParams: ", message));
}

bool Positive(double x) { return x > 0 && std::isfinite(x); }

}  // namespace

Schema SimSchema() {
  return *Schema::Create({{"CatIX", AttributeKind::kConditional},
                          {"HT1", AttributeKind::kMeasure},
                          {"HT2", AttributeKind::kMeasure}});
}

std::vector<double> ZipfWeights(int count, double exponent) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(std::max(count, 0)));
  for (int k = 1; k <= count; ++k) out.push_back(std::pow(k, -exponent));
  return out;
}

double SamplePareto(std::mt19937_64& engine, double scale, double shape) {
  // 1 - U with U in [0, 1) lies in (0, 1].
  const double u = 1.0 - std::generate_canonical<double, 64>(engine);
  return scale * std::pow(u, -1.0 / shape);
}

absl::StatusOr<Table> GenSimData(int64_t n, const SeededRng& rng,
                                 const SimParams& params) {
  if (n < 1) return BadParams(absl::StrCat("n = ", n));
  std::vector<double> weights = params.category_weights.empty()
                                    ? ZipfWeights(kSimCategories, 1.0)
                                    : params.category_weights;
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) {
      return absl::InvalidArgumentError(
          absl::StrCat("BadWeights: weight ", w, " is not finite and >= 0"));
    }
    total += w;
  }
  if (weights.size() != kSimCategories || !(total > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("BadWeights: need ", kSimCategories,
                     " weights with a positive total, got ", weights.size()));
  }
  if (!Positive(params.ht1_shape) || !Positive(params.ht2_shape)) {
    return BadParams("Pareto shapes must be positive");
  }

  std::mt19937_64 engine = rng.Child("sim").Engine();
  std::discrete_distribution<int> category(weights.begin(), weights.end());
  std::vector<Row> rows;
  rows.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    Row row;
    row.row_id = static_cast<RowId>(i + 1);
    row.origin_row_id = row.row_id;
    row.labels = {absl::StrCat(category(engine) + 1)};
    const double ht1 = SamplePareto(engine, 1, params.ht1_shape);
    const double ht2 = SamplePareto(engine, 1, params.ht2_shape);
    row.measures = {ht1, ht2};
    rows.push_back(std::move(row));
  }
  return Table(SimSchema(), std::move(rows));
}

Schema BusinessSchema() {
  return *Schema::Create({{"County", AttributeKind::kConditional},
                          {"NAICS", AttributeKind::kConditional},
                          {"EMP", AttributeKind::kMeasure},
                          {"PAYANN", AttributeKind::kMeasure},
                          {"PAYQTR1", AttributeKind::kMeasure}});
}

absl::StatusOr<Table> GenBusinessData(int64_t n, const SeededRng& rng,
                                      const BusinessParams& p) {
  if (n < 0) return BadParams(absl::StrCat("n = ", n));
  if (p.counties < 1) return BadParams("counties must be >= 1");
  if (p.industries < 1 || p.industries > static_cast<int>(kSectors.size())) {
    return BadParams("industries must be in [1, 20]");
  }
  if (!Positive(p.emp_log_sd) || !Positive(p.payann_log_sd) ||
      !(p.qtr_log_sd >= 0) || !Positive(p.qtr_ratio)) {
    return BadParams("spreads and ratios must be positive");
  }
  if (!std::isfinite(p.emp_log_mean) || !std::isfinite(p.payann_log_mean) ||
      !std::isfinite(p.key_zipf_exponent)) {
    return BadParams("location parameters must be finite");
  }
  if (!(std::abs(p.correlation) <= 1)) {
    return BadParams("correlation must be in [-1, 1]");
  }
  if (!(p.tail_fraction >= 0 && p.tail_fraction <= 1) ||
      !Positive(p.tail_shape)) {
    return BadParams("tail fraction must be in [0, 1], tail shape positive");
  }

  std::mt19937_64 engine = rng.Child("business").Engine();
  const std::vector<double> county_w =
      ZipfWeights(p.counties, p.key_zipf_exponent);
  const std::vector<double> sector_w =
      ZipfWeights(p.industries, p.key_zipf_exponent);
  std::discrete_distribution<int> county(county_w.begin(), county_w.end());
  std::discrete_distribution<int> sector(sector_w.begin(), sector_w.end());
  std::normal_distribution<double> z(0.0, 1.0);
  std::bernoulli_distribution heavy(p.tail_fraction);
  const double cross = std::sqrt(1 - p.correlation * p.correlation);

  std::vector<Row> rows;
  rows.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    const int c = county(engine);
    const int s = sector(engine);
    const double z1 = z(engine);
    const double z2 = z(engine);
    const double z3 = z(engine);
    const double boost = heavy(engine) ? SamplePareto(engine, 1, p.tail_shape)
                                       : 1.0;
    const double emp =
        std::floor(std::exp(p.emp_log_mean + p.emp_log_sd * z1) * boost);
    const double payann = std::round(
        std::exp(p.payann_log_mean +
                 p.payann_log_sd * (p.correlation * z1 + cross * z2)) *
        boost);
    const double payqtr =
        std::round(payann * p.qtr_ratio * std::exp(p.qtr_log_sd * z3));
    Row row;
    row.row_id = static_cast<RowId>(i + 1);
    row.origin_row_id = row.row_id;
    row.labels = {absl::StrFormat("C%03d", c + 1), kSectors[s]};
    row.measures = {emp, payann, payqtr};
    rows.push_back(std::move(row));
  }
  return Table(BusinessSchema(), std::move(rows));
}

}  // namespace przcdp
