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

// Synthetic skewed tables.

#ifndef PRZCDP_GENERATORS_H_
#define PRZCDP_GENERATORS_H_

#include <cstdint>
#include <random>
#include <vector>

#include "absl/status/statusor.h"
#include "przcdp/rng.h"
#include "przcdp/table.h"

namespace przcdp {

inline constexpr int kSimCategories = 1000;

// CatIX (conditional, labels "1".."1000"), HT1, HT2 (measures).
Schema SimSchema();

// weight(k) proportional to k^-exponent for k = 1..count.
std::vector<double> ZipfWeights(int count, double exponent);

// Pareto(scale, shape) by inverse CDF: scale * U^(-1/shape), U in (0, 1].
double SamplePareto(std::mt19937_64& engine, double scale, double shape);

struct SimParams {
  // Empty means Zipf(1) over kSimCategories categories.
  std::vector<double> category_weights;
  double ht1_shape = 1.2;
  double ht2_shape = 1.5;
};

// BadWeights when weights are not kSimCategories finite non-negative values
// with a positive total.
absl::StatusOr<Table> GenSimData(int64_t n, const SeededRng& rng,
                                 const SimParams& params = {});

// County and NAICS (conditional); EMP, PAYANN, PAYQTR1 (measures).
Schema BusinessSchema();

// Log-normal bodies with an optional Pareto tail multiplier. Defaults are
// tuned so the split thresholds of the "Median" preset sit near the medians.
struct BusinessParams {
  int counties = 50;
  int industries = 20;  // at most 20 two-digit sectors
  double key_zipf_exponent = 1.0;
  double emp_log_mean = 0.84;
  double emp_log_sd = 1.95;
  double payann_log_mean = 4.64;
  double payann_log_sd = 1.96;
  double correlation = 0.9;  // between log EMP and log PAYANN
  double qtr_ratio = 0.24;   // PAYQTR1 / PAYANN on the median
  double qtr_log_sd = 0.3;
  double tail_fraction = 0.0;
  double tail_shape = 1.5;
};

// BadParams for non-positive spreads, |correlation| > 1, and similar.
absl::StatusOr<Table> GenBusinessData(int64_t n, const SeededRng& rng,
                                      const BusinessParams& params = {});

}  // namespace przcdp

#endif  // PRZCDP_GENERATORS_H_
