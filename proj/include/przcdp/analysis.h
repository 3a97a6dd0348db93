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

// Error and loss metrics, the truncation MSE model for Pareto sums, and
// minimum budgets for fitness-for-use targets.

#ifndef PRZCDP_ANALYSIS_H_
#define PRZCDP_ANALYSIS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "przcdp/policy.h"
#include "przcdp/table.h"
#include "przcdp/workload.h"

namespace przcdp {

// |noisy - truth| / |truth|.
absl::StatusOr<double> Are(double noisy, double truth);

// sigma * Q((1 + gamma) / 2) / |truth|, the (1 - gamma) two-sided tail
// bound of N(0, sigma^2) noise relative to the truth.
absl::StatusOr<double> QueryRelativeError(double sigma, double truth,
                                          double gamma);

// Privacy loss actually incurred by one raw-table record: the sum over traced
// releases of (change in the released true value when all of the record's
// split rows are removed)^2 / (2 sigma^2).
absl::StatusOr<double> RealizedLoss(const RunTrace& trace, const Table& table,
                                    RowId row_id);
// Same for every row of `table`, in row order.
absl::StatusOr<std::vector<double>> RealizedLosses(const RunTrace& trace,
                                                   const Table& table);

// Empirical CDF as (value, cumulative fraction) steps, one per distinct value.
struct CdfSeries {
  std::vector<std::pair<double, double>> points;

  // Fraction of the sample at or below `x`.
  double FractionAtOrBelow(double x) const;
};

absl::StatusOr<CdfSeries> EmpiricalCdf(std::vector<double> values);
absl::StatusOr<CdfSeries> PolicyCdf(const PolicyFunction& policy,
                                    const Table& table);

// Share of rows whose policy loss exceeds PolicyMin(policy).
absl::StatusOr<double> ProportionAbovePolicyMin(const PolicyFunction& policy,
                                                const Table& table);

// Clamped-sum error model for n i.i.d. Pareto(1, alpha) summands released
// with Gaussian noise at sensitivity `delta`:
//   b   = delta^(1 - alpha) / (alpha - 1)          per-record clamping bias
//   MSE = (n b)^2 + n Var(min(X, delta)) + delta^2 / (2 rho)
// divided by E[S] = n alpha / (alpha - 1).
struct MseBreakdown {
  double bias_squared = 0;
  double sampling_variance = 0;
  double noise_variance = 0;
  double expected_sum = 0;

  double mse() const { return bias_squared + sampling_variance + noise_variance; }
  double ratio() const { return mse() / expected_sum; }
};

absl::StatusOr<MseBreakdown> TheoreticalMse(int64_t n, double alpha,
                                            double delta, double rho);
absl::StatusOr<double> TheoreticalMseRatio(int64_t n, double alpha,
                                           double delta, double rho);

// Minimizer of TheoreticalMseRatio over delta in [1, 1e12].
absl::StatusOr<double> OptimalDelta(int64_t n, double alpha, double rho);

// Smallest per-cell budgets meeting QueryRelativeError <= delta_target with
// probability gamma, and the per-record losses they imply.
struct FfuResult {
  double delta_target = 0;
  double gamma = 0;
  // Per query, encoded group key -> rho.
  std::vector<std::map<std::string, double>> cell_rho;
  std::vector<double> record_loss;  // in table row order
  CdfSeries cdf;
};

// COUNT and SUM queries only; AVG is UnsupportedKind. A partition stage, if
// present, is ignored.
absl::StatusOr<FfuResult> MinPolicyForFfu(const Workload& workload,
                                          const Table& table,
                                          double delta_target, double gamma);

// `workload` with each query's cell budgets set from `ffu`. The query-level
// budget becomes the largest cell budget.
Workload ApplyFfuBudgets(const Workload& workload, const FfuResult& ffu);

struct CellError {
  std::string query_id;
  std::string group_key;
  double true_value = 0;
  double noisy_value = 0;
  std::optional<double> are;  // unset for zero truths and missing answers
};

struct RecordLoss {
  RowId row_id = 0;
  double policy = 0;
  double realized = 0;
};

struct MetricReport {
  std::vector<CellError> cells;
  std::vector<RecordLoss> records;
  std::map<double, double> are_quantiles;  // probability -> ARE
  double proportion_above_min = 0;
};

absl::StatusOr<MetricReport> BuildMetricReport(const ExecutionResult& result,
                                               const Table& table);

// Linear-interpolated sample quantile (type 7); `values` need not be sorted.
double Quantile(std::vector<double> values, double probability);

}  // namespace przcdp

#endif  // PRZCDP_ANALYSIS_H_
