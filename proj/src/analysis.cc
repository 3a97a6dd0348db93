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

#include "przcdp/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/tools/minima.hpp>

#include "absl/strings/str_cat.h"
#include "przcdp/splitting.h"

namespace przcdp {
namespace {

constexpr double kMinDelta = 1;
constexpr double kMaxDelta = 1e12;
constexpr int kDeltaGrid = 240;

absl::Status Invalid(absl::string_view kind, absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat(kind, ": ", message));
}

double NormalQuantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

absl::Status CheckMseInputs(int64_t n, double alpha, double rho) {
  if (!(alpha > 1) || !std::isfinite(alpha)) {
    return Invalid("BadTailIndex", absl::StrCat("alpha = ", alpha));
  }
  if (n < 1) return Invalid("NonpositiveInput", absl::StrCat("n = ", n));
  if (!(rho > 0) || !std::isfinite(rho)) {
    return Invalid("NonpositiveInput", absl::StrCat("rho = ", rho));
  }
  return absl::OkStatus();
}

// Trace entries by (query index, encoded group key).
using EntryIndex = std::map<std::pair<int, std::string>, std::vector<size_t>>;

EntryIndex IndexEntries(const RunTrace& trace) {
  EntryIndex index;
  for (size_t i = 0; i < trace.entries.size(); ++i) {
    const TraceEntry& e = trace.entries[i];
    index[{e.query_index, e.group_key}].push_back(i);
  }
  return index;
}

bool NeedsSplitCount(const RunTrace& trace) {
  for (const TraceEntry& e : trace.entries) {
    if (e.kind == TraceEntry::Kind::kPartitionCount) return true;
  }
  return false;
}

absl::StatusOr<double> RowRealizedLoss(const RunTrace& trace,
                                       const EntryIndex& index,
                                       const Schema& schema, const Row& row,
                                       bool needs_m) {
  const Workload& w = trace.workload;
  double m = 1;
  if (needs_m) {
    absl::StatusOr<int64_t> count = SplitCount(schema, row, w.thresholds);
    if (!count.ok()) return count.status();
    m = static_cast<double>(*count);
  }
  double loss = 0;
  auto add = [&](int query_index, const std::vector<std::string>& group_by,
                 const std::vector<Filter>& filters) {
    if (!PassesFilters(schema, row, filters)) return;
    auto it = index.find(
        {query_index, EncodeGroupKey(GroupKeyOf(schema, row, group_by))});
    if (it == index.end()) return;
    for (size_t i : it->second) {
      const TraceEntry& e = trace.entries[i];
      double change = 0;
      switch (e.kind) {
        case TraceEntry::Kind::kPartitionCount:
          change = m;
          break;
        case TraceEntry::Kind::kCount:
          change = 1;
          break;
        case TraceEntry::Kind::kSum: {
          const double v = MeasureOf(schema, row, e.attribute);
          change = e.clamp ? std::min(v, *e.clamp) : v;
          break;
        }
      }
      // c^2 / (2 sigma^2) with sigma^2 = delta^2 / (2 rho).
      const double ratio = change / e.delta;
      loss += e.rho * ratio * ratio;
    }
  };
  if (w.partition) add(-1, w.partition->group_by, {});
  for (size_t q = 0; q < w.queries.size(); ++q) {
    add(static_cast<int>(q), w.queries[q].group_by, w.queries[q].filters);
  }
  return loss;
}

}  // namespace

absl::StatusOr<double> Are(double noisy, double truth) {
  if (truth == 0) return Invalid("ZeroTruth", "relative error of a zero truth");
  return std::abs(noisy - truth) / std::abs(truth);
}

absl::StatusOr<double> QueryRelativeError(double sigma, double truth,
                                          double gamma) {
  if (truth == 0) return Invalid("ZeroTruth", "relative error of a zero truth");
  if (!(gamma > 0 && gamma < 1)) {
    return Invalid("BadGamma", absl::StrCat("gamma = ", gamma));
  }
  if (!(sigma >= 0)) {
    return Invalid("NonpositiveSigma", absl::StrCat("sigma = ", sigma));
  }
  if (sigma == 0) return 0.0;
  return sigma * NormalQuantile((1 + gamma) / 2) / std::abs(truth);
}

absl::StatusOr<double> RealizedLoss(const RunTrace& trace, const Table& table,
                                    RowId row_id) {
  const Row* row = table.FindRow(row_id);
  if (row == nullptr) {
    return absl::NotFoundError(
        absl::StrCat("UnknownRowId: no row with id ", row_id));
  }
  return RowRealizedLoss(trace, IndexEntries(trace), table.schema(), *row,
                         NeedsSplitCount(trace));
}

absl::StatusOr<std::vector<double>> RealizedLosses(const RunTrace& trace,
                                                   const Table& table) {
  const EntryIndex index = IndexEntries(trace);
  const bool needs_m = NeedsSplitCount(trace);
  std::vector<double> out;
  out.reserve(table.size());
  for (const Row& row : table.rows()) {
    absl::StatusOr<double> loss =
        RowRealizedLoss(trace, index, table.schema(), row, needs_m);
    if (!loss.ok()) return loss.status();
    out.push_back(*loss);
  }
  return out;
}

double CdfSeries::FractionAtOrBelow(double x) const {
  auto it = std::upper_bound(
      points.begin(), points.end(), x,
      [](double v, const std::pair<double, double>& p) { return v < p.first; });
  return it == points.begin() ? 0.0 : std::prev(it)->second;
}

absl::StatusOr<CdfSeries> EmpiricalCdf(std::vector<double> values) {
  if (values.empty()) return Invalid("EmptyTable", "no values");
  std::sort(values.begin(), values.end());
  CdfSeries out;
  const double n = static_cast<double>(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    out.points.emplace_back(values[i], static_cast<double>(i + 1) / n);
  }
  out.points.back().second = 1.0;
  return out;
}

absl::StatusOr<CdfSeries> PolicyCdf(const PolicyFunction& policy,
                                    const Table& table) {
  if (table.empty()) return Invalid("EmptyTable", "table has no rows");
  std::vector<double> losses;
  losses.reserve(table.size());
  for (const Row& row : table.rows()) {
    absl::StatusOr<double> loss = Evaluate(policy, table.schema(), row);
    if (!loss.ok()) return loss.status();
    losses.push_back(*loss);
  }
  return EmpiricalCdf(std::move(losses));
}

absl::StatusOr<double> ProportionAbovePolicyMin(const PolicyFunction& policy,
                                                const Table& table) {
  if (table.empty()) return Invalid("EmptyTable", "table has no rows");
  const double floor = PolicyMin(policy);
  size_t above = 0;
  for (const Row& row : table.rows()) {
    absl::StatusOr<double> loss = Evaluate(policy, table.schema(), row);
    if (!loss.ok()) return loss.status();
    if (*loss > floor) ++above;
  }
  return static_cast<double>(above) / static_cast<double>(table.size());
}

absl::StatusOr<MseBreakdown> TheoreticalMse(int64_t n, double alpha,
                                            double delta, double rho) {
  if (absl::Status s = CheckMseInputs(n, alpha, rho); !s.ok()) return s;
  if (!(delta >= 1) || !std::isfinite(delta)) {
    return Invalid("NonpositiveInput", absl::StrCat("delta = ", delta));
  }
  const double nn = static_cast<double>(n);
  const double tail = std::pow(delta, 1 - alpha);  // P(X > delta) * delta
  const double bias = tail / (alpha - 1);
  const double mean = alpha / (alpha - 1);
  const double clamped_mean = mean - bias;
  const double d2a = std::pow(delta, 2 - alpha);
  const double clamped_second =
      alpha == 2 ? alpha * std::log(delta) + 1
                 : alpha / (2 - alpha) * (d2a - 1) + d2a;
  MseBreakdown out;
  out.bias_squared = (nn * bias) * (nn * bias);
  out.sampling_variance =
      nn * std::max(0.0, clamped_second - clamped_mean * clamped_mean);
  out.noise_variance = delta * delta / (2 * rho);
  out.expected_sum = nn * mean;
  return out;
}

absl::StatusOr<double> TheoreticalMseRatio(int64_t n, double alpha,
                                           double delta, double rho) {
  absl::StatusOr<MseBreakdown> mse = TheoreticalMse(n, alpha, delta, rho);
  if (!mse.ok()) return mse.status();
  return mse->ratio();
}

absl::StatusOr<double> OptimalDelta(int64_t n, double alpha, double rho) {
  if (absl::Status s = CheckMseInputs(n, alpha, rho); !s.ok()) return s;
  auto objective = [&](double log_delta) {
    return std::log(
        TheoreticalMse(n, alpha, std::exp(log_delta), rho)->ratio());
  };
  const double lo = std::log(kMinDelta);
  const double hi = std::log(kMaxDelta);
  const double step = (hi - lo) / kDeltaGrid;
  int best = 0;
  double best_value = objective(lo);
  for (int i = 1; i <= kDeltaGrid; ++i) {
    const double v = objective(lo + step * i);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = std::max(lo, lo + step * (best - 1));
  const double b = std::min(hi, lo + step * (best + 1));
  constexpr int kBits = std::numeric_limits<double>::digits / 2;
  std::pair<double, double> found =
      boost::math::tools::brent_find_minima(objective, a, b, kBits);
  return std::exp(found.second <= best_value ? found.first
                                             : lo + step * best);
}

absl::StatusOr<FfuResult> MinPolicyForFfu(const Workload& workload,
                                          const Table& table,
                                          double delta_target, double gamma) {
  if (!(gamma > 0 && gamma < 1)) {
    return Invalid("BadGamma", absl::StrCat("gamma = ", gamma));
  }
  if (!(delta_target > 0) || !std::isfinite(delta_target)) {
    return Invalid("NonpositiveInput",
                   absl::StrCat("delta_target = ", delta_target));
  }
  Workload plain = workload;
  plain.partition.reset();
  for (const Query& q : plain.queries) {
    if (q.kind == QueryKind::kAvg) {
      return Invalid("UnsupportedKind",
                     absl::StrCat("AVG query '", q.id,
                                  "' has no single-release budget"));
    }
  }
  ExecutionOptions exact;
  exact.add_noise = false;
  absl::StatusOr<ExecutionResult> run =
      Execute(plain, table, SeededRng(0), exact);
  if (!run.ok()) return run.status();

  const double z = NormalQuantile((1 + gamma) / 2);
  FfuResult out;
  out.delta_target = delta_target;
  out.gamma = gamma;
  out.cell_rho.resize(plain.queries.size());
  for (const TraceEntry& e : run->trace.entries) {
    if (e.true_value == 0) {
      return Invalid("ZeroTruth",
                     absl::StrCat("query '", plain.queries[e.query_index].id,
                                  "' cell '", e.group_key, "' is zero"));
    }
    // rho = Delta^2 z^2 / (2 delta^2 S^2); the delta-free factor is formed
    // first so that scaling delta by 2 scales rho by exactly 1/4.
    const double scale = e.delta * z / e.true_value;
    const double unit = scale * scale / 2;
    out.cell_rho[e.query_index][e.group_key] =
        unit / (delta_target * delta_target);
  }

  const Schema& schema = table.schema();
  bool any_post = false;
  for (const Query& q : plain.queries) {
    any_post |= q.formalism == Formalism::kPrzcdpPostsplit;
  }
  out.record_loss.reserve(table.size());
  for (const Row& row : table.rows()) {
    double m = 1;
    if (any_post) {
      absl::StatusOr<int64_t> count =
          SplitCount(schema, row, plain.thresholds);
      if (!count.ok()) return count.status();
      m = static_cast<double>(*count);
    }
    double loss = 0;
    for (size_t i = 0; i < plain.queries.size(); ++i) {
      const Query& q = plain.queries[i];
      if (!PassesFilters(schema, row, q.filters)) continue;
      auto it = out.cell_rho[i].find(
          EncodeGroupKey(GroupKeyOf(schema, row, q.group_by)));
      if (it == out.cell_rho[i].end()) continue;
      const bool scaled = q.formalism == Formalism::kPrzcdpPostsplit &&
                          q.kind == QueryKind::kSum;
      loss += scaled ? m * m * it->second : it->second;
    }
    out.record_loss.push_back(loss);
  }
  absl::StatusOr<CdfSeries> cdf = EmpiricalCdf(out.record_loss);
  if (!cdf.ok()) return cdf.status();
  out.cdf = *std::move(cdf);
  return out;
}

Workload ApplyFfuBudgets(const Workload& workload, const FfuResult& ffu) {
  Workload out = workload;
  for (size_t i = 0; i < out.queries.size() && i < ffu.cell_rho.size(); ++i) {
    Query& q = out.queries[i];
    q.cell_budgets = ffu.cell_rho[i];
    double most = 0;
    for (const auto& [cell, rho] : q.cell_budgets) most = std::max(most, rho);
    if (most > 0) q.rho = most;
  }
  return out;
}

double Quantile(std::vector<double> values, double probability) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1) * probability;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

absl::StatusOr<MetricReport> BuildMetricReport(const ExecutionResult& result,
                                               const Table& table) {
  MetricReport report;
  std::vector<double> ares;
  for (const NoisyAnswer& a : result.answers) {
    CellError cell;
    cell.query_id = a.query_id;
    cell.group_key = a.group_key;
    cell.true_value = a.true_value;
    cell.noisy_value = a.value;
    if (!a.missing && a.true_value != 0) {
      cell.are = *Are(a.value, a.true_value);
      ares.push_back(*cell.are);
    }
    report.cells.push_back(std::move(cell));
  }
  for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    report.are_quantiles[p] = Quantile(ares, p);
  }
  absl::StatusOr<std::vector<double>> realized =
      RealizedLosses(result.trace, table);
  if (!realized.ok()) return realized.status();
  for (size_t i = 0; i < table.size(); ++i) {
    const Row& row = table.rows()[i];
    absl::StatusOr<double> policy =
        Evaluate(result.policy, table.schema(), row);
    if (!policy.ok()) return policy.status();
    report.records.push_back({row.row_id, *policy, (*realized)[i]});
  }
  if (!table.empty()) {
    absl::StatusOr<double> above =
        ProportionAbovePolicyMin(result.policy, table);
    if (!above.ok()) return above.status();
    report.proportion_above_min = *above;
  }
  return report;
}

}  // namespace przcdp
