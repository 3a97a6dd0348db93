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

#include "przcdp/cli/commands.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <ostream>
#include <system_error>
#include <thread>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "przcdp/analysis.h"
#include "przcdp/cli/config.h"
#include "przcdp/csv.h"
#include "przcdp/splitting.h"
#include "przcdp/workload.h"

#ifndef PRZCDP_VERSION
#define PRZCDP_VERSION "0.0.0"
#endif

namespace przcdp::cli {
namespace {

// Relative slack for realized <= policy comparisons in double arithmetic.
constexpr double kLossSlack = 1e-12;

std::string Num(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return FormatNumber(v);
}

class CsvOut {
 public:
  CsvOut(uint64_t seed, csv::Record header)
      : text_(absl::StrCat("# ", ProvenanceComment(seed), "\n")) {
    Add(header);
  }
  void Add(const csv::Record& record) { text_ += csv::FormatRecord(record); }
  absl::Status Write(const std::filesystem::path& path) const {
    return csv::WriteFileAtomically(path, text_);
  }

 private:
  std::string text_;
};

struct Context {
  RunConfig config;
  std::filesystem::path out;
};

absl::StatusOr<Context> Prepare(const CommandOptions& options) {
  absl::StatusOr<RunConfig> config = LoadConfig(options.config);
  if (!config.ok()) return config.status();
  if (options.seed) config->seed = *options.seed;
  Context ctx;
  ctx.out = options.out ? *options.out : config->output_dir;
  ctx.config = *std::move(config);
  std::error_code ec;
  std::filesystem::create_directories(ctx.out, ec);
  if (ec) {
    return absl::InternalError(absl::StrCat(
        "IoError: cannot create ", ctx.out.string(), ": ", ec.message()));
  }
  return ctx;
}

void Log(const CommandOptions& options, const std::string& line) {
  if (options.log != nullptr) *options.log << line << "\n";
}

absl::StatusOr<ExecutionResult> RunWorkload(const Context& ctx,
                                            const Table& table,
                                            const CommandOptions& options) {
  ExecutionOptions exec;
  exec.add_noise = !options.no_noise;
  return Execute(ctx.config.workload, table, SeededRng(ctx.config.seed), exec);
}

csv::Record TraceHeader() {
  return {"query_id", "group_key", "true_value", "noisy_value",
          "delta",    "sigma",     "rho",        "raw_true_value"};
}

void AddTrace(CsvOut& out, const RunTrace& trace) {
  for (const TraceEntry& e : trace.entries) {
    out.Add({e.label, e.group_key, Num(e.true_value), Num(e.noisy_value),
             Num(e.delta), Num(e.sigma), Num(e.rho), Num(e.raw_true_value)});
  }
}

void AddAnswers(CsvOut& out, const std::vector<NoisyAnswer>& answers,
                const RunTrace& trace) {
  for (const NoisyAnswer& a : answers) {
    std::string delta = "", sigma = "";
    double rho = 0;
    for (size_t i : a.trace_entries) rho += trace.entries[i].rho;
    if (a.trace_entries.size() == 1) {
      const TraceEntry& e = trace.entries[a.trace_entries[0]];
      delta = Num(e.delta);
      sigma = Num(e.sigma);
    }
    out.Add({a.query_id, a.group_key, Num(a.true_value),
             a.missing ? "NA" : Num(a.value), delta, sigma, Num(rho)});
  }
}

csv::Record AnswerHeader() {
  return {"query_id", "group_key", "true_value", "noisy_value",
          "delta",    "sigma",     "rho"};
}

// Runs `task(i)` for i in [0, count) on up to `jobs` threads.
void ParallelFor(size_t count, int jobs,
                 const std::function<void(size_t)>& task) {
  const size_t workers =
      std::min<size_t>(count, static_cast<size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

std::string ProvenanceComment(uint64_t seed) {
  return absl::StrCat("przcdp ", PRZCDP_VERSION, " seed=", seed);
}

int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return 0;
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return 2;
    default:
      return 3;
  }
}

absl::Status CmdSplit(const CommandOptions& options) {
  absl::StatusOr<Context> ctx = Prepare(options);
  if (!ctx.ok()) return ctx.status();
  absl::StatusOr<Table> table = LoadTable(ctx->config);
  if (!table.ok()) return table.status();
  absl::StatusOr<SplitTable> split =
      UnitSplit(*table, ctx->config.workload.thresholds);
  if (!split.ok()) return split.status();
  CsvWriteOptions write;
  write.include_origin = true;
  write.comment = ProvenanceComment(ctx->config.seed);
  const std::filesystem::path path = ctx->out / "split.csv";
  if (absl::Status s = WriteCsv(path, split->table(), write); !s.ok()) {
    return s;
  }
  Log(options, absl::StrCat("split ", table->size(), " rows into ",
                            split->size(), " rows -> ", path.string()));
  return absl::OkStatus();
}

absl::Status CmdRun(const CommandOptions& options) {
  absl::StatusOr<Context> ctx = Prepare(options);
  if (!ctx.ok()) return ctx.status();
  absl::StatusOr<Table> table = LoadTable(ctx->config);
  if (!table.ok()) return table.status();
  absl::StatusOr<ExecutionResult> run = RunWorkload(*ctx, *table, options);
  if (!run.ok()) return run.status();

  const uint64_t seed = ctx->config.seed;
  CsvOut answers(seed, AnswerHeader());
  AddAnswers(answers, run->answers, run->trace);
  if (absl::Status s = answers.Write(ctx->out / "answers.csv"); !s.ok()) {
    return s;
  }
  CsvOut trace(seed, TraceHeader());
  AddTrace(trace, run->trace);
  if (absl::Status s = trace.Write(ctx->out / "trace.csv"); !s.ok()) return s;

  nlohmann::json policy = {{"version", kConfigVersion},
                           {"policy", ToJson(run->policy)},
                           {"description", Describe(run->policy)}};
  if (absl::Status s = csv::WriteFileAtomically(ctx->out / "policy.json",
                                                policy.dump(2) + "\n");
      !s.ok()) {
    return s;
  }
  Log(options, absl::StrCat("released ", run->answers.size(), " answers; ",
                            "policy P(r) = ", Describe(run->policy)));
  return absl::OkStatus();
}

absl::Status CmdBaseline(const CommandOptions& options) {
  absl::StatusOr<Context> ctx = Prepare(options);
  if (!ctx.ok()) return ctx.status();
  absl::StatusOr<Table> table = LoadTable(ctx->config);
  if (!table.ok()) return table.status();
  ExecutionOptions exec;
  exec.add_noise = !options.no_noise;
  absl::StatusOr<BaselineResult> run = ExecuteZcdpBaseline(
      ctx->config.workload, *table, SeededRng(ctx->config.seed), exec);
  if (!run.ok()) return run.status();
  const uint64_t seed = ctx->config.seed;
  CsvOut answers(seed, AnswerHeader());
  AddAnswers(answers, run->answers, run->trace);
  if (absl::Status s = answers.Write(ctx->out / "baseline_answers.csv");
      !s.ok()) {
    return s;
  }
  CsvOut trace(seed, TraceHeader());
  AddTrace(trace, run->trace);
  if (absl::Status s = trace.Write(ctx->out / "baseline_trace.csv"); !s.ok()) {
    return s;
  }
  Log(options, absl::StrCat("zCDP baseline: ", run->answers.size(),
                            " answers, total rho = ", Num(run->rho)));
  return absl::OkStatus();
}

absl::Status CmdSweep(const CommandOptions& options) {
  absl::StatusOr<Context> ctx = Prepare(options);
  if (!ctx.ok()) return ctx.status();
  const RunConfig& config = ctx->config;
  if (!config.sweep) {
    return absl::InvalidArgumentError("ConfigError: no \"sweep\" section");
  }
  absl::StatusOr<Table> table = LoadTable(config);
  if (!table.ok()) return table.status();
  const SweepConfig& sweep = *config.sweep;

  struct Point {
    double threshold = 0;
    double rho = 0;
    double prop_split = 0;
    std::vector<std::pair<std::string, double>> ares;
    CdfSeries cdf;
    absl::Status status;
  };
  const size_t nt = sweep.thresholds.size();
  std::vector<Point> points(nt * sweep.rhos.size());
  const SeededRng root = SeededRng(config.seed).Child("sweep");
  ExecutionOptions exec;
  exec.add_noise = !options.no_noise;

  ParallelFor(points.size(), options.jobs, [&](size_t k) {
    Point& p = points[k];
    const size_t ti = k % nt;
    const size_t ri = k / nt;
    p.threshold = sweep.thresholds[ti];
    p.rho = sweep.rhos[ri];
    Workload w = config.workload;
    w.thresholds =
        SweepThresholds(table->schema(), sweep.attribute, p.threshold);
    for (Query& q : w.queries) {
      q.rho = p.rho;
      q.cell_budgets.clear();
    }
    absl::StatusOr<ExecutionResult> run =
        Execute(w, *table, root.Child(ri).Child(ti), exec);
    if (!run.ok()) {
      p.status = run.status();
      return;
    }
    size_t split = 0;
    for (const Row& row : table->rows()) {
      if (*SplitCount(table->schema(), row, w.thresholds) > 1) ++split;
    }
    p.prop_split = table->empty() ? 0
                                  : static_cast<double>(split) /
                                        static_cast<double>(table->size());
    for (const NoisyAnswer& a : run->answers) {
      if (a.missing || a.true_value == 0) continue;
      p.ares.emplace_back(a.query_id, *Are(a.value, a.true_value));
    }
    absl::StatusOr<CdfSeries> cdf = PolicyCdf(run->policy, *table);
    if (!cdf.ok()) {
      p.status = cdf.status();
      return;
    }
    p.cdf = *std::move(cdf);
  });

  CsvOut are(config.seed, {"threshold", "rho", "prop_split", "query_id", "are"});
  CsvOut cdf(config.seed, {"scheme", "rho", "loss", "cum_frac"});
  for (const Point& p : points) {
    if (!p.status.ok()) return p.status;
    std::vector<double> values;
    for (const auto& [id, value] : p.ares) {
      are.Add({Num(p.threshold), Num(p.rho), Num(p.prop_split), id,
               Num(value)});
      values.push_back(value);
    }
    const std::string scheme = absl::StrCat("T=", Num(p.threshold));
    for (const auto& [loss, frac] : p.cdf.points) {
      cdf.Add({scheme, Num(p.rho), Num(loss), Num(frac)});
    }
    Log(options,
        absl::StrFormat("threshold=%s rho=%s prop_split=%.4f median_are=%.4f",
                        Num(p.threshold), Num(p.rho), p.prop_split,
                        Quantile(values, 0.5)));
  }
  if (absl::Status s = are.Write(ctx->out / "are_sweep.csv"); !s.ok()) return s;
  return cdf.Write(ctx->out / "policy_cdf.csv");
}

absl::Status CmdMseTheory(const CommandOptions& options) {
  absl::StatusOr<Context> ctx = Prepare(options);
  if (!ctx.ok()) return ctx.status();
  const RunConfig& config = ctx->config;
  if (!config.mse) {
    return absl::InvalidArgumentError("ConfigError: no \"mse_theory\" section");
  }
  const MseConfig& m = *config.mse;
  CsvOut out(config.seed, {"alpha", "rho", "delta", "ratio", "optimal"});
  const double lo = std::log(m.delta_min);
  const double hi = std::log(m.delta_max);
  for (double alpha : m.alphas) {
    for (double rho : m.rhos) {
      for (int i = 0; i < m.points; ++i) {
        const double delta = std::exp(lo + (hi - lo) * i / (m.points - 1));
        absl::StatusOr<double> ratio =
            TheoreticalMseRatio(m.n, alpha, delta, rho);
        if (!ratio.ok()) return ratio.status();
        out.Add({Num(alpha), Num(rho), Num(delta), Num(*ratio), "0"});
      }
      absl::StatusOr<double> best = OptimalDelta(m.n, alpha, rho);
      if (!best.ok()) return best.status();
      const double ratio = *TheoreticalMseRatio(m.n, alpha, *best, rho);
      out.Add({Num(alpha), Num(rho), Num(*best), Num(ratio), "1"});
      Log(options, absl::StrFormat(
                       "alpha=%g rho=%g optimal_delta=%.6g min_ratio=%.6g",
                       alpha, rho, *best, ratio));
    }
  }
  return out.Write(ctx->out / "mse_ratio.csv");
}

absl::Status CmdFfu(const CommandOptions& options) {
  absl::StatusOr<Context> ctx = Prepare(options);
  if (!ctx.ok()) return ctx.status();
  const RunConfig& config = ctx->config;
  if (!config.ffu) {
    return absl::InvalidArgumentError("ConfigError: no \"ffu\" section");
  }
  absl::StatusOr<Table> table = LoadTable(config);
  if (!table.ok()) return table.status();
  CsvOut cdf(config.seed, {"delta_target", "loss", "cum_frac"});
  CsvOut budgets(config.seed, {"delta_target", "query_id", "group_key", "rho"});
  for (double delta : config.ffu->deltas) {
    absl::StatusOr<FfuResult> ffu =
        MinPolicyForFfu(config.workload, *table, delta, config.ffu->gamma);
    if (!ffu.ok()) return ffu.status();
    for (const auto& [loss, frac] : ffu->cdf.points) {
      cdf.Add({Num(delta), Num(loss), Num(frac)});
    }
    for (size_t q = 0; q < ffu->cell_rho.size(); ++q) {
      for (const auto& [cell, rho] : ffu->cell_rho[q]) {
        budgets.Add({Num(delta), config.workload.queries[q].id, cell, Num(rho)});
      }
    }
    Log(options, absl::StrFormat(
                     "delta=%g median_min_loss=%.6g max_min_loss=%.6g", delta,
                     Quantile(ffu->record_loss, 0.5),
                     *std::max_element(ffu->record_loss.begin(),
                                       ffu->record_loss.end())));
  }
  if (absl::Status s = budgets.Write(ctx->out / "ffu_budgets.csv"); !s.ok()) {
    return s;
  }
  return cdf.Write(ctx->out / "ffu_cdf.csv");
}

absl::Status CmdMetrics(const CommandOptions& options) {
  absl::StatusOr<Context> ctx = Prepare(options);
  if (!ctx.ok()) return ctx.status();
  absl::StatusOr<Table> table = LoadTable(ctx->config);
  if (!table.ok()) return table.status();
  absl::StatusOr<ExecutionResult> run = RunWorkload(*ctx, *table, options);
  if (!run.ok()) return run.status();
  absl::StatusOr<MetricReport> report = BuildMetricReport(*run, *table);
  if (!report.ok()) return report.status();

  const uint64_t seed = ctx->config.seed;
  CsvOut cells(seed, {"query_id", "group_key", "true_value", "noisy_value",
                      "are"});
  for (const CellError& c : report->cells) {
    cells.Add({c.query_id, c.group_key, Num(c.true_value),
               Num(c.noisy_value), c.are ? Num(*c.are) : "NA"});
  }
  CsvOut records(seed, {"row_id", "policy", "realized"});
  std::vector<double> policy, realized;
  size_t violations = 0;
  for (const RecordLoss& r : report->records) {
    records.Add({absl::StrCat(r.row_id), Num(r.policy), Num(r.realized)});
    policy.push_back(r.policy);
    realized.push_back(r.realized);
    if (r.realized > r.policy * (1 + kLossSlack)) ++violations;
  }
  CsvOut cdf(seed, {"kind", "loss", "cum_frac"});
  if (!table->empty()) {
    for (const auto& [kind, values] :
         {std::pair{"policy", &policy}, std::pair{"realized", &realized}}) {
      for (const auto& [loss, frac] : EmpiricalCdf(*values)->points) {
        cdf.Add({kind, Num(loss), Num(frac)});
      }
    }
  }
  if (absl::Status s = cells.Write(ctx->out / "metrics_cells.csv"); !s.ok()) {
    return s;
  }
  if (absl::Status s = records.Write(ctx->out / "metrics_records.csv");
      !s.ok()) {
    return s;
  }
  if (absl::Status s = cdf.Write(ctx->out / "realized_cdf.csv"); !s.ok()) {
    return s;
  }
  Log(options,
      absl::StrFormat("median_are=%.6g prop_above_policy_min=%.6g "
                      "realized_exceeds_policy=%d",
                      report->are_quantiles[0.5], report->proportion_above_min,
                      violations));
  if (violations > 0) {
    return absl::InternalError(absl::StrCat(
        "RealizedExceedsPolicy: ", violations, " records"));
  }
  return absl::OkStatus();
}

}  // namespace przcdp::cli
