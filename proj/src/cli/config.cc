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

#include "przcdp/cli/config.h"

#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "przcdp/csv.h"
#include "przcdp/policy.h"
#include "przcdp/presets.h"

namespace przcdp::cli {
namespace {

using nlohmann::json;

absl::Status ConfigError(absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat("ConfigError: ", message));
}

// A number, or one of the strings "inf" / "infinity".
absl::StatusOr<double> Number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") {
      return std::numeric_limits<double>::infinity();
    }
  }
  return ConfigError(absl::StrCat(where, " must be a number"));
}

absl::StatusOr<std::vector<double>> Numbers(const json& j,
                                            const std::string& where) {
  if (!j.is_array()) return ConfigError(absl::StrCat(where, " must be a list"));
  std::vector<double> out;
  for (const json& item : j) {
    absl::StatusOr<double> v = Number(item, where);
    if (!v.ok()) return v.status();
    out.push_back(*v);
  }
  return out;
}

absl::StatusOr<std::vector<std::string>> Strings(const json& j,
                                                 const std::string& where) {
  if (j.is_string()) return std::vector<std::string>{j.get<std::string>()};
  if (!j.is_array()) {
    return ConfigError(absl::StrCat(where, " must be a list of strings"));
  }
  std::vector<std::string> out;
  for (const json& item : j) {
    if (item.is_string()) {
      out.push_back(item.get<std::string>());
    } else if (item.is_number_integer()) {
      out.push_back(absl::StrCat(item.get<int64_t>()));
    } else {
      return ConfigError(absl::StrCat(where, " must be a list of strings"));
    }
  }
  return out;
}

absl::StatusOr<Schema> ParseSchema(const json& j) {
  if (!j.is_array()) return ConfigError("\"schema\" must be a list");
  std::vector<Attribute> attributes;
  for (const json& item : j) {
    if (!item.is_object() || !item.contains("name") ||
        !item["name"].is_string()) {
      return ConfigError("schema entries need a \"name\"");
    }
    Attribute a;
    a.name = item["name"].get<std::string>();
    const std::string kind = item.value("kind", "conditional");
    if (kind == "conditional") {
      a.kind = AttributeKind::kConditional;
    } else if (kind == "measure") {
      a.kind = AttributeKind::kMeasure;
    } else {
      return ConfigError(absl::StrCat("attribute kind '", kind, "'"));
    }
    attributes.push_back(std::move(a));
  }
  return Schema::Create(std::move(attributes));
}

absl::StatusOr<TableSource> ParseSource(const json& root,
                                        const std::filesystem::path& base) {
  TableSource source;
  if (root.contains("input")) {
    if (!root["input"].is_string()) {
      return ConfigError("\"input\" must be a path");
    }
    source.csv = base / root["input"].get<std::string>();
    return source;
  }
  const json& g = root["generator"];
  if (!g.is_object() || !g.contains("kind")) {
    return ConfigError("\"generator\" needs a \"kind\"");
  }
  source.generator = g["kind"].get<std::string>();
  source.n = g.value("n", int64_t{1000});
  if (g.contains("seed")) source.seed = g["seed"].get<uint64_t>();
  if (source.generator == "sim") {
    if (g.contains("zipf_exponent")) {
      source.sim.category_weights =
          ZipfWeights(kSimCategories, g["zipf_exponent"].get<double>());
    }
    if (g.contains("weights")) {
      absl::StatusOr<std::vector<double>> w = Numbers(g["weights"], "weights");
      if (!w.ok()) return w.status();
      source.sim.category_weights = *std::move(w);
    }
    source.sim.ht1_shape = g.value("ht1_shape", source.sim.ht1_shape);
    source.sim.ht2_shape = g.value("ht2_shape", source.sim.ht2_shape);
  } else if (source.generator == "business") {
    BusinessParams& p = source.business;
    p.counties = g.value("counties", p.counties);
    p.industries = g.value("industries", p.industries);
    p.key_zipf_exponent = g.value("key_zipf_exponent", p.key_zipf_exponent);
    p.emp_log_mean = g.value("emp_log_mean", p.emp_log_mean);
    p.emp_log_sd = g.value("emp_log_sd", p.emp_log_sd);
    p.payann_log_mean = g.value("payann_log_mean", p.payann_log_mean);
    p.payann_log_sd = g.value("payann_log_sd", p.payann_log_sd);
    p.correlation = g.value("correlation", p.correlation);
    p.qtr_ratio = g.value("qtr_ratio", p.qtr_ratio);
    p.qtr_log_sd = g.value("qtr_log_sd", p.qtr_log_sd);
    p.tail_fraction = g.value("tail_fraction", p.tail_fraction);
    p.tail_shape = g.value("tail_shape", p.tail_shape);
  } else {
    return ConfigError(
        absl::StrCat("unknown generator '", source.generator, "'"));
  }
  return source;
}

absl::StatusOr<Query> ParseQuery(const json& j) {
  if (!j.is_object()) return ConfigError("queries must be objects");
  Query q;
  q.id = j.value("id", "");
  absl::StatusOr<QueryKind> kind = ParseQueryKind(j.value("kind", "SUM"));
  if (!kind.ok()) return kind.status();
  q.kind = *kind;
  q.attribute = j.value("attribute", "");
  if (j.contains("group_by")) {
    absl::StatusOr<std::vector<std::string>> g =
        Strings(j["group_by"], "group_by");
    if (!g.ok()) return g.status();
    q.group_by = *std::move(g);
  }
  if (j.contains("filter")) {
    if (!j["filter"].is_object()) {
      return ConfigError("\"filter\" must map attributes to values");
    }
    for (const auto& [attribute, values] : j["filter"].items()) {
      absl::StatusOr<std::vector<std::string>> v = Strings(values, "filter");
      if (!v.ok()) return v.status();
      q.filters.push_back({attribute, *std::move(v)});
    }
  }
  absl::StatusOr<Formalism> formalism =
      ParseFormalism(j.value("formalism", "przcdp_postsplit"));
  if (!formalism.ok()) return formalism.status();
  q.formalism = *formalism;
  if (!j.contains("rho")) {
    return ConfigError(absl::StrCat("query '", q.id, "' needs \"rho\""));
  }
  absl::StatusOr<double> rho = Number(j["rho"], "rho");
  if (!rho.ok()) return rho.status();
  q.rho = *rho;
  if (j.contains("cell_budgets")) {
    for (const auto& [cell, value] : j["cell_budgets"].items()) {
      absl::StatusOr<double> r = Number(value, "cell_budgets");
      if (!r.ok()) return r.status();
      q.cell_budgets[cell] = *r;
    }
  }
  return q;
}

absl::StatusOr<std::map<std::string, double>> ParseCaps(const json& j,
                                                        bool top_codes) {
  if (j.is_object() && j.contains("preset")) {
    const std::string name = j["preset"].get<std::string>();
    if (top_codes) return TopCodePreset(name);
    absl::StatusOr<SplitThresholds> t = SplitPreset(name);
    if (!t.ok()) return t.status();
    return t->caps();
  }
  if (!j.is_object()) return ConfigError("caps must be an object");
  std::map<std::string, double> out;
  for (const auto& [name, value] : j.items()) {
    absl::StatusOr<double> v = Number(value, name);
    if (!v.ok()) return v.status();
    out[name] = *v;
  }
  return out;
}

absl::Status ParseWorkload(const json& root, RunConfig& config) {
  Workload& w = config.workload;
  if (root.contains("thresholds")) {
    const json& t = root["thresholds"];
    if (t.is_object() && t.contains("preset")) {
      config.scheme_label = t["preset"].get<std::string>();
      absl::StatusOr<std::map<std::string, double>> caps = ParseCaps(t, false);
      if (!caps.ok()) return caps.status();
      w.thresholds = SplitThresholds(*std::move(caps));
    } else {
      absl::StatusOr<ThresholdScheme> scheme = ThresholdSchemeFromJson(t);
      if (!scheme.ok()) return ConfigError(scheme.status().message());
      w.thresholds = *std::move(scheme);
    }
  }
  if (root.contains("top_codes")) {
    absl::StatusOr<std::map<std::string, double>> caps =
        ParseCaps(root["top_codes"], true);
    if (!caps.ok()) return caps.status();
    w.top_codes = *std::move(caps);
  }
  if (root.contains("partition")) {
    const json& p = root["partition"];
    PartitionStage stage;
    absl::StatusOr<std::vector<std::string>> g =
        Strings(p.value("group_by", json::array()), "partition.group_by");
    if (!g.ok()) return g.status();
    stage.group_by = *std::move(g);
    if (p.contains("rho")) {
      // sigma such that the selection costs rho per unsplit record.
      const double rho = p["rho"].get<double>();
      stage.sigma = rho > 0 ? 1 / std::sqrt(2 * rho) : 0;
    } else {
      stage.sigma = p.value("sigma", 0.0);
    }
    stage.tau = p.value("tau", 0.0);
    w.partition = std::move(stage);
  }
  if (root.contains("queries")) {
    if (!root["queries"].is_array()) {
      return ConfigError("\"queries\" must be a list");
    }
    for (const json& item : root["queries"]) {
      absl::StatusOr<Query> q = ParseQuery(item);
      if (!q.ok()) return q.status();
      w.queries.push_back(*std::move(q));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<RunConfig> ParseConfig(const json& root,
                                      const std::filesystem::path& base_dir) {
  if (!root.is_object()) return ConfigError("top level must be an object");
  if (root.value("version", 0) != kConfigVersion) {
    return ConfigError(
        absl::StrCat("unsupported config version; expected ", kConfigVersion));
  }
  RunConfig config;
  config.base_dir = base_dir;
  try {
    config.seed = root.value("seed", uint64_t{0});
    config.output_dir = base_dir / root.value("output", std::string("out"));
    if (root.contains("schema")) {
      absl::StatusOr<Schema> schema = ParseSchema(root["schema"]);
      if (!schema.ok()) return schema.status();
      config.schema = *std::move(schema);
    }
    if (root.contains("input") || root.contains("generator")) {
      absl::StatusOr<TableSource> source = ParseSource(root, base_dir);
      if (!source.ok()) return source.status();
      config.source = *std::move(source);
      if (!config.schema && !config.source->generator.empty()) {
        config.schema = config.source->generator == "sim" ? SimSchema()
                                                          : BusinessSchema();
      }
      if (!config.schema) {
        return ConfigError("a CSV input needs a \"schema\"");
      }
    }
    if (absl::Status s = ParseWorkload(root, config); !s.ok()) return s;
    if (config.scheme_label.empty()) {
      config.scheme_label = root.value("scheme", std::string("custom"));
    }

    if (root.contains("sweep")) {
      const json& s = root["sweep"];
      SweepConfig sweep;
      sweep.attribute = s.value("attribute", "");
      absl::StatusOr<std::vector<double>> t =
          Numbers(s.value("thresholds", json::array()), "sweep.thresholds");
      if (!t.ok()) return t.status();
      sweep.thresholds = *std::move(t);
      absl::StatusOr<std::vector<double>> r =
          Numbers(s.value("rhos", json::array()), "sweep.rhos");
      if (!r.ok()) return r.status();
      sweep.rhos = *std::move(r);
      if (sweep.attribute.empty() || sweep.thresholds.empty() ||
          sweep.rhos.empty()) {
        return ConfigError(
            "\"sweep\" needs \"attribute\", \"thresholds\" and \"rhos\"");
      }
      for (double rho : sweep.rhos) {
        if (!(rho > 0) || !std::isfinite(rho)) {
          return ConfigError("NonpositiveBudget: sweep rhos must be positive");
        }
      }
      config.sweep = std::move(sweep);
    }
    if (root.contains("mse_theory")) {
      const json& m = root["mse_theory"];
      MseConfig mse;
      mse.n = m.value("n", mse.n);
      absl::StatusOr<std::vector<double>> a =
          Numbers(m.value("alphas", json::array()), "mse_theory.alphas");
      if (!a.ok()) return a.status();
      mse.alphas = *std::move(a);
      absl::StatusOr<std::vector<double>> r =
          Numbers(m.value("rhos", json::array()), "mse_theory.rhos");
      if (!r.ok()) return r.status();
      mse.rhos = *std::move(r);
      mse.delta_min = m.value("delta_min", mse.delta_min);
      mse.delta_max = m.value("delta_max", mse.delta_max);
      mse.points = m.value("points", mse.points);
      if (mse.alphas.empty() || mse.rhos.empty() || mse.points < 2 ||
          !(mse.delta_min >= 1) || !(mse.delta_max > mse.delta_min)) {
        return ConfigError("\"mse_theory\" grid is empty or malformed");
      }
      config.mse = std::move(mse);
    }
    if (root.contains("ffu")) {
      const json& f = root["ffu"];
      FfuConfig ffu;
      absl::StatusOr<std::vector<double>> d =
          Numbers(f.value("deltas", json::array()), "ffu.deltas");
      if (!d.ok()) return d.status();
      ffu.deltas = *std::move(d);
      ffu.gamma = f.value("gamma", ffu.gamma);
      if (ffu.deltas.empty()) return ConfigError("\"ffu\" needs \"deltas\"");
      config.ffu = std::move(ffu);
    }
  } catch (const json::exception& e) {
    return ConfigError(e.what());
  }

  if (config.sweep && config.schema && !root.contains("thresholds")) {
    config.workload.thresholds = SweepThresholds(
        *config.schema, config.sweep->attribute, config.sweep->thresholds[0]);
  }
  if (config.schema) {
    if (absl::Status s = ValidateWorkload(config.workload, *config.schema);
        !s.ok()) {
      return s;
    }
  }
  return config;
}

SplitThresholds SweepThresholds(const Schema& schema,
                                const std::string& attribute,
                                double threshold) {
  std::map<std::string, double> caps;
  for (const std::string& m : schema.measure_names()) {
    caps[m] = m == attribute ? threshold
                             : std::numeric_limits<double>::infinity();
  }
  return SplitThresholds(std::move(caps));
}

absl::StatusOr<RunConfig> LoadConfig(const std::filesystem::path& path) {
  absl::StatusOr<std::string> text = csv::ReadFile(path);
  if (!text.ok()) return text.status();
  json root = json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    return ConfigError(absl::StrCat(path.string(), " is not valid JSON"));
  }
  return ParseConfig(root, path.parent_path());
}

absl::StatusOr<Table> LoadTable(const RunConfig& config) {
  if (!config.source) return ConfigError("no \"input\" or \"generator\" given");
  const TableSource& source = *config.source;
  if (source.csv) return LoadCsv(*source.csv, *config.schema);
  const SeededRng rng(source.seed.value_or(config.seed));
  if (source.generator == "sim") {
    return GenSimData(source.n, rng, source.sim);
  }
  return GenBusinessData(source.n, rng, source.business);
}

}  // namespace przcdp::cli
