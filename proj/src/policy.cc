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

#include "przcdp/policy.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace przcdp {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

PolicyFunction Make(PolicyNode node) {
  return PolicyFunction(std::make_shared<const PolicyNode>(std::move(node)));
}

double IntPow(double base, int exponent) {
  double out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

absl::Status SchemaMismatch(absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("SchemaMismatch: ", what));
}

absl::Status CheckSchemeAgainst(const ThresholdScheme& scheme,
                                const Schema& schema) {
  absl::Status s = CheckThresholds(scheme, schema);
  if (s.ok()) return s;
  return SchemaMismatch(s.message());
}

}  // namespace

PolicyFunction::PolicyFunction()
    : node_(std::make_shared<const PolicyNode>(PolicyNode{ConstantTerm{0}})) {}

PolicyFunction ConstantPolicy(double rho) {
  return Make(PolicyNode{ConstantTerm{rho}});
}

PolicyFunction SplitCostPolicy(double rho, ThresholdScheme thresholds,
                               int exponent) {
  return Make(PolicyNode{SplitCostTerm{rho, std::move(thresholds), exponent}});
}

PolicyFunction SumPolicy(std::vector<PolicyFunction> terms) {
  std::vector<PolicyFunction> flat;
  for (PolicyFunction& term : terms) {
    if (const auto* sum = std::get_if<SumTerm>(&term.node().term)) {
      flat.insert(flat.end(), sum->terms.begin(), sum->terms.end());
    } else {
      flat.push_back(std::move(term));
    }
  }
  if (flat.empty()) return ConstantPolicy(0);
  if (flat.size() == 1) return flat.front();
  return Make(PolicyNode{SumTerm{std::move(flat)}});
}

PolicyFunction PiecewisePolicy(std::vector<std::string> keys,
                               std::map<std::string, PolicyFunction> branches,
                               PolicyFunction fallback) {
  return Make(PolicyNode{
      PiecewiseTerm{std::move(keys), std::move(branches), std::move(fallback)}});
}

absl::Status CheckPolicy(const PolicyFunction& policy, const Schema& schema) {
  return std::visit(
      Overloaded{
          [](const ConstantTerm& t) -> absl::Status {
            if (!(t.rho >= 0) || !std::isfinite(t.rho)) {
              return absl::InvalidArgumentError(
                  "constant rho must be finite and >= 0");
            }
            return absl::OkStatus();
          },
          [&](const SplitCostTerm& t) -> absl::Status {
            if (!(t.rho >= 0) || !std::isfinite(t.rho)) {
              return absl::InvalidArgumentError(
                  "split_cost rho must be finite and >= 0");
            }
            if (t.exponent < 1) {
              return absl::InvalidArgumentError(
                  "split_cost exponent must be >= 1");
            }
            return CheckSchemeAgainst(t.thresholds, schema);
          },
          [&](const SumTerm& t) -> absl::Status {
            for (const PolicyFunction& term : t.terms) {
              if (absl::Status s = CheckPolicy(term, schema); !s.ok()) return s;
            }
            return absl::OkStatus();
          },
          [&](const PiecewiseTerm& t) -> absl::Status {
            for (const std::string& key : t.keys) {
              if (!schema.IsConditional(key)) {
                return SchemaMismatch(absl::StrCat(
                    "piecewise key '", key, "' is not a conditional attribute"));
              }
            }
            for (const auto& [label, branch] : t.branches) {
              if (absl::Status s = CheckPolicy(branch, schema); !s.ok()) {
                return s;
              }
            }
            return CheckPolicy(t.fallback, schema);
          },
      },
      policy.node().term);
}

absl::StatusOr<double> Evaluate(const PolicyFunction& policy,
                                const Schema& schema, const Row& row) {
  return std::visit(
      Overloaded{
          [](const ConstantTerm& t) -> absl::StatusOr<double> { return t.rho; },
          [&](const SplitCostTerm& t) -> absl::StatusOr<double> {
            absl::StatusOr<int64_t> m = SplitCount(schema, row, t.thresholds);
            if (!m.ok()) return SchemaMismatch(m.status().message());
            return t.rho * IntPow(static_cast<double>(*m), t.exponent);
          },
          [&](const SumTerm& t) -> absl::StatusOr<double> {
            double total = 0;
            for (const PolicyFunction& term : t.terms) {
              absl::StatusOr<double> v = Evaluate(term, schema, row);
              if (!v.ok()) return v.status();
              total += *v;
            }
            return total;
          },
          [&](const PiecewiseTerm& t) -> absl::StatusOr<double> {
            GroupKey key;
            for (const std::string& attribute : t.keys) {
              std::optional<size_t> index = schema.ConditionalIndex(attribute);
              if (!index.has_value()) {
                return SchemaMismatch(absl::StrCat(
                    "piecewise key '", attribute,
                    "' is not a conditional attribute"));
              }
              key.push_back(row.labels[*index]);
            }
            auto it = t.branches.find(EncodeGroupKey(key));
            return Evaluate(it == t.branches.end() ? t.fallback : it->second,
                            schema, row);
          },
      },
      policy.node().term);
}

double PolicyMin(const PolicyFunction& policy) {
  return std::visit(
      Overloaded{
          [](const ConstantTerm& t) { return t.rho; },
          [](const SplitCostTerm& t) { return t.rho; },
          [](const SumTerm& t) {
            double total = 0;
            for (const PolicyFunction& term : t.terms) total += PolicyMin(term);
            return total;
          },
          [](const PiecewiseTerm& t) {
            double least = PolicyMin(t.fallback);
            for (const auto& [label, branch] : t.branches) {
              least = std::min(least, PolicyMin(branch));
            }
            return least;
          },
      },
      policy.node().term);
}

double PolicySupremum(const PolicyFunction& policy, int64_t max_splits) {
  return std::visit(
      Overloaded{
          [](const ConstantTerm& t) { return t.rho; },
          [&](const SplitCostTerm& t) {
            return t.rho *
                   IntPow(static_cast<double>(std::max<int64_t>(1, max_splits)),
                          t.exponent);
          },
          [&](const SumTerm& t) {
            double total = 0;
            for (const PolicyFunction& term : t.terms) {
              total += PolicySupremum(term, max_splits);
            }
            return total;
          },
          [&](const PiecewiseTerm& t) {
            double most = PolicySupremum(t.fallback, max_splits);
            for (const auto& [label, branch] : t.branches) {
              most = std::max(most, PolicySupremum(branch, max_splits));
            }
            return most;
          },
      },
      policy.node().term);
}

std::string Describe(const PolicyFunction& policy) {
  return std::visit(
      Overloaded{
          [](const ConstantTerm& t) { return FormatNumber(t.rho); },
          [](const SplitCostTerm& t) {
            return absl::StrCat(FormatNumber(t.rho), "*m(r)^", t.exponent);
          },
          [](const SumTerm& t) {
            std::vector<std::string> parts;
            for (const PolicyFunction& term : t.terms) {
              parts.push_back(Describe(term));
            }
            return absl::StrJoin(parts, " + ");
          },
          [](const PiecewiseTerm& t) {
            std::vector<std::string> parts;
            for (const auto& [label, branch] : t.branches) {
              parts.push_back(absl::StrCat(label, ": ", Describe(branch)));
            }
            parts.push_back(absl::StrCat("otherwise: ", Describe(t.fallback)));
            return absl::StrCat("piecewise(", absl::StrJoin(t.keys, ","),
                                ") {", absl::StrJoin(parts, "; "), "}");
          },
      },
      policy.node().term);
}

// Caps serialize as numbers; +infinity, which JSON cannot represent, as "inf".
namespace {

nlohmann::json CapsToJson(const SplitThresholds& thresholds) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, cap] : thresholds.caps()) {
    if (std::isinf(cap)) {
      out[name] = "inf";
    } else {
      out[name] = cap;
    }
  }
  return out;
}

absl::StatusOr<SplitThresholds> CapsFromJson(const nlohmann::json& json) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError("thresholds must be a JSON object");
  }
  std::map<std::string, double> caps;
  for (const auto& [name, value] : json.items()) {
    if (value.is_number()) {
      caps[name] = value.get<double>();
    } else if (value.is_string() && value.get<std::string>() == "inf") {
      caps[name] = std::numeric_limits<double>::infinity();
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "threshold for '", name, "' must be a number or \"inf\""));
    }
  }
  return SplitThresholds(std::move(caps));
}

}  // namespace

nlohmann::json ToJson(const ThresholdScheme& scheme) {
  if (const auto* flat = std::get_if<SplitThresholds>(&scheme)) {
    return CapsToJson(*flat);
  }
  const auto& grouped = std::get<GroupedThresholds>(scheme);
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& [label, thresholds] : grouped.groups) {
    groups[label] = CapsToJson(thresholds);
  }
  return {{"key", grouped.key_attribute},
          {"groups", std::move(groups)},
          {"default", CapsToJson(grouped.fallback)}};
}

absl::StatusOr<ThresholdScheme> ThresholdSchemeFromJson(
    const nlohmann::json& json) {
  if (json.is_object() && json.contains("key") && json["key"].is_string()) {
    GroupedThresholds grouped;
    grouped.key_attribute = json["key"].get<std::string>();
    if (!json.contains("default")) {
      return absl::InvalidArgumentError(
          "grouped thresholds need a \"default\" branch");
    }
    absl::StatusOr<SplitThresholds> fallback = CapsFromJson(json["default"]);
    if (!fallback.ok()) return fallback.status();
    grouped.fallback = *std::move(fallback);
    if (json.contains("groups")) {
      if (!json["groups"].is_object()) {
        return absl::InvalidArgumentError("\"groups\" must be an object");
      }
      for (const auto& [label, caps] : json["groups"].items()) {
        absl::StatusOr<SplitThresholds> branch = CapsFromJson(caps);
        if (!branch.ok()) return branch.status();
        grouped.groups[label] = *std::move(branch);
      }
    }
    return ThresholdScheme(std::move(grouped));
  }
  absl::StatusOr<SplitThresholds> flat = CapsFromJson(json);
  if (!flat.ok()) return flat.status();
  return ThresholdScheme(*std::move(flat));
}

nlohmann::json ToJson(const PolicyFunction& policy) {
  return std::visit(
      Overloaded{
          [](const ConstantTerm& t) -> nlohmann::json {
            return {{"kind", "constant"}, {"rho", t.rho}};
          },
          [](const SplitCostTerm& t) -> nlohmann::json {
            return {{"kind", "split_cost"},
                    {"rho", t.rho},
                    {"exponent", t.exponent},
                    {"thresholds", ToJson(t.thresholds)}};
          },
          [](const SumTerm& t) -> nlohmann::json {
            nlohmann::json terms = nlohmann::json::array();
            for (const PolicyFunction& term : t.terms) {
              terms.push_back(ToJson(term));
            }
            return {{"kind", "sum"}, {"terms", std::move(terms)}};
          },
          [](const PiecewiseTerm& t) -> nlohmann::json {
            nlohmann::json branches = nlohmann::json::object();
            for (const auto& [label, branch] : t.branches) {
              branches[label] = ToJson(branch);
            }
            return {{"kind", "piecewise"},
                    {"keys", t.keys},
                    {"branches", std::move(branches)},
                    {"default", ToJson(t.fallback)}};
          },
      },
      policy.node().term);
}

absl::StatusOr<PolicyFunction> PolicyFromJson(const nlohmann::json& json) {
  if (!json.is_object() || !json.contains("kind") ||
      !json["kind"].is_string()) {
    return absl::InvalidArgumentError("policy node needs a string \"kind\"");
  }
  const std::string kind = json["kind"].get<std::string>();
  auto number = [&](const char* field) -> absl::StatusOr<double> {
    if (!json.contains(field) || !json[field].is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat(kind, " node needs numeric \"", field, "\""));
    }
    return json[field].get<double>();
  };
  if (kind == "constant") {
    absl::StatusOr<double> rho = number("rho");
    if (!rho.ok()) return rho.status();
    return ConstantPolicy(*rho);
  }
  if (kind == "split_cost") {
    absl::StatusOr<double> rho = number("rho");
    if (!rho.ok()) return rho.status();
    int exponent = 2;
    if (json.contains("exponent")) {
      if (!json["exponent"].is_number_integer()) {
        return absl::InvalidArgumentError("exponent must be an integer");
      }
      exponent = json["exponent"].get<int>();
    }
    if (!json.contains("thresholds")) {
      return absl::InvalidArgumentError("split_cost node needs \"thresholds\"");
    }
    absl::StatusOr<ThresholdScheme> scheme =
        ThresholdSchemeFromJson(json["thresholds"]);
    if (!scheme.ok()) return scheme.status();
    return SplitCostPolicy(*rho, *std::move(scheme), exponent);
  }
  if (kind == "sum") {
    if (!json.contains("terms") || !json["terms"].is_array()) {
      return absl::InvalidArgumentError("sum node needs a \"terms\" array");
    }
    std::vector<PolicyFunction> terms;
    for (const nlohmann::json& term : json["terms"]) {
      absl::StatusOr<PolicyFunction> child = PolicyFromJson(term);
      if (!child.ok()) return child.status();
      terms.push_back(*std::move(child));
    }
    // Rebuild without flattening so the tree round-trips node for node.
    if (terms.empty()) return ConstantPolicy(0);
    return PolicyFunction(
        std::make_shared<const PolicyNode>(PolicyNode{SumTerm{terms}}));
  }
  if (kind == "piecewise") {
    if (!json.contains("keys") || !json["keys"].is_array() ||
        !json.contains("branches") || !json["branches"].is_object() ||
        !json.contains("default")) {
      return absl::InvalidArgumentError(
          "piecewise node needs \"keys\", \"branches\" and \"default\"");
    }
    std::vector<std::string> keys;
    for (const nlohmann::json& key : json["keys"]) {
      if (!key.is_string()) {
        return absl::InvalidArgumentError("piecewise keys must be strings");
      }
      keys.push_back(key.get<std::string>());
    }
    std::map<std::string, PolicyFunction> branches;
    for (const auto& [label, branch] : json["branches"].items()) {
      absl::StatusOr<PolicyFunction> child = PolicyFromJson(branch);
      if (!child.ok()) return child.status();
      branches.emplace(label, *std::move(child));
    }
    absl::StatusOr<PolicyFunction> fallback = PolicyFromJson(json["default"]);
    if (!fallback.ok()) return fallback.status();
    return PiecewisePolicy(std::move(keys), std::move(branches),
                           *std::move(fallback));
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown policy node kind '", kind, "'"));
}

bool StructurallyEqual(const PolicyFunction& a, const PolicyFunction& b) {
  return ToJson(a) == ToJson(b);
}

}  // namespace przcdp
