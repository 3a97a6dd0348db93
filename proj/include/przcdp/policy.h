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

// Record-dependent policy functions.
//
// A policy maps a hypothetical record to the largest privacy loss (in zCDP
// rho units) that record may incur. Policies are closed expression trees so
// that their functional form can be published as JSON while evaluations at
// real records stay confidential. Node kinds:
//
//   constant      rho
//   split_cost    rho * m(r)^exponent, m = split count under `thresholds`
//   sum           sum of terms
//   piecewise     branch chosen by the record's labels on `keys`
//
// PolicyFunction is a cheap-to-copy immutable handle.

#ifndef PRZCDP_POLICY_H_
#define PRZCDP_POLICY_H_

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "przcdp/splitting.h"
#include "przcdp/table.h"

namespace przcdp {

struct PolicyNode;

class PolicyFunction {
 public:
  // Constant(0), the identity for sequential composition.
  PolicyFunction();
  explicit PolicyFunction(std::shared_ptr<const PolicyNode> node)
      : node_(std::move(node)) {}

  const PolicyNode& node() const { return *node_; }

 private:
  std::shared_ptr<const PolicyNode> node_;
};

struct ConstantTerm {
  double rho = 0;
};

struct SplitCostTerm {
  double rho = 0;
  ThresholdScheme thresholds;
  int exponent = 2;
};

struct SumTerm {
  std::vector<PolicyFunction> terms;
};

struct PiecewiseTerm {
  std::vector<std::string> keys;
  // Keyed by EncodeGroupKey of the record's labels on `keys`.
  std::map<std::string, PolicyFunction> branches;
  PolicyFunction fallback;
};

struct PolicyNode {
  std::variant<ConstantTerm, SplitCostTerm, SumTerm, PiecewiseTerm> term;
};

PolicyFunction ConstantPolicy(double rho);
PolicyFunction SplitCostPolicy(double rho, ThresholdScheme thresholds,
                               int exponent = 2);
// Nested sums are flattened; an empty sum is Constant(0).
PolicyFunction SumPolicy(std::vector<PolicyFunction> terms);
PolicyFunction PiecewisePolicy(std::vector<std::string> keys,
                               std::map<std::string, PolicyFunction> branches,
                               PolicyFunction fallback);

// SchemaMismatch if the policy references attributes the schema lacks or
// uses them with the wrong kind; InvalidArgument for negative parameters.
absl::Status CheckPolicy(const PolicyFunction& policy, const Schema& schema);

absl::StatusOr<double> Evaluate(const PolicyFunction& policy,
                                const Schema& schema, const Row& row);

// Smallest value over all records: constants as is, split costs at m = 1,
// sums add minima, piecewise takes the least branch.
double PolicyMin(const PolicyFunction& policy);

// Largest value over records that split at most `max_splits` times under
// every split-cost term.
double PolicySupremum(const PolicyFunction& policy, int64_t max_splits);

// Human-readable functional form, e.g. "0.5 + 1.5*m(r)^2".
std::string Describe(const PolicyFunction& policy);

nlohmann::json ToJson(const ThresholdScheme& scheme);
absl::StatusOr<ThresholdScheme> ThresholdSchemeFromJson(
    const nlohmann::json& json);

nlohmann::json ToJson(const PolicyFunction& policy);
absl::StatusOr<PolicyFunction> PolicyFromJson(const nlohmann::json& json);

bool StructurallyEqual(const PolicyFunction& a, const PolicyFunction& b);

}  // namespace przcdp

#endif  // PRZCDP_POLICY_H_
