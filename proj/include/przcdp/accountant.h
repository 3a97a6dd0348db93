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

// Per-record privacy calculus over policy functions: composition, group
// bounds, and the embeddings of plain zCDP and one-sided zCDP.

#ifndef PRZCDP_ACCOUNTANT_H_
#define PRZCDP_ACCOUNTANT_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "przcdp/policy.h"
#include "przcdp/table.h"

namespace przcdp {

// Running one mechanism after another charges each record the sum of the two
// policies.
absl::StatusOr<PolicyFunction> SequentialCompose(const PolicyFunction& first,
                                                 const PolicyFunction& second,
                                                 const Schema& schema);

// Mechanisms run on the disjoint slices of `keys`; a record is charged only by
// the branch its labels select.
absl::StatusOr<PolicyFunction> ParallelCompose(
    const Schema& schema, std::vector<std::string> keys,
    std::map<std::string, PolicyFunction> branches, PolicyFunction fallback);

// A rho-zCDP mechanism as a constant policy.
PolicyFunction ZcdpAsPolicy(double rho);

// J * sum_j P(r_j) for a group of J records.
absl::StatusOr<double> SimpleGroupBound(const PolicyFunction& policy,
                                        const Schema& schema,
                                        std::span<const Row> rows);
absl::StatusOr<double> SimpleGroupBound(std::span<const double> losses);

// Group bound from chaining the weak triangle inequality for Renyi
// divergences record by record, most expensive record first:
//
//   inf_{k>1}  sum_{j<J} k^j/(k-1) * P(r_(j))  +  k^(J-1) * P(r_(J))
//
// For J = 2 the infimum is P1 + P2 + 2*sqrt(P1*P2). Not always below the
// simple bound; GroupBound takes the better of the two.
absl::StatusOr<double> AdvancedGroupBound(std::span<const double> losses);

// Closed form of the J = 2 advanced bound.
double PairGroupBound(double first, double second);

// The chained objective above at a given k; exposed for tests.
double AdvancedGroupObjective(std::span<const double> sorted_desc, double k);

absl::StatusOr<double> GroupBound(std::span<const double> losses);

// A P-PRzCDP mechanism is (P*, 2*sup)-one-sided zCDP, where P* marks records
// outside the sensitive set R and `sensitive_supremum` is a caller-certified
// bound on P over R.
struct OneSidedGuarantee {
  std::string indicator;  // description of P*(r) = 1{r not in R}
  double rho = 0;
};
absl::StatusOr<OneSidedGuarantee> OneSidedBound(
    const PolicyFunction& policy, double sensitive_supremum,
    std::string sensitive_set_description = "R");

// Ordered record of privacy charges. Combined() is the sequential sum of all
// charges in order.
class PrivacyLedger {
 public:
  struct Charge {
    std::string stage;
    PolicyFunction policy;
  };

  void Add(std::string stage, PolicyFunction policy);
  const std::vector<Charge>& charges() const { return charges_; }
  PolicyFunction Combined() const;

 private:
  std::vector<Charge> charges_;
};

}  // namespace przcdp

#endif  // PRZCDP_ACCOUNTANT_H_
