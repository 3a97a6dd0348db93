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

#include "przcdp/accountant.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "absl/strings/str_cat.h"

namespace przcdp {
namespace {

// Search interval for k, as in k - 1 in [1e-9, 1e9).
constexpr double kMinKMinusOne = 1e-9;
constexpr double kMaxKMinusOne = 1e9 - 1;
constexpr int kSearchBits = std::numeric_limits<double>::digits / 2;

absl::Status CheckLosses(std::span<const double> losses) {
  if (losses.empty()) {
    return absl::InvalidArgumentError("EmptyGroup: group has no records");
  }
  for (double loss : losses) {
    if (!(loss >= 0) || !std::isfinite(loss)) {
      return absl::InvalidArgumentError(
          absl::StrCat("NegativeLoss: loss ", loss, " is not finite and >= 0"));
    }
  }
  return absl::OkStatus();
}

// log of the chained objective at k = 1 + exp(t); losses sorted descending.
double LogObjective(std::span<const double> sorted, double t) {
  const double log_k_minus_one = t;
  const double log_k = std::log1p(std::exp(t));
  const size_t j_count = sorted.size();
  std::vector<double> logs;
  logs.reserve(j_count);
  for (size_t j = 1; j <= j_count; ++j) {
    const double p = sorted[j - 1];
    if (p <= 0) continue;
    if (j < j_count) {
      logs.push_back(static_cast<double>(j) * log_k - log_k_minus_one +
                     std::log(p));
    } else {
      logs.push_back(static_cast<double>(j_count - 1) * log_k + std::log(p));
    }
  }
  if (logs.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(logs.begin(), logs.end());
  double acc = 0;
  for (double l : logs) acc += std::exp(l - top);
  return top + std::log(acc);
}

}  // namespace

absl::StatusOr<PolicyFunction> SequentialCompose(const PolicyFunction& first,
                                                 const PolicyFunction& second,
                                                 const Schema& schema) {
  if (absl::Status s = CheckPolicy(first, schema); !s.ok()) return s;
  if (absl::Status s = CheckPolicy(second, schema); !s.ok()) return s;
  return SumPolicy({first, second});
}

absl::StatusOr<PolicyFunction> ParallelCompose(
    const Schema& schema, std::vector<std::string> keys,
    std::map<std::string, PolicyFunction> branches, PolicyFunction fallback) {
  if (keys.empty()) {
    return absl::InvalidArgumentError(
        "KeyAttributeNotConditional: no key attribute given");
  }
  for (const std::string& key : keys) {
    if (!schema.IsConditional(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("KeyAttributeNotConditional: '", key, "'"));
    }
  }
  PolicyFunction out = PiecewisePolicy(std::move(keys), std::move(branches),
                                       std::move(fallback));
  if (absl::Status s = CheckPolicy(out, schema); !s.ok()) return s;
  return out;
}

PolicyFunction ZcdpAsPolicy(double rho) { return ConstantPolicy(rho); }

absl::StatusOr<double> SimpleGroupBound(std::span<const double> losses) {
  if (absl::Status s = CheckLosses(losses); !s.ok()) return s;
  double total = 0;
  for (double loss : losses) total += loss;
  return static_cast<double>(losses.size()) * total;
}

absl::StatusOr<double> SimpleGroupBound(const PolicyFunction& policy,
                                        const Schema& schema,
                                        std::span<const Row> rows) {
  std::vector<double> losses;
  losses.reserve(rows.size());
  for (const Row& row : rows) {
    absl::StatusOr<double> loss = Evaluate(policy, schema, row);
    if (!loss.ok()) return loss.status();
    losses.push_back(*loss);
  }
  return SimpleGroupBound(losses);
}

double PairGroupBound(double first, double second) {
  return first + second + 2 * std::sqrt(first * second);
}

double AdvancedGroupObjective(std::span<const double> sorted_desc, double k) {
  const size_t j_count = sorted_desc.size();
  double total = 0;
  for (size_t j = 1; j <= j_count; ++j) {
    if (j < j_count) {
      total += std::pow(k, static_cast<double>(j)) / (k - 1) *
               sorted_desc[j - 1];
    } else {
      total += std::pow(k, static_cast<double>(j_count - 1)) *
               sorted_desc[j - 1];
    }
  }
  return total;
}

absl::StatusOr<double> AdvancedGroupBound(std::span<const double> losses) {
  if (absl::Status s = CheckLosses(losses); !s.ok()) return s;
  if (losses.size() == 1) return losses.front();

  std::vector<double> sorted(losses.begin(), losses.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  if (sorted.front() == 0) return 0.0;

  double lo = std::log(kMinKMinusOne);
  double hi = std::log(kMaxKMinusOne);
  if (sorted.size() == 2 && sorted[1] > 0) {
    // The J = 2 minimizer sits at k - 1 = sqrt(P1 / P2).
    const double guess = 0.5 * std::log(sorted[0] / sorted[1]);
    lo = std::max(lo, guess - 2);
    hi = std::min(hi, guess + 2);
  }
  auto objective = [&](double t) { return LogObjective(sorted, t); };
  std::pair<double, double> best =
      boost::math::tools::brent_find_minima(objective, lo, hi, kSearchBits);
  return std::exp(best.second);
}

absl::StatusOr<double> GroupBound(std::span<const double> losses) {
  absl::StatusOr<double> simple = SimpleGroupBound(losses);
  if (!simple.ok()) return simple.status();
  absl::StatusOr<double> advanced = AdvancedGroupBound(losses);
  if (!advanced.ok()) return advanced.status();
  return std::min(*simple, *advanced);
}

absl::StatusOr<OneSidedGuarantee> OneSidedBound(
    const PolicyFunction& policy, double sensitive_supremum,
    std::string sensitive_set_description) {
  if (!(sensitive_supremum >= 0) || !std::isfinite(sensitive_supremum)) {
    return absl::InvalidArgumentError(
        "NegativeSup: supremum over the sensitive set must be finite and >= 0");
  }
  OneSidedGuarantee out;
  out.indicator =
      absl::StrCat("P*(r) = 1{r not in ", sensitive_set_description,
                   "}, where sup over ", sensitive_set_description, " of ",
                   Describe(policy), " <= ", FormatNumber(sensitive_supremum));
  out.rho = 2 * sensitive_supremum;
  return out;
}

void PrivacyLedger::Add(std::string stage, PolicyFunction policy) {
  charges_.push_back({std::move(stage), std::move(policy)});
}

PolicyFunction PrivacyLedger::Combined() const {
  std::vector<PolicyFunction> terms;
  terms.reserve(charges_.size());
  for (const Charge& charge : charges_) terms.push_back(charge.policy);
  return SumPolicy(std::move(terms));
}

}  // namespace przcdp
