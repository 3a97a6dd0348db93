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

#ifndef PRZCDP_MECHANISMS_H_
#define PRZCDP_MECHANISMS_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "przcdp/policy.h"
#include "przcdp/rng.h"
#include "przcdp/splitting.h"
#include "przcdp/table.h"

namespace przcdp {

// Gaussian mechanism parameters. Releasing q(D) + N(0, sigma^2) for a query
// of sensitivity Delta is rho-zCDP with rho = Delta^2 / (2 sigma^2); rho is
// always recomputed from the pair.
class GaussianNoiseSpec {
 public:
  static absl::StatusOr<GaussianNoiseSpec> Create(double sensitivity,
                                                  double sigma);

  double sensitivity() const { return sensitivity_; }
  double sigma() const { return sigma_; }
  double rho() const {
    return sensitivity_ * sensitivity_ / (2 * sigma_ * sigma_);
  }

 private:
  GaussianNoiseSpec(double sensitivity, double sigma)
      : sensitivity_(sensitivity), sigma_(sigma) {}

  double sensitivity_;
  double sigma_;
};

// sigma = Delta / sqrt(2 rho), picked among adjacent doubles so that
// GaussianNoiseSpec::rho() gives back rho as closely as possible.
absl::StatusOr<double> SigmaForRho(double sensitivity, double rho);

// value + N(0, sigma^2) drawn from the stream named by `rng`.
absl::StatusOr<double> GaussianRelease(double value,
                                       const GaussianNoiseSpec& spec,
                                       const SeededRng& rng);

// Top-coding: min(value, bound).
double Clamp(double value, double bound);

// Noisy-threshold keyset selection on a split table: a key present in the
// table is released iff its split-row count plus N(0, sigma^2) reaches tau.
// Absent keys are never released. Each key's noise comes from
// rng.Child(EncodeGroupKey(key)).
struct PartitionSelection {
  std::vector<std::string> group_by;
  std::map<std::string, double> true_counts;
  std::map<std::string, double> noisy_counts;
  std::set<std::string> released;
};

absl::StatusOr<PartitionSelection> PartitionSelect(
    const SplitTable& split_table, const std::vector<std::string>& group_by,
    double sigma, double tau, const SeededRng& rng);

// Probability that a key with `count` split rows is released.
double PartitionReleaseProbability(double count, double sigma, double tau);

// Per-record charge of the selection step: one record moves its key's count
// by m(r), so the charge is (1 / (2 sigma^2)) * m(r)^2.
PolicyFunction PartitionSelectionCharge(double sigma,
                                        const ThresholdScheme& thresholds);

}  // namespace przcdp

#endif  // PRZCDP_MECHANISMS_H_
