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

#include "przcdp/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "absl/strings/str_cat.h"

namespace przcdp {

absl::StatusOr<GaussianNoiseSpec> GaussianNoiseSpec::Create(double sensitivity,
                                                            double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NonpositiveSigma: sigma = ", sigma));
  }
  if (!(sensitivity > 0) || !std::isfinite(sensitivity)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NonpositiveInput: sensitivity = ", sensitivity));
  }
  return GaussianNoiseSpec(sensitivity, sigma);
}

absl::StatusOr<double> SigmaForRho(double sensitivity, double rho) {
  if (!(sensitivity > 0) || !std::isfinite(sensitivity) || !(rho > 0) ||
      !std::isfinite(rho)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "NonpositiveInput: sensitivity = ", sensitivity, ", rho = ", rho));
  }
  // Of the doubles next to Delta / sqrt(2 rho), keep the one whose recomputed
  // rho lands closest to the request; ties go to the larger sigma.
  auto rho_of = [&](double sigma) {
    return sensitivity * sensitivity / (2 * sigma * sigma);
  };
  double sigma = sensitivity / std::sqrt(2 * rho);
  for (int i = 0; i < 4; ++i) sigma = std::nextafter(sigma, 0.0);
  double best = sigma;
  for (int i = 0; i < 8; ++i) {
    sigma = std::nextafter(sigma, std::numeric_limits<double>::infinity());
    if (std::abs(rho_of(sigma) - rho) <= std::abs(rho_of(best) - rho)) {
      best = sigma;
    }
  }
  return best;
}

absl::StatusOr<double> GaussianRelease(double value,
                                       const GaussianNoiseSpec& spec,
                                       const SeededRng& rng) {
  std::mt19937_64 engine = rng.Engine();
  std::normal_distribution<double> noise(0.0, spec.sigma());
  return value + noise(engine);
}

double Clamp(double value, double bound) { return std::min(value, bound); }

absl::StatusOr<PartitionSelection> PartitionSelect(
    const SplitTable& split_table, const std::vector<std::string>& group_by,
    double sigma, double tau, const SeededRng& rng) {
  if (!(sigma > 0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NonpositiveSigma: sigma = ", sigma));
  }
  if (!(tau > 0) || !std::isfinite(tau)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NonpositiveTau: tau = ", tau));
  }
  const Schema& schema = split_table.schema();
  for (const std::string& attribute : group_by) {
    if (!schema.IsConditional(attribute)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "KeyAttributeNotConditional: '", attribute, "'"));
    }
  }
  PartitionSelection out;
  out.group_by = group_by;
  for (const Row& row : split_table.rows()) {
    out.true_counts[EncodeGroupKey(GroupKeyOf(schema, row, group_by))] += 1;
  }
  absl::StatusOr<GaussianNoiseSpec> spec = GaussianNoiseSpec::Create(1, sigma);
  if (!spec.ok()) return spec.status();
  for (const auto& [key, count] : out.true_counts) {
    absl::StatusOr<double> noisy = GaussianRelease(count, *spec, rng.Child(key));
    if (!noisy.ok()) return noisy.status();
    out.noisy_counts[key] = *noisy;
    if (*noisy >= tau) out.released.insert(key);
  }
  return out;
}

double PartitionReleaseProbability(double count, double sigma, double tau) {
  // P(count + Z >= tau) = Phi((count - tau) / sigma).
  return 0.5 * std::erfc(-(count - tau) / (sigma * std::sqrt(2.0)));
}

PolicyFunction PartitionSelectionCharge(double sigma,
                                        const ThresholdScheme& thresholds) {
  return SplitCostPolicy(1 / (2 * sigma * sigma), thresholds);
}

}  // namespace przcdp
