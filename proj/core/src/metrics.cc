//
// Copyright 2026 The Shuffle DP Authors
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

#include "shuffle_dp/metrics.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace shuffle_dp {
namespace {

absl::StatusOr<std::vector<double>> Normalize(std::span<const double> v) {
  double total = 0.0;
  for (double x : v) total += x;
  if (!(total > 0) || !std::isfinite(total)) {
    return absl::FailedPreconditionError(
        absl::StrCat("cannot normalize a vector with sum ", total));
  }
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= total;
  return out;
}

double Quantile(const std::vector<double>& sorted, double q) {
  const double position = q * static_cast<double>(sorted.size() - 1);
  const size_t below = static_cast<size_t>(std::floor(position));
  const size_t above = std::min(below + 1, sorted.size() - 1);
  const double fraction = position - static_cast<double>(below);
  return sorted[below] + fraction * (sorted[above] - sorted[below]);
}

}  // namespace

absl::StatusOr<double> TvDistance(std::span<const double> p,
                                  std::span<const double> q) {
  if (p.size() != q.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: ", p.size(), " vs ", q.size()));
  }
  absl::StatusOr<std::vector<double>> pn = Normalize(p);
  if (!pn.ok()) return pn.status();
  absl::StatusOr<std::vector<double>> qn = Normalize(q);
  if (!qn.ok()) return qn.status();
  double sum = 0.0;
  for (size_t i = 0; i < pn->size(); ++i) sum += std::abs((*pn)[i] - (*qn)[i]);
  return 0.5 * sum;
}

absl::StatusOr<double> IndividualUtility(
    std::span<const double> estimated_counts, const Histogram& truth,
    int symbol) {
  if (estimated_counts.size() != static_cast<size_t>(truth.k())) {
    return absl::InvalidArgumentError("estimate and truth lengths differ");
  }
  if (symbol < 0 || symbol >= truth.k()) {
    return absl::InvalidArgumentError(
        absl::StrCat("symbol ", symbol, " outside [0, ", truth.k(), ")"));
  }
  return std::abs(estimated_counts[symbol] -
                  static_cast<double>(truth.count(symbol)));
}

absl::StatusOr<double> CommunityUtility(std::span<const double> estimate,
                                        const Histogram& truth) {
  const std::vector<double> counts = truth.AsDoubles();
  return TvDistance(estimate, counts);
}

absl::StatusOr<BoxStats> ComputeBoxStats(std::vector<double> values) {
  if (values.empty()) {
    return absl::InvalidArgumentError("no values to summarize");
  }
  std::sort(values.begin(), values.end());
  BoxStats stats;
  stats.count = static_cast<int64_t>(values.size());
  stats.min = values.front();
  stats.q1 = Quantile(values, 0.25);
  stats.median = Quantile(values, 0.5);
  stats.q3 = Quantile(values, 0.75);
  stats.max = values.back();
  return stats;
}

std::string_view ModelName(MechanismModel model) {
  switch (model) {
    case MechanismModel::kShuffleInv:
      return "shuffle_inv";
    case MechanismModel::kShuffleRaw:
      return "shuffle_raw";
    case MechanismModel::kGaussian:
      return "gaussian";
  }
  return "unknown";
}

}  // namespace shuffle_dp
