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

#ifndef SHUFFLE_DP_METRICS_H_
#define SHUFFLE_DP_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "shuffle_dp/histogram.h"

namespace shuffle_dp {

// Total variation distance (1/2) sum |p_i - q_i| after normalizing each input
// to sum one, so raw count vectors may be passed directly.
absl::StatusOr<double> TvDistance(std::span<const double> p,
                                  std::span<const double> q);

// |estimated_counts[symbol] - truth.count(symbol)|. For shuffle+INV pass
// n * pi_hat; for the Gaussian mechanism pass the noisy histogram.
absl::StatusOr<double> IndividualUtility(
    std::span<const double> estimated_counts, const Histogram& truth,
    int symbol);

// TV distance between the normalized estimate and the normalized truth.
absl::StatusOr<double> CommunityUtility(std::span<const double> estimate,
                                        const Histogram& truth);

// Five-number summary; quartiles use linear interpolation between order
// statistics.
struct BoxStats {
  int64_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

absl::StatusOr<BoxStats> ComputeBoxStats(std::vector<double> values);

enum class MechanismModel {
  kShuffleInv,  // shuffle histogram denoised by the inverse channel
  kShuffleRaw,  // shuffle histogram without inversion
  kGaussian,    // central Gaussian mechanism on the true histogram
};

std::string_view ModelName(MechanismModel model);

struct UtilityReport {
  MechanismModel model;
  double epsilon = 0.0;
  double delta = 0.0;
  std::optional<double> epsilon0;
  std::optional<double> sigma;
  int64_t n = 0;
  int k = 0;
  uint64_t seed = 0;
  int trial = 0;
  double tv_distance = 0.0;
  // shuffle_inv only: TV after projecting the estimate onto the simplex.
  std::optional<double> tv_distance_projected;
  // Absolute |estimate - truth| per symbol label, and the same divided by n.
  std::map<std::string, double> individual;
  std::map<std::string, double> individual_normalized;
};

}  // namespace shuffle_dp

#endif  // SHUFFLE_DP_METRICS_H_
