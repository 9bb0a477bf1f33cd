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

// Independent verification routes for the accountant: exact Bernoulli
// convolution of the shuffle output count, a direct tight-delta computation on
// top of it, and a chi-square goodness-of-fit test for simulations.

#ifndef SHUFFLE_DP_ORACLES_H_
#define SHUFFLE_DP_ORACLES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "shuffle_dp/accountant.h"

namespace shuffle_dp {

inline constexpr int64_t kMaxExactOracleUsers = 10000;
inline constexpr int64_t kMinChiSquareSamples = 10000;

enum class OraclePrecision { kDouble, kExtended };

// Probabilities over s = 0..n; non-negative, summing to one.
struct ExactDistribution {
  std::vector<double> probs;
};

// Distribution of a sum of independent Bernoulli(success_probs[i]) variables,
// by repeated convolution in the given order.
std::vector<double> BernoulliSumDistribution(
    std::span<const double> success_probs,
    OraclePrecision precision = OraclePrecision::kDouble);

// Count of x0 among the n noisy reports. The distinguished user reports x0
// with p = e^eps0/(e^eps0+k-1) if it holds x0 (primary_is_x0) and with
// 1/(e^eps0+k-1) otherwise; the count_x0 other holders of x0 report it with p;
// the remaining n - count_x0 - 1 users with 1/(e^eps0+k-1).
absl::StatusOr<ExactDistribution> ConvolutionDistribution(
    const ShuffleInstance& instance, bool primary_is_x0,
    OraclePrecision precision = OraclePrecision::kDouble);

// Tight ADP delta from the two convolution distributions: builds the privacy
// loss distribution pointwise and sums (1 - e^(eps - u)) over losses u > eps.
absl::StatusOr<double> ExhaustiveTightDelta(const ShuffleInstance& instance,
                                            double epsilon);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Goodness of fit of observed values s (each in [0, n]) against `expected`.
// Adjacent bins are pooled left to right until each expected count is >= 5.
absl::StatusOr<ChiSquareResult> ChiSquareFit(
    std::span<const int64_t> samples, const ExactDistribution& expected);

}  // namespace shuffle_dp

#endif  // SHUFFLE_DP_ORACLES_H_
