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

#ifndef SHUFFLE_DP_ESTIMATION_H_
#define SHUFFLE_DP_ESTIMATION_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "shuffle_dp/histogram.h"

namespace shuffle_dp {

// Square k x k matrix; row = input symbol, column = output symbol. The forward
// k-RR channel is row-stochastic. Its inverse has rows summing to one but may
// hold negative entries.
class StochasticChannel {
 public:
  StochasticChannel(int k, std::vector<double> row_major_entries);

  int k() const { return k_; }
  double at(int row, int column) const { return entries_[row * k_ + column]; }
  std::span<const double> entries() const { return entries_; }

  // row_vector * this.
  std::vector<double> ApplyToRow(std::span<const double> row_vector) const;
  // this * other.
  StochasticChannel Multiply(const StochasticChannel& other) const;

 private:
  int k_;
  std::vector<double> entries_;
};

// Diagonal e^eps0 c, off-diagonal c, c = 1 / (e^eps0 + k - 1). Requires
// k >= 2 and eps0 > 0 (eps0 = +inf gives the identity).
absl::StatusOr<StochasticChannel> KrrChannel(int k, double epsilon0);

// ((e^eps0 + k - 1) / (e^eps0 - 1)) (I - J / (e^eps0 + k - 1)), J all-ones.
// eps0 = 0 is rejected: the channel is then singular.
absl::StatusOr<StochasticChannel> KrrChannelInverse(int k, double epsilon0);

struct DistributionEstimate {
  // Unbiased estimate; sums to one, may contain negative entries.
  std::vector<double> values;
  // Negatives clamped to zero and renormalized, when requested.
  std::optional<std::vector<double>> projected;
};

// Clamp negative entries to zero and renormalize to sum one.
std::vector<double> ProjectOntoSimplex(std::span<const double> values);

// pi_hat = (counts / n) R^-1 for the k-RR channel with parameter eps0.
absl::StatusOr<DistributionEstimate> Denoise(const Histogram& histogram,
                                             double epsilon0,
                                             bool project = false);

}  // namespace shuffle_dp

#endif  // SHUFFLE_DP_ESTIMATION_H_
