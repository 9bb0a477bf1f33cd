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

#include "shuffle_dp/estimation.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace shuffle_dp {
namespace {

absl::Status ValidateChannelParameters(int k, double epsilon0) {
  if (k < 2) {
    return absl::InvalidArgumentError(absl::StrCat("k must be >= 2, got ", k));
  }
  if (!(epsilon0 > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon0 must be > 0, got ", epsilon0));
  }
  return absl::OkStatus();
}

StochasticChannel SymmetricChannel(int k, double diagonal,
                                   double off_diagonal) {
  std::vector<double> entries(static_cast<size_t>(k) * k, off_diagonal);
  for (int i = 0; i < k; ++i) entries[static_cast<size_t>(i) * k + i] = diagonal;
  return StochasticChannel(k, std::move(entries));
}

}  // namespace

StochasticChannel::StochasticChannel(int k, std::vector<double> entries)
    : k_(k), entries_(std::move(entries)) {}

std::vector<double> StochasticChannel::ApplyToRow(
    std::span<const double> row_vector) const {
  std::vector<double> out(k_, 0.0);
  for (int i = 0; i < k_; ++i) {
    const double weight = row_vector[i];
    for (int j = 0; j < k_; ++j) out[j] += weight * at(i, j);
  }
  return out;
}

StochasticChannel StochasticChannel::Multiply(
    const StochasticChannel& other) const {
  std::vector<double> out(static_cast<size_t>(k_) * k_, 0.0);
  for (int i = 0; i < k_; ++i) {
    for (int l = 0; l < k_; ++l) {
      const double a = at(i, l);
      for (int j = 0; j < k_; ++j) out[i * k_ + j] += a * other.at(l, j);
    }
  }
  return StochasticChannel(k_, std::move(out));
}

absl::StatusOr<StochasticChannel> KrrChannel(int k, double epsilon0) {
  if (absl::Status st = ValidateChannelParameters(k, epsilon0); !st.ok()) {
    return st;
  }
  // Written in t = e^-eps0 so that eps0 = +inf is exact.
  const double t = std::exp(-epsilon0);
  const double scale = 1.0 + (k - 1) * t;
  return SymmetricChannel(k, 1.0 / scale, t / scale);
}

absl::StatusOr<StochasticChannel> KrrChannelInverse(int k, double epsilon0) {
  if (absl::Status st = ValidateChannelParameters(k, epsilon0); !st.ok()) {
    return st;
  }
  const double t = std::exp(-epsilon0);
  const double one_minus_t = -std::expm1(-epsilon0);
  return SymmetricChannel(k, (1.0 + (k - 2) * t) / one_minus_t,
                          -t / one_minus_t);
}

std::vector<double> ProjectOntoSimplex(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::max(v, 0.0);
    total += v;
  }
  if (total <= 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
    return out;
  }
  for (double& v : out) v /= total;
  return out;
}

absl::StatusOr<DistributionEstimate> Denoise(const Histogram& histogram,
                                             double epsilon0, bool project) {
  if (histogram.total() == 0) {
    return absl::InvalidArgumentError("cannot denoise an empty histogram");
  }
  absl::StatusOr<StochasticChannel> inverse =
      KrrChannelInverse(histogram.k(), epsilon0);
  if (!inverse.ok()) return inverse.status();
  DistributionEstimate estimate;
  estimate.values = inverse->ApplyToRow(histogram.Normalized());
  if (project) estimate.projected = ProjectOntoSimplex(estimate.values);
  return estimate;
}

}  // namespace shuffle_dp
