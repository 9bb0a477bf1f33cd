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

#include "shuffle_dp/oracles.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "boost/math/special_functions/gamma.hpp"

namespace shuffle_dp {
namespace {

constexpr double kMinExpectedPerBin = 5.0;

template <typename Real>
std::vector<double> Convolve(std::span<const double> success_probs) {
  std::vector<Real> dist(success_probs.size() + 1, Real(0));
  dist[0] = Real(1);
  size_t support = 0;
  for (double p_double : success_probs) {
    const Real p = p_double;
    const Real q = Real(1) - p;
    ++support;
    for (size_t s = support; s > 0; --s) {
      dist[s] = dist[s] * q + dist[s - 1] * p;
    }
    dist[0] *= q;
  }
  return std::vector<double>(dist.begin(), dist.end());
}

}  // namespace

std::vector<double> BernoulliSumDistribution(
    std::span<const double> success_probs, OraclePrecision precision) {
  return precision == OraclePrecision::kExtended
             ? Convolve<long double>(success_probs)
             : Convolve<double>(success_probs);
}

absl::StatusOr<ExactDistribution> ConvolutionDistribution(
    const ShuffleInstance& instance, bool primary_is_x0,
    OraclePrecision precision) {
  if (instance.n() > kMaxExactOracleUsers) {
    return absl::InvalidArgumentError(
        absl::StrCat("exact convolution supports n <= ", kMaxExactOracleUsers,
                     ", got ", instance.n()));
  }
  const double t = std::exp(-instance.epsilon0());
  const double scale = 1.0 + (instance.k() - 1) * t;
  const double p_truth = 1.0 / scale;
  const double p_other = t / scale;

  std::vector<double> probs;
  probs.reserve(instance.n());
  probs.push_back(primary_is_x0 ? p_truth : p_other);
  probs.insert(probs.end(), instance.count_x0(), p_truth);
  probs.insert(probs.end(), instance.n() - instance.count_x0() - 1, p_other);
  return ExactDistribution{BernoulliSumDistribution(probs, precision)};
}

absl::StatusOr<double> ExhaustiveTightDelta(const ShuffleInstance& instance,
                                            double epsilon) {
  if (!(epsilon > 0)) {
    return absl::InvalidArgumentError("epsilon must be > 0");
  }
  absl::StatusOr<ExactDistribution> primary =
      ConvolutionDistribution(instance, /*primary_is_x0=*/true);
  if (!primary.ok()) return primary.status();
  absl::StatusOr<ExactDistribution> secondary =
      ConvolutionDistribution(instance, /*primary_is_x0=*/false);
  if (!secondary.ok()) return secondary.status();

  double delta = 0.0;
  for (size_t s = 0; s < primary->probs.size(); ++s) {
    const double a = primary->probs[s];
    const double b = secondary->probs[s];
    if (a <= 0.0) continue;
    if (b <= 0.0) {
      delta += a;  // infinite loss
      continue;
    }
    const double loss = std::log(a / b);
    if (loss > epsilon) delta += -std::expm1(epsilon - loss) * a;
  }
  return delta;
}

absl::StatusOr<ChiSquareResult> ChiSquareFit(
    std::span<const int64_t> samples, const ExactDistribution& expected) {
  if (static_cast<int64_t>(samples.size()) < kMinChiSquareSamples) {
    return absl::InvalidArgumentError(
        absl::StrCat("chi-square fit needs at least ", kMinChiSquareSamples,
                     " samples, got ", samples.size()));
  }
  const size_t outcomes = expected.probs.size();
  std::vector<double> observed(outcomes, 0.0);
  for (int64_t s : samples) {
    if (s < 0 || static_cast<size_t>(s) >= outcomes) {
      return absl::InvalidArgumentError(
          absl::StrCat("sample ", s, " outside the expected support"));
    }
    observed[s] += 1.0;
  }

  const double total = static_cast<double>(samples.size());
  std::vector<double> bin_observed;
  std::vector<double> bin_expected;
  double acc_observed = 0.0;
  double acc_expected = 0.0;
  for (size_t s = 0; s < outcomes; ++s) {
    acc_observed += observed[s];
    acc_expected += expected.probs[s] * total;
    if (acc_expected >= kMinExpectedPerBin) {
      bin_observed.push_back(acc_observed);
      bin_expected.push_back(acc_expected);
      acc_observed = acc_expected = 0.0;
    }
  }
  if (bin_expected.empty()) {
    return absl::InvalidArgumentError("expected distribution has no mass");
  }
  bin_observed.back() += acc_observed;
  bin_expected.back() += acc_expected;
  if (bin_expected.size() < 2) {
    return absl::InvalidArgumentError(
        "fewer than two bins after pooling; nothing to test");
  }

  ChiSquareResult result;
  for (size_t i = 0; i < bin_expected.size(); ++i) {
    const double diff = bin_observed[i] - bin_expected[i];
    result.statistic += diff * diff / bin_expected[i];
  }
  result.degrees_of_freedom = static_cast<int>(bin_expected.size()) - 1;
  result.p_value = boost::math::gamma_q(
      0.5 * result.degrees_of_freedom, 0.5 * result.statistic);
  return result;
}

}  // namespace shuffle_dp
