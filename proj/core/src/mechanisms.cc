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

#include "shuffle_dp/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "shuffle_dp/log_math.h"

namespace shuffle_dp {
namespace {

constexpr double kSigmaRelativeTolerance = 1e-12;
constexpr int kMaxBracketSteps = 2000;
constexpr int kMaxBisectionSteps = 400;

}  // namespace

KrrRandomizer::KrrRandomizer(int k, double epsilon0)
    : k_(k), epsilon0_(epsilon0) {
  // 1 / (1 + (k-1) e^-eps0) stays exact as eps0 -> inf.
  const double others = (k - 1) * std::exp(-epsilon0);
  truth_probability_ = 1.0 / (1.0 + others);
  flip_probability_ = std::exp(-epsilon0) / (1.0 + others);
}

absl::StatusOr<KrrRandomizer> KrrRandomizer::Create(int k, double epsilon0) {
  if (k < 2) {
    return absl::InvalidArgumentError(absl::StrCat("k must be >= 2, got ", k));
  }
  if (!(epsilon0 >= 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon0 must be >= 0, got ", epsilon0));
  }
  return KrrRandomizer(k, epsilon0);
}

int KrrRandomizer::Randomize(int x, Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < truth_probability_) return x;
  std::uniform_int_distribution<int> other(0, k_ - 2);
  const int y = other(rng);
  return y >= x ? y + 1 : y;
}

absl::StatusOr<int> KrrRandomize(int x, int k, double epsilon0, Rng& rng) {
  absl::StatusOr<KrrRandomizer> randomizer = KrrRandomizer::Create(k, epsilon0);
  if (!randomizer.ok()) return randomizer.status();
  if (x < 0 || x >= k) {
    return absl::InvalidArgumentError(
        absl::StrCat("symbol index ", x, " outside [0, ", k, ")"));
  }
  return randomizer->Randomize(x, rng);
}

absl::StatusOr<Histogram> ShuffleHistogram(const Dataset& data,
                                           double epsilon0, Rng& rng) {
  absl::StatusOr<KrrRandomizer> randomizer =
      KrrRandomizer::Create(data.k(), epsilon0);
  if (!randomizer.ok()) return randomizer.status();
  std::vector<int64_t> counts(data.k(), 0);
  for (int x : data.records()) ++counts[randomizer->Randomize(x, rng)];
  return Histogram::Create(std::move(counts));
}

absl::StatusOr<std::vector<int>> ShuffledReports(const Dataset& data,
                                                 double epsilon0, Rng& rng) {
  absl::StatusOr<KrrRandomizer> randomizer =
      KrrRandomizer::Create(data.k(), epsilon0);
  if (!randomizer.ok()) return randomizer.status();
  std::vector<int> reports;
  reports.reserve(data.records().size());
  for (int x : data.records()) reports.push_back(randomizer->Randomize(x, rng));
  std::shuffle(reports.begin(), reports.end(), rng);
  return reports;
}

double LogAnalyticGaussianDelta(double epsilon, double l2_sensitivity,
                                double sigma) {
  const double a = l2_sensitivity / (2.0 * sigma);
  const double b = epsilon * sigma / l2_sensitivity;
  if (std::isnan(b) || std::isinf(b)) return kNegativeInfinity;
  const double log_first = LogStandardNormalCdf(a - b);
  // ln(e^eps Phi(-a-b)) - ln Phi(a-b). In the asymptotic tail eps cancels
  // the quadratic terms exactly (2ab = eps); differencing the two large
  // logs instead would lose the digits of a that a - b rounds away.
  double log_ratio;
  if (a - b < kNormalTailThreshold) {
    log_ratio = std::log1p(-2.0 * a / (a + b)) + LogMillsSeries(-a - b) -
                LogMillsSeries(a - b);
  } else {
    log_ratio =
        epsilon + LogStandardNormalCdf(-a - b) - LogStandardNormalCdf(a - b);
  }
  if (log_ratio >= 0) return kNegativeInfinity;
  return log_first + std::log(-std::expm1(log_ratio));
}

double AnalyticGaussianDelta(double epsilon, double l2_sensitivity,
                             double sigma) {
  return std::exp(LogAnalyticGaussianDelta(epsilon, l2_sensitivity, sigma));
}

absl::StatusOr<GaussianCalibration> CalibrateGaussian(double epsilon,
                                                      double delta,
                                                      double l2_sensitivity) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and > 0, got ", epsilon));
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (!(l2_sensitivity > 0) || !std::isfinite(l2_sensitivity)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "l2 sensitivity must be finite and > 0, got ", l2_sensitivity));
  }
  const double log_delta = std::log(delta);
  auto meets = [&](double sigma) {
    return LogAnalyticGaussianDelta(epsilon, l2_sensitivity, sigma) <=
           log_delta;
  };

  double upper = l2_sensitivity;
  int steps = 0;
  while (!meets(upper)) {
    upper *= 2.0;
    if (++steps > kMaxBracketSteps || !std::isfinite(upper)) {
      return absl::InternalError("could not bracket sigma from above");
    }
  }
  double lower = upper;
  steps = 0;
  while (meets(lower)) {
    lower /= 2.0;
    if (++steps > kMaxBracketSteps || lower == 0.0) {
      return absl::InternalError("could not bracket sigma from below");
    }
  }
  for (steps = 0; upper - lower > kSigmaRelativeTolerance * upper; ++steps) {
    if (steps >= kMaxBisectionSteps) {
      return absl::InternalError(
          absl::StrCat("sigma bisection did not converge: [", lower, ", ",
                       upper, "]"));
    }
    const double middle = lower + (upper - lower) / 2.0;
    if (meets(middle)) {
      upper = middle;
    } else {
      lower = middle;
    }
  }
  return GaussianCalibration{epsilon, delta, l2_sensitivity, upper};
}

NoisyHistogram GaussianHistogram(const Histogram& histogram,
                                 const GaussianCalibration& calibration,
                                 Rng& rng) {
  std::normal_distribution<double> noise(0.0, calibration.sigma);
  NoisyHistogram out{histogram.AsDoubles(), calibration.sigma};
  for (double& v : out.values) v += noise(rng);
  return out;
}

}  // namespace shuffle_dp
