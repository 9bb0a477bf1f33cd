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

#ifndef SHUFFLE_DP_MECHANISMS_H_
#define SHUFFLE_DP_MECHANISMS_H_

#include <numbers>
#include <random>
#include <vector>

#include "absl/status/statusor.h"
#include "shuffle_dp/histogram.h"

namespace shuffle_dp {

// All randomized operations take an injected generator. Use one generator per
// thread.
using Rng = std::mt19937_64;

// L2 sensitivity of a count histogram when one user changes value: two bins
// move by one.
inline constexpr double kHistogramL2Sensitivity = std::numbers::sqrt2;

// k-ary randomized response: report the true symbol with probability
// e^eps0 / (e^eps0 + k - 1), any given other symbol with 1 / (e^eps0 + k - 1).
// epsilon0 = 0 is the uniform channel and epsilon0 = +inf the identity.
class KrrRandomizer {
 public:
  static absl::StatusOr<KrrRandomizer> Create(int k, double epsilon0);

  int k() const { return k_; }
  double epsilon0() const { return epsilon0_; }
  double truth_probability() const { return truth_probability_; }
  double flip_probability() const { return flip_probability_; }

  // `x` must be in [0, k).
  int Randomize(int x, Rng& rng) const;

 private:
  KrrRandomizer(int k, double epsilon0);

  int k_;
  double epsilon0_;
  double truth_probability_;
  double flip_probability_;
};

absl::StatusOr<int> KrrRandomize(int x, int k, double epsilon0, Rng& rng);

// Randomizes every record independently and counts the reports. Counting is
// permutation invariant, so no explicit shuffle is performed.
absl::StatusOr<Histogram> ShuffleHistogram(const Dataset& data,
                                           double epsilon0, Rng& rng);

// The noisy report sequence after a uniform permutation, as a shuffler would
// forward it.
absl::StatusOr<std::vector<int>> ShuffledReports(const Dataset& data,
                                                 double epsilon0, Rng& rng);

struct GaussianCalibration {
  double epsilon;
  double delta;
  double l2_sensitivity;
  double sigma;
};

// Tight delta of the Gaussian mechanism with noise scale sigma:
//   Phi(D/(2 sigma) - eps sigma/D) - e^eps Phi(-D/(2 sigma) - eps sigma/D).
// Evaluated in log space so it stays accurate for delta far below 1e-300.
double AnalyticGaussianDelta(double epsilon, double l2_sensitivity,
                             double sigma);
// Natural log of the above; -inf when delta is exactly 0.
double LogAnalyticGaussianDelta(double epsilon, double l2_sensitivity,
                                double sigma);

// Smallest sigma (to relative 1e-12) with AnalyticGaussianDelta <= delta.
absl::StatusOr<GaussianCalibration> CalibrateGaussian(
    double epsilon, double delta,
    double l2_sensitivity = kHistogramL2Sensitivity);

struct NoisyHistogram {
  std::vector<double> values;
  double sigma;
};

// Adds N(0, sigma^2) to every raw count. Values are left unrounded and may be
// negative.
NoisyHistogram GaussianHistogram(const Histogram& histogram,
                                 const GaussianCalibration& calibration,
                                 Rng& rng);

}  // namespace shuffle_dp

#endif  // SHUFFLE_DP_MECHANISMS_H_
