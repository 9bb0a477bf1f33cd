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
#include <numeric>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "shuffle_dp/accountant.h"
#include "shuffle_dp/mechanisms.h"

namespace shuffle_dp {
namespace {

ShuffleInstance MakeInstance(int64_t n, int k, double eps0, int64_t count) {
  return *ShuffleInstance::Create(n, k, eps0, count);
}

TEST(BernoulliSumTest, HandComputedCases) {
  std::vector<double> one = {0.3};
  EXPECT_EQ(BernoulliSumDistribution(one), (std::vector<double>{0.7, 0.3}));
  std::vector<double> two = {0.75, 0.75};
  std::vector<double> d = BernoulliSumDistribution(two);
  EXPECT_NEAR(d[0], 1.0 / 16, 1e-16);
  EXPECT_NEAR(d[1], 6.0 / 16, 1e-16);
  EXPECT_NEAR(d[2], 9.0 / 16, 1e-16);
  EXPECT_EQ(BernoulliSumDistribution({}), (std::vector<double>{1.0}));
}

TEST(BernoulliSumTest, OrderInvariant) {
  std::vector<double> p = {0.1, 0.9, 0.3, 0.55, 0.2, 0.7};
  std::vector<double> a = BernoulliSumDistribution(p);
  std::reverse(p.begin(), p.end());
  std::vector<double> b = BernoulliSumDistribution(p);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-16);
}

TEST(ConvolutionDistributionTest, SingleUser) {
  const double eps0 = 0.8;
  const double p = std::exp(eps0) / (std::exp(eps0) + 1.0);
  auto d = ConvolutionDistribution(MakeInstance(1, 2, eps0, 0), true);
  ASSERT_TRUE(d.ok());
  EXPECT_NEAR(d->probs[0], 1 - p, 1e-16);
  EXPECT_NEAR(d->probs[1], p, 1e-16);
}

TEST(ConvolutionDistributionTest, TwoUsersBinaryAlphabet) {
  auto d = ConvolutionDistribution(MakeInstance(2, 2, std::log(3.0), 1), true);
  ASSERT_TRUE(d.ok());
  EXPECT_NEAR(d->probs[0], 1.0 / 16, 1e-16);
  EXPECT_NEAR(d->probs[1], 6.0 / 16, 1e-16);
  EXPECT_NEAR(d->probs[2], 9.0 / 16, 1e-16);
}

TEST(ConvolutionDistributionTest, NormalizedAndPrecisionsAgree) {
  ShuffleInstance inst = MakeInstance(500, 7, 1.5, 100);
  auto plain = ConvolutionDistribution(inst, false);
  auto extended =
      ConvolutionDistribution(inst, false, OraclePrecision::kExtended);
  ASSERT_TRUE(plain.ok());
  double sum = std::accumulate(plain->probs.begin(), plain->probs.end(), 0.0);
  EXPECT_NEAR(sum, 1.0, 1e-12);
  for (size_t s = 0; s < plain->probs.size(); ++s) {
    EXPECT_GE(plain->probs[s], 0.0);
    if (extended->probs[s] > 1e-290) {
      EXPECT_NEAR(plain->probs[s] / extended->probs[s], 1.0, 1e-11) << s;
    }
  }
}

TEST(ConvolutionDistributionTest, RejectsOversizedInstance) {
  auto d = ConvolutionDistribution(
      MakeInstance(kMaxExactOracleUsers + 1, 3, 1.0, 0), true);
  EXPECT_EQ(d.status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(ExhaustiveTightDeltaTest, MatchesClosedForm) {
  ShuffleInstance inst = MakeInstance(6, 3, 1.0, 2);
  auto delta = ExhaustiveTightDelta(inst, 0.2);
  ASSERT_TRUE(delta.ok());
  EXPECT_NEAR(*delta, 0.068360105803333120712, 1e-12);
}

TEST(ExhaustiveTightDeltaTest, LargeEpsilonIsZero) {
  EXPECT_EQ(*ExhaustiveTightDelta(MakeInstance(10, 3, 1.0, 4), 1.5), 0.0);
}

TEST(ExhaustiveTightDeltaTest, SmallEpsilonLimit) {
  ShuffleInstance inst = MakeInstance(10, 3, 1.0, 4);
  auto primary = ConvolutionDistribution(inst, true);
  auto secondary = ConvolutionDistribution(inst, false);
  double limit = 0.0;
  for (size_t s = 0; s < primary->probs.size(); ++s) {
    double u = std::log(primary->probs[s] / secondary->probs[s]);
    if (u > 0) limit += -std::expm1(-u) * primary->probs[s];
  }
  EXPECT_GT(limit, 0.0);
  EXPECT_NEAR(*ExhaustiveTightDelta(inst, 1e-9), limit, 1e-8);
}

TEST(ExhaustiveTightDeltaTest, Validation) {
  EXPECT_FALSE(ExhaustiveTightDelta(MakeInstance(5, 3, 1.0, 1), 0.0).ok());
}

TEST(ChiSquareFitTest, RequiresEnoughSamples) {
  ExactDistribution expected{{0.5, 0.5}};
  std::vector<int64_t> samples(kMinChiSquareSamples - 1, 0);
  EXPECT_EQ(ChiSquareFit(samples, expected).status().code(),
            absl::StatusCode::kInvalidArgument);
  samples.assign(kMinChiSquareSamples, 2);
  EXPECT_FALSE(ChiSquareFit(samples, expected).ok());
}

TEST(ChiSquareFitTest, PoolsSparseBins) {
  // Tail bins with expected count < 5 are merged.
  ExactDistribution expected{{0.6, 0.3999, 0.0001}};
  std::vector<int64_t> samples;
  samples.insert(samples.end(), 6000, 0);
  samples.insert(samples.end(), 3999, 1);
  samples.insert(samples.end(), 1, 2);
  auto fit = ChiSquareFit(samples, expected);
  ASSERT_TRUE(fit.ok());
  EXPECT_EQ(fit->degrees_of_freedom, 1);
  EXPECT_NEAR(fit->statistic, 0.0, 1e-9);
  EXPECT_NEAR(fit->p_value, 1.0, 1e-6);
}

TEST(ChiSquareFitTest, CalibratedUnderNull) {
  // Repeated fits of samples drawn from the expected distribution should
  // reject at 0.001 rarely.
  ExactDistribution expected{{0.1, 0.2, 0.3, 0.4}};
  std::discrete_distribution<int> draw(expected.probs.begin(),
                                       expected.probs.end());
  Rng rng(2024);
  int rejections = 0;
  constexpr int kMetaTrials = 200;
  for (int t = 0; t < kMetaTrials; ++t) {
    std::vector<int64_t> samples(kMinChiSquareSamples);
    for (int64_t& s : samples) s = draw(rng);
    if (ChiSquareFit(samples, expected)->p_value < 1e-3) ++rejections;
  }
  EXPECT_LE(rejections, 2);
}

TEST(ChiSquareFitTest, DetectsShift) {
  ExactDistribution expected{{0.25, 0.25, 0.25, 0.25}};
  std::discrete_distribution<int> draw({0.22, 0.25, 0.25, 0.28});
  Rng rng(7);
  std::vector<int64_t> samples(100000);
  for (int64_t& s : samples) s = draw(rng);
  EXPECT_LT(ChiSquareFit(samples, expected)->p_value, 1e-3);
}

}  // namespace
}  // namespace shuffle_dp
