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

#include "shuffle_dp/accountant.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "shuffle_dp/histogram.h"
#include "shuffle_dp/oracles.h"

namespace shuffle_dp {
namespace {

ShuffleInstance MakeInstance(int64_t n, int k, double eps0, int64_t count) {
  auto instance = ShuffleInstance::Create(n, k, eps0, count);
  EXPECT_TRUE(instance.ok()) << instance.status();
  return *instance;
}

double RelativeError(double actual, double expected) {
  return std::abs(actual - expected) / std::abs(expected);
}

// Reference distributions for (n=6, k=3, eps0=1, count_x0=2), computed with
// 40-digit arithmetic from the Bernoulli-sum definition.
constexpr double kPrimaryN6[] = {
    0.037274654796836906638, 0.18205862112089999495, 0.33728135932259207727,
    0.29395353840002174173,  0.12328621557238505467, 0.02432515483053127705,
    0.0018204559567329477011};
constexpr double kSecondaryN6[] = {
    0.069298835796581227257, 0.26292307567288776824,
    0.36073337584194331441,  0.22485423954839471818,
    0.070574620022963551324, 0.010946144797189280401,
    0.00066970832004014018215};

TEST(ShuffleInstanceTest, Validation) {
  EXPECT_TRUE(ShuffleInstance::Create(1, 2, 0.5, 0).ok());
  EXPECT_FALSE(ShuffleInstance::Create(0, 2, 0.5, 0).ok());
  EXPECT_FALSE(ShuffleInstance::Create(5, 1, 0.5, 0).ok());
  EXPECT_FALSE(ShuffleInstance::Create(5, 2, 0.0, 0).ok());
  EXPECT_FALSE(ShuffleInstance::Create(5, 2, -1.0, 0).ok());
  EXPECT_FALSE(ShuffleInstance::Create(5, 2, NAN, 0).ok());
  EXPECT_FALSE(ShuffleInstance::Create(5, 2, 1.0, 5).ok());
  EXPECT_FALSE(ShuffleInstance::Create(5, 2, 1.0, -1).ok());
  auto instance = ShuffleInstance::Create(5, 2, 1.0, 4);
  ASSERT_TRUE(instance.ok());
  EXPECT_EQ(instance->remainder(), 1);
}

TEST(KappaConstantsTest, SmallAlphabetArithmetic) {
  auto kappa = ComputeKappaConstants(MakeInstance(4, 3, std::log(2.0), 1));
  ASSERT_TRUE(kappa.ok());
  EXPECT_NEAR(kappa->kappa1, 3.0, 1e-15);
  EXPECT_NEAR(kappa->kappa2, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(kappa->log_kappa1, std::log(3.0), 1e-15);
}

TEST(KappaConstantsTest, SingleUserKappa3) {
  auto kappa = ComputeKappaConstants(MakeInstance(1, 2, std::log(2.0), 0));
  ASSERT_TRUE(kappa.ok());
  EXPECT_NEAR(std::exp(kappa->Kappa3Log(1)), 1.0 / 3.0, 1e-15);
}

TEST(KappaConstantsTest, Kappa3LogAgainstExtendedPrecision) {
  // 80 ln 9 + 20 ln(e^2 + 8) - 100 ln(e^2 + 9); the exponent of the middle
  // factor is n - count_x0 - s = 20.
  auto kappa = ComputeKappaConstants(MakeInstance(100, 10, 2.0, 80));
  ASSERT_TRUE(kappa.ok());
  EXPECT_NEAR(kappa->Kappa3Log(0), -49.2102816395923744838, 1e-12);
  EXPECT_GT(kappa->kappa1, 0.0);
  EXPECT_GT(kappa->kappa2, 0.0);
}

TEST(OutputDistributionTest, SingleUserIsRandomizedResponse) {
  for (double eps0 : {0.1, 1.0, 3.0}) {
    ShuffleInstance inst = MakeInstance(1, 2, eps0, 0);
    auto primary = LogProbOutputGivenPrimary(inst, 1);
    auto secondary = LogProbOutputGivenSecondary(inst, 1);
    ASSERT_TRUE(primary.ok());
    ASSERT_TRUE(secondary.ok());
    EXPECT_NEAR(*primary, eps0 - std::log(std::exp(eps0) + 1.0), 1e-14);
    EXPECT_NEAR(*secondary, -std::log(std::exp(eps0) + 1.0), 1e-14);
  }
}

TEST(OutputDistributionTest, FrozenSmallInstance) {
  ShuffleInstance inst = MakeInstance(6, 3, 1.0, 2);
  for (int s = 0; s <= 6; ++s) {
    auto primary = LogProbOutputGivenPrimary(inst, s);
    auto secondary = LogProbOutputGivenSecondary(inst, s);
    ASSERT_TRUE(primary.ok());
    ASSERT_TRUE(secondary.ok());
    EXPECT_LE(RelativeError(std::exp(*primary), kPrimaryN6[s]), 1e-10)
        << "s=" << s;
    EXPECT_LE(RelativeError(std::exp(*secondary), kSecondaryN6[s]), 1e-10)
        << "s=" << s;
  }
}

TEST(OutputDistributionTest, OutOfRangeOutput) {
  ShuffleInstance inst = MakeInstance(6, 3, 1.0, 2);
  EXPECT_EQ(LogProbOutputGivenPrimary(inst, 7).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(LogProbOutputGivenSecondary(inst, -1).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(PrivacyLossValue(inst, 7).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(PrivacyLossTest, ZeroOutputIsLogKappa2) {
  ShuffleInstance inst = MakeInstance(20, 4, 1.5, 7);
  auto kappa = ComputeKappaConstants(inst);
  for (LossFormula f : {LossFormula::kExact, LossFormula::kLegacy}) {
    auto v = PrivacyLossValue(inst, 0, f);
    ASSERT_TRUE(v.ok());
    EXPECT_NEAR(*v, kappa->log_kappa2, 1e-14);
  }
}

TEST(PrivacyLossTest, LastOutputIsEpsilon0) {
  ShuffleInstance inst = MakeInstance(20, 4, 1.5, 7);
  auto v = PrivacyLossValue(inst, 20);
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(*v, 1.5);
}

TEST(PrivacyLossTest, FrozenLogRatio) {
  auto v = PrivacyLossValue(MakeInstance(6, 3, 1.0, 2), 3);
  ASSERT_TRUE(v.ok());
  EXPECT_NEAR(*v, 0.26796935415094117002, 1e-13);
  EXPECT_NEAR(*v, std::log(kPrimaryN6[3] / kSecondaryN6[3]), 1e-13);
}

TEST(PrivacyLossTest, ExactFormMatchesLogRatio) {
  ShuffleInstance inst = MakeInstance(40, 5, 2.0, 13);
  for (int s = 0; s <= 40; ++s) {
    auto v = PrivacyLossValue(inst, s);
    auto lp = LogProbOutputGivenPrimary(inst, s);
    auto ls = LogProbOutputGivenSecondary(inst, s);
    EXPECT_NEAR(*v, *lp - *ls, 1e-10) << "s=" << s;
  }
}

TEST(PrivacyLossTest, LossesBoundedByEpsilon0) {
  ShuffleInstance inst = MakeInstance(60, 10, 2.5, 30);
  auto profile = PrivacyLossProfile::Compute(inst);
  ASSERT_TRUE(profile.ok());
  for (double v : profile->losses()) {
    EXPECT_LE(v, 2.5 + 1e-12);
    EXPECT_GE(v, -2.5 - 1e-12);
  }
}

TEST(TightDeltaAdpTest, FrozenExactValues) {
  ShuffleInstance inst = MakeInstance(100, 10, 2.0, 80);
  auto d01 = TightDeltaAdp(inst, 0.1);
  auto d10 = TightDeltaAdp(inst, 1.0);
  ASSERT_TRUE(d01.ok());
  ASSERT_TRUE(d10.ok());
  EXPECT_LE(RelativeError(d01->delta, 0.0061466762144252525766), 1e-9);
  EXPECT_LE(RelativeError(d10->delta, 2.698075450364331429e-18), 1e-9);
  EXPECT_NEAR(d01->log_delta, std::log(d01->delta), 1e-12);
  EXPECT_EQ(d01->count_x0, 80);
}

TEST(TightDeltaAdpTest, SmallInstanceFrozen) {
  auto d = TightDeltaAdp(MakeInstance(6, 3, 1.0, 2), 0.2);
  ASSERT_TRUE(d.ok());
  EXPECT_LE(RelativeError(d->delta, 0.068360105803333120712), 1e-12);
}

TEST(TightDeltaAdpTest, LegacyFormReferenceCell) {
  // The reference table value at (n=100, k=10, eps0=2, count_x0=80,
  // eps=0.1) is 2.49e-15, which only the legacy loss expression gives.
  DeltaOptions legacy{.formula = LossFormula::kLegacy};
  auto d = TightDeltaAdp(MakeInstance(100, 10, 2.0, 80), 0.1, legacy);
  ASSERT_TRUE(d.ok());
  EXPECT_LE(RelativeError(d->delta, 2.49e-15), 5e-3);
}

TEST(TightDeltaAdpTest, ZeroAtEpsilon0) {
  for (LossFormula f : {LossFormula::kExact, LossFormula::kLegacy}) {
    auto d = TightDeltaAdp(MakeInstance(100, 10, 3.0, 80), 3.0,
                           {.formula = f});
    ASSERT_TRUE(d.ok());
    EXPECT_EQ(d->delta, 0.0);
    EXPECT_EQ(d->log_delta, kNegativeInfinity);
  }
}

TEST(TightDeltaAdpTest, RejectsNonPositiveEpsilon) {
  ShuffleInstance inst = MakeInstance(10, 3, 1.0, 2);
  EXPECT_EQ(TightDeltaAdp(inst, 0.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(TightDeltaAdp(inst, -0.5).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(TightDeltaAdp(inst, NAN).ok());
}

TEST(TightDeltaAdpTest, ContributionsSumToDelta) {
  ShuffleInstance inst = MakeInstance(30, 4, 1.0, 10);
  auto d = TightDeltaAdp(inst, 0.3, {.keep_contributions = true});
  ASSERT_TRUE(d.ok());
  ASSERT_TRUE(d->contributions.has_value());
  double sum = 0.0;
  for (const LossContribution& c : *d->contributions) {
    EXPECT_GT(c.loss, 0.3);
    sum += c.contribution;
  }
  EXPECT_NEAR(sum, d->delta, 1e-15);
  auto without = TightDeltaAdp(inst, 0.3);
  EXPECT_FALSE(without->contributions.has_value());
}

TEST(TightDeltaAdpTest, MatchesPldRouteAtHalfCount) {
  ShuffleInstance inst = MakeInstance(50, 10, 2.0, 40);
  auto pld = BuildShufflePrivacyLossDistribution(inst);
  ASSERT_TRUE(pld.ok());
  for (double eps : {0.1, 0.5, 1.0, 1.5}) {
    auto closed = TightDeltaAdp(inst, eps);
    auto generic = TightDeltaFromPld(*pld, eps);
    ASSERT_TRUE(generic.ok());
    EXPECT_LE(RelativeError(*generic, closed->delta), 1e-9) << eps;
  }
}

TEST(PrivacyLossProfileTest, ReusedAcrossEpsilons) {
  ShuffleInstance inst = MakeInstance(100, 10, 2.0, 80);
  auto profile = PrivacyLossProfile::Compute(inst);
  ASSERT_TRUE(profile.ok());
  EXPECT_EQ(profile->losses().size(), 101u);
  EXPECT_EQ(profile->formula(), LossFormula::kExact);
  for (double eps : {0.1, 0.7, 1.9}) {
    auto a = profile->Delta(eps);
    auto b = TightDeltaAdp(inst, eps);
    EXPECT_EQ(a->delta, b->delta);
  }
}

TEST(TightDeltaDpTest, SingletonEqualsAdp) {
  const int64_t counts[] = {3};
  auto dp = TightDeltaDp(12, 4, 1.0, 0.4, counts);
  auto adp = TightDeltaAdp(MakeInstance(12, 4, 1.0, 3), 0.4);
  ASSERT_TRUE(dp.ok());
  EXPECT_EQ(dp->delta, adp->delta);
  EXPECT_EQ(dp->count_x0, 3);
}

TEST(TightDeltaDpTest, AllCountsMatchesOracleMaximum) {
  // Per-count deltas for (n=8, k=3, eps0=1, eps=0.5), 40-digit reference.
  constexpr double kPerCount[] = {
      0.0038799628293001446461, 0.0055804996977249154321,
      0.0061715184914620677521, 0.0057431415478140129521,
      0.0081658821725340975795, 0.0077067054395859710378,
      0.0092597356625194723604, 0.010928291173849791443};
  std::vector<int64_t> counts = {0, 1, 2, 3, 4, 5, 6, 7};
  auto dp = TightDeltaDp(8, 3, 1.0, 0.5, counts);
  ASSERT_TRUE(dp.ok());
  EXPECT_LE(RelativeError(dp->delta, 0.010928291173849791443), 1e-10);
  EXPECT_EQ(dp->count_x0, 7);
  for (int64_t c : counts) {
    auto adp = TightDeltaAdp(MakeInstance(8, 3, 1.0, c), 0.5);
    EXPECT_LE(RelativeError(adp->delta, kPerCount[c]), 1e-10);
    auto oracle = ExhaustiveTightDelta(MakeInstance(8, 3, 1.0, c), 0.5);
    EXPECT_LE(RelativeError(adp->delta, *oracle), 1e-10);
    EXPECT_GE(dp->delta, adp->delta);
  }
}

TEST(TightDeltaDpTest, Errors) {
  EXPECT_EQ(TightDeltaDp(8, 3, 1.0, 0.5, {}).status().code(),
            absl::StatusCode::kInvalidArgument);
  const int64_t bad[] = {8};
  EXPECT_FALSE(TightDeltaDp(8, 3, 1.0, 0.5, bad).ok());
}

TEST(TightDeltaDpTest, HistogramCandidates) {
  auto h = Histogram::Create({4, 0, 6});
  ASSERT_TRUE(h.ok());
  EXPECT_EQ(CandidateCountsFromHistogram(*h, CandidateCounts::kPresentSymbols),
            (std::vector<int64_t>{3, 5}));
  EXPECT_EQ(CandidateCountsFromHistogram(*h, CandidateCounts::kAllCounts)
                .size(),
            10u);
  auto community = TightDeltaDpForHistogram(*h, 1.0, 0.2);
  const int64_t counts[] = {3, 5};
  auto direct = TightDeltaDp(10, 3, 1.0, 0.2, counts);
  ASSERT_TRUE(community.ok());
  EXPECT_EQ(community->delta, direct->delta);
}

TEST(PrivacyLossDistributionTest, Validation) {
  EXPECT_TRUE(PrivacyLossDistribution::Create({{0.0, 1.0}}, 0.0).ok());
  EXPECT_FALSE(PrivacyLossDistribution::Create({{0.0, 0.5}}, 0.0).ok());
  EXPECT_FALSE(
      PrivacyLossDistribution::Create({{0.1, 0.5}, {0.1, 0.5}}, 0.0).ok());
  EXPECT_FALSE(PrivacyLossDistribution::Create(
                   {{std::numeric_limits<double>::infinity(), 1.0}}, 0.0)
                   .ok());
  EXPECT_FALSE(PrivacyLossDistribution::Create({{0.0, 1.5}}, -0.5).ok());
}

TEST(PrivacyLossDistributionTest, GenericRule) {
  auto zero = PrivacyLossDistribution::Create({{0.0, 1.0}}, 0.0);
  EXPECT_EQ(*TightDeltaFromPld(*zero, 0.5), 0.0);
  auto infinite = PrivacyLossDistribution::Create({{0.1, 0.7}}, 0.3);
  EXPECT_NEAR(*TightDeltaFromPld(*infinite, 0.5), 0.3, 1e-15);
  auto two = PrivacyLossDistribution::Create({{1.0, 0.5}, {-1.0, 0.5}}, 0.0);
  EXPECT_NEAR(*TightDeltaFromPld(*two, 0.25),
              0.5 * (1.0 - std::exp(-0.75)), 1e-15);
  EXPECT_FALSE(TightDeltaFromPld(*two, 0.0).ok());
}

TEST(PrivacyLossDistributionTest, BuiltFromSmallInstance) {
  ShuffleInstance inst = MakeInstance(6, 3, 1.0, 2);
  auto pld = BuildShufflePrivacyLossDistribution(inst);
  ASSERT_TRUE(pld.ok());
  EXPECT_EQ(pld->mass_at_infinity(), 0.0);
  double mass = 0.0;
  for (const PrivacyLossAtom& atom : pld->atoms()) mass += atom.mass;
  EXPECT_NEAR(mass, 1.0, 1e-12);
  EXPECT_LE(RelativeError(*TightDeltaFromPld(*pld, 0.2),
                          0.068360105803333120712),
            1e-9);
}

}  // namespace
}  // namespace shuffle_dp
