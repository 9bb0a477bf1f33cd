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

// Randomized property checks over generated instances. Each property draws
// its cases from a fixed seed so failures reproduce.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "absl/strings/str_format.h"
#include "gtest/gtest.h"
#include "shuffle_dp/accountant.h"
#include "shuffle_dp/estimation.h"
#include "shuffle_dp/log_math.h"
#include "shuffle_dp/oracles.h"

namespace shuffle_dp {
namespace {

constexpr int kCases = 60;

struct Case {
  int64_t n;
  int k;
  double epsilon0;
  int64_t count_x0;

  std::string ToString() const {
    return absl::StrFormat("n=%d k=%d eps0=%.17g count_x0=%d", n, k, epsilon0,
                           count_x0);
  }
};

class CaseGenerator {
 public:
  explicit CaseGenerator(uint64_t seed, int64_t max_n = 200)
      : rng_(seed), max_n_(max_n) {}

  Case Next() {
    std::uniform_int_distribution<int64_t> n_dist(1, max_n_);
    std::uniform_int_distribution<int> k_dist(2, 20);
    // Log-uniform epsilon0 in [0.05, 6].
    std::uniform_real_distribution<double> log_eps(std::log(0.05),
                                                   std::log(6.0));
    Case c;
    c.n = n_dist(rng_);
    c.k = k_dist(rng_);
    c.epsilon0 = std::exp(log_eps(rng_));
    std::uniform_int_distribution<int64_t> count_dist(0, c.n - 1);
    c.count_x0 = count_dist(rng_);
    return c;
  }

  double Epsilon() {
    std::uniform_real_distribution<double> eps(0.01, 4.0);
    return eps(rng_);
  }

 private:
  std::mt19937_64 rng_;
  int64_t max_n_;
};

ShuffleInstance Make(const Case& c) {
  return *ShuffleInstance::Create(c.n, c.k, c.epsilon0, c.count_x0);
}

TEST(AccountantPropertyTest, DistributionsNormalized) {
  CaseGenerator gen(101, 2000);
  for (int i = 0; i < kCases; ++i) {
    Case c = gen.Next();
    auto profile = PrivacyLossProfile::Compute(Make(c));
    ASSERT_TRUE(profile.ok()) << c.ToString();
    EXPECT_NEAR(std::exp(LogSumExp(profile->log_prob_primary())), 1.0, 1e-9)
        << c.ToString();
    EXPECT_NEAR(std::exp(LogSumExp(profile->log_prob_secondary())), 1.0, 1e-9)
        << c.ToString();
  }
}

TEST(AccountantPropertyTest, LossIsLogRatio) {
  CaseGenerator gen(202);
  for (int i = 0; i < kCases; ++i) {
    Case c = gen.Next();
    auto profile = PrivacyLossProfile::Compute(Make(c));
    ASSERT_TRUE(profile.ok());
    for (int64_t s = 0; s <= c.n; ++s) {
      const double ratio =
          profile->log_prob_primary()[s] - profile->log_prob_secondary()[s];
      // Both sides difference log-probabilities that can reach |.| ~ 1e2.
      const double scale =
          std::max({1.0, std::abs(profile->log_prob_primary()[s]),
                    std::abs(profile->log_prob_secondary()[s])});
      ASSERT_NEAR(profile->losses()[s], ratio, 1e-10 * scale)
          << c.ToString() << " s=" << s;
    }
  }
}

TEST(AccountantPropertyTest, DeltaBoundedAndMonotone) {
  CaseGenerator gen(303);
  for (int i = 0; i < kCases; ++i) {
    Case c = gen.Next();
    auto profile = PrivacyLossProfile::Compute(Make(c));
    ASSERT_TRUE(profile.ok());
    std::vector<double> eps;
    for (int j = 0; j < 8; ++j) eps.push_back(gen.Epsilon());
    std::sort(eps.begin(), eps.end());
    double previous = 1.0;
    for (double e : eps) {
      double d = profile->Delta(e)->delta;
      EXPECT_GE(d, 0.0);
      EXPECT_LE(d, previous) << c.ToString() << " eps=" << e;
      previous = d;
    }
    // Losses never exceed eps0, so delta vanishes from eps0 on.
    EXPECT_EQ(profile->Delta(c.epsilon0)->delta, 0.0) << c.ToString();
  }
}

TEST(AccountantPropertyTest, AgreesWithConvolutionOracle) {
  CaseGenerator gen(404, 60);
  for (int i = 0; i < kCases; ++i) {
    Case c = gen.Next();
    ShuffleInstance inst = Make(c);
    const double e = gen.Epsilon();
    auto closed = TightDeltaAdp(inst, e);
    auto brute = ExhaustiveTightDelta(inst, e);
    ASSERT_TRUE(closed.ok());
    ASSERT_TRUE(brute.ok());
    EXPECT_NEAR(closed->delta, *brute, 1e-9) << c.ToString() << " eps=" << e;
  }
}

TEST(AccountantPropertyTest, DpDominatesEveryCount) {
  CaseGenerator gen(505, 40);
  for (int i = 0; i < 20; ++i) {
    Case c = gen.Next();
    const double e = gen.Epsilon();
    std::vector<int64_t> counts(c.n);
    for (int64_t j = 0; j < c.n; ++j) counts[j] = j;
    auto dp = TightDeltaDp(c.n, c.k, c.epsilon0, e, counts);
    ASSERT_TRUE(dp.ok());
    for (int64_t j : counts) {
      auto adp = ShuffleInstance::Create(c.n, c.k, c.epsilon0, j);
      EXPECT_GE(dp->delta, TightDeltaAdp(*adp, e)->delta);
    }
  }
}

TEST(EstimationPropertyTest, InverseUndoesChannel) {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> k_dist(2, 30);
  std::uniform_real_distribution<double> eps_dist(0.2, 6.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < kCases; ++i) {
    const int k = k_dist(rng);
    const double eps0 = eps_dist(rng);
    std::vector<double> pi(k);
    double total = 0.0;
    for (double& p : pi) total += (p = unit(rng));
    for (double& p : pi) p /= total;
    auto channel = KrrChannel(k, eps0);
    auto inverse = KrrChannelInverse(k, eps0);
    std::vector<double> back = inverse->ApplyToRow(channel->ApplyToRow(pi));
    for (int j = 0; j < k; ++j) {
      EXPECT_NEAR(back[j], pi[j], 1e-10) << "k=" << k << " eps0=" << eps0;
    }
  }
}

TEST(OraclePropertyTest, ConvolutionOrderInvariant) {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> probs(25);
    for (double& p : probs) p = unit(rng);
    std::vector<double> a = BernoulliSumDistribution(probs);
    std::shuffle(probs.begin(), probs.end(), rng);
    std::vector<double> b = BernoulliSumDistribution(probs);
    for (size_t s = 0; s < a.size(); ++s) {
      EXPECT_NEAR(a[s], b[s], 1e-14 + 1e-12 * a[s]);
    }
  }
}

}  // namespace
}  // namespace shuffle_dp
