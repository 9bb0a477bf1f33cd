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

#include "shuffle_dp/log_math.h"

#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"

namespace shuffle_dp {
namespace {

TEST(LogFactorialTableTest, MatchesDirectValues) {
  LogFactorialTable table(100);
  EXPECT_EQ(table.max_index(), 100);
  EXPECT_DOUBLE_EQ(table.LogFactorial(0), 0.0);
  EXPECT_DOUBLE_EQ(table.LogFactorial(1), 0.0);
  EXPECT_NEAR(table.LogFactorial(5), std::log(120.0), 1e-14);
  EXPECT_NEAR(table.LogFactorial(100), 363.73937555556349014, 1e-11);
  EXPECT_NEAR(table.LogChoose(100, 37), 63.399446701494536535, 1e-11);
  EXPECT_NEAR(table.LogChoose(10, 3), std::log(120.0), 1e-13);
}

TEST(LogFactorialTableTest, OutOfRangeChooseIsMinusInfinity) {
  LogFactorialTable table(10);
  EXPECT_EQ(table.LogChoose(5, 6), kNegativeInfinity);
  EXPECT_EQ(table.LogChoose(5, -1), kNegativeInfinity);
  EXPECT_EQ(table.LogChoose(-1, 0), kNegativeInfinity);
  EXPECT_EQ(table.LogChoose(5, 0), 0.0);
  EXPECT_EQ(table.LogChoose(5, 5), 0.0);
}

TEST(LogSumTest, EmptyAndInfiniteTerms) {
  EXPECT_EQ(LogSumExp({}), kNegativeInfinity);
  std::vector<double> terms = {kNegativeInfinity, kNegativeInfinity};
  EXPECT_EQ(LogSumExp(terms), kNegativeInfinity);
  LogSumAccumulator acc;
  EXPECT_EQ(acc.Result(), kNegativeInfinity);
  acc.Add(kNegativeInfinity);
  EXPECT_EQ(acc.Result(), kNegativeInfinity);
}

TEST(LogSumTest, HandlesTermsFarBelowUnderflow) {
  // exp(-2000) underflows; the log-sum must not.
  std::vector<double> terms = {-2000.0, -2000.0, -2000.0 + std::log(2.0)};
  EXPECT_NEAR(LogSumExp(terms), -2000.0 + std::log(4.0), 1e-12);
  EXPECT_NEAR(LogAddExp(-1500.0, -1500.0), -1500.0 + std::log(2.0), 1e-12);
}

TEST(LogSumTest, AccumulatorMatchesBatch) {
  std::vector<double> terms;
  LogSumAccumulator acc;
  for (int i = 0; i < 200; ++i) {
    double t = -0.37 * i + std::sin(i) * 5.0;
    terms.push_back(t);
    acc.Add(t);
  }
  EXPECT_NEAR(acc.Result(), LogSumExp(terms), 1e-12);
}

TEST(LogSumTest, IncreasingTermsRescale) {
  LogSumAccumulator acc;
  acc.Add(0.0);
  acc.Add(700.0);
  acc.Add(705.0);
  EXPECT_NEAR(acc.Result(), 705.0 + std::log1p(std::exp(-5.0)), 1e-12);
}

TEST(LogStandardNormalCdfTest, FrozenValues) {
  // High-precision reference values.
  EXPECT_NEAR(LogStandardNormalCdf(0.0), -0.69314718055994530942, 1e-15);
  EXPECT_NEAR(LogStandardNormalCdf(3.0), -0.0013508099647481937988, 1e-15);
  EXPECT_NEAR(LogStandardNormalCdf(-5.0), -15.064998393988725736, 1e-12);
  EXPECT_NEAR(LogStandardNormalCdf(-29.5), -439.42947460915022775, 1e-10);
  EXPECT_NEAR(LogStandardNormalCdf(-30.5), -469.46273732291211439, 1e-10);
  EXPECT_NEAR(LogStandardNormalCdf(-40.0), -804.60844201375378817, 1e-10);
}

TEST(LogStandardNormalCdfTest, ContinuousAcrossSeriesSwitch) {
  double below = LogStandardNormalCdf(-30.0 - 1e-9);
  double above = LogStandardNormalCdf(-30.0 + 1e-9);
  EXPECT_NEAR(below, above, 1e-6);
  EXPECT_LT(below, above);
}

TEST(LogStandardNormalCdfTest, Limits) {
  EXPECT_EQ(LogStandardNormalCdf(std::numeric_limits<double>::infinity()),
            0.0);
  EXPECT_EQ(LogStandardNormalCdf(-std::numeric_limits<double>::infinity()),
            kNegativeInfinity);
  EXPECT_TRUE(std::isfinite(LogStandardNormalCdf(-1e5)));
}

TEST(LogExpPlusTest, MatchesDirect) {
  EXPECT_NEAR(LogExpPlus(3.0, 5.0), 3.2222914618605358742, 1e-14);
  EXPECT_NEAR(LogExpPlus(800.0, 9.0), 800.0, 1e-12);
  EXPECT_NEAR(LogExpPlus(0.0, 0.0), 0.0, 1e-15);
}

}  // namespace
}  // namespace shuffle_dp
