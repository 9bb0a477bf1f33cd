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

#ifndef SHUFFLE_DP_LOG_MATH_H_
#define SHUFFLE_DP_LOG_MATH_H_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace shuffle_dp {

inline constexpr double kNegativeInfinity =
    -std::numeric_limits<double>::infinity();

// Table of ln(i!) for i in [0, max_index], filled from std::lgamma so that each
// entry carries its own rounding error instead of a running-sum error.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(int64_t max_index);

  int64_t max_index() const {
    return static_cast<int64_t>(values_.size()) - 1;
  }

  double LogFactorial(int64_t i) const { return values_[i]; }

  // ln C(a, b). Returns -inf when b < 0, b > a or a < 0 (C(a, b) = 0).
  double LogChoose(int64_t a, int64_t b) const {
    if (a < 0 || b < 0 || b > a) return kNegativeInfinity;
    return values_[a] - values_[b] - values_[a - b];
  }

 private:
  std::vector<double> values_;
};

// Streaming log-sum-exp: Add(t) accumulates exp(t) without overflow.
class LogSumAccumulator {
 public:
  void Add(double log_term);
  // -inf if nothing (finite) was added.
  double Result() const;

 private:
  double max_ = kNegativeInfinity;
  double scaled_sum_ = 0.0;
};

// ln(sum_i exp(terms[i])). Empty input or all -inf terms give -inf.
double LogSumExp(std::span<const double> terms);

// ln(exp(a) + exp(b)).
double LogAddExp(double a, double b);

// ln Phi(x) for the standard normal CDF, accurate far into the lower tail
// where Phi(x) underflows a double.
double LogStandardNormalCdf(double x);

// Below this point LogStandardNormalCdf uses the asymptotic expansion
// ln Phi(x) = -x^2/2 - ln(-x) - ln(2 pi)/2 + LogMillsSeries(x).
inline constexpr double kNormalTailThreshold = -30.0;

// ln(1 - 1/x^2 + 3/x^4 - ... + 10395/x^12); truncation error ~1e-14 for
// x <= kNormalTailThreshold.
double LogMillsSeries(double x);

// ln(e^x + c) for c >= 0, without overflow for large x.
double LogExpPlus(double x, double c);

}  // namespace shuffle_dp

#endif  // SHUFFLE_DP_LOG_MATH_H_
