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

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shuffle_dp {

LogFactorialTable::LogFactorialTable(int64_t max_index)
    : values_(static_cast<size_t>(std::max<int64_t>(max_index, 0) + 1)) {
  for (size_t i = 0; i < values_.size(); ++i) {
    values_[i] = std::lgamma(static_cast<double>(i) + 1.0);
  }
}

void LogSumAccumulator::Add(double log_term) {
  if (log_term == kNegativeInfinity) return;
  if (log_term <= max_) {
    scaled_sum_ += std::exp(log_term - max_);
  } else {
    scaled_sum_ = scaled_sum_ * std::exp(max_ - log_term) + 1.0;
    max_ = log_term;
  }
}

double LogSumAccumulator::Result() const {
  if (max_ == kNegativeInfinity) return kNegativeInfinity;
  return max_ + std::log(scaled_sum_);
}

double LogSumExp(std::span<const double> terms) {
  double max_term = kNegativeInfinity;
  for (double t : terms) max_term = std::max(max_term, t);
  if (max_term == kNegativeInfinity) return kNegativeInfinity;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - max_term);
  return max_term + std::log(sum);
}

double LogAddExp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegativeInfinity) return a;
  return a + std::log1p(std::exp(b - a));
}

double LogMillsSeries(double x) {
  const double inv_x2 = 1.0 / (x * x);
  double series = 0.0;
  double term = 1.0;
  for (int j = 1; j <= 6; ++j) {
    term *= -(2.0 * j - 1.0) * inv_x2;
    series += term;
  }
  return std::log1p(series);
}

double LogStandardNormalCdf(double x) {
  // Above the threshold erfc is still far from underflow.
  if (x >= kNormalTailThreshold) {
    if (x > 0) {
      return std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2));
    }
    return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  }
  return -0.5 * x * x - std::log(-x) -
         0.5 * std::log(2.0 * std::numbers::pi) + LogMillsSeries(x);
}

double LogExpPlus(double x, double c) {
  if (c == 0.0) return x;
  if (x > 0) return x + std::log1p(c * std::exp(-x));
  return std::log(std::exp(x) + c);
}

}  // namespace shuffle_dp
