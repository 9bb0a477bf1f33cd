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

// Oracle cross-checks over a parameter grid, reported per invariant family.

#ifndef SHUFFLE_DP_HARNESS_VERIFY_H_
#define SHUFFLE_DP_HARNESS_VERIFY_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "shuffle_dp/accountant.h"

namespace shuffle_dp::harness {

enum class CountRule {
  kZero,  // count_x0 = 0
  kHalf,  // floor(n / 2), clamped to n - 1
  kLast,  // n - 1
};

struct LargeCase {
  int64_t n;
  int k;
  double epsilon0;
  int64_t count_x0;
};

struct VerifyGrid {
  std::vector<int64_t> ns;
  std::vector<int> ks;
  std::vector<double> epsilon0s;
  std::vector<CountRule> counts;
  // Epsilons for the exhaustive and distribution-route delta checks.
  std::vector<double> epsilons;
  // Epsilons for the monotonicity check, in increasing order.
  std::vector<double> monotone_epsilons;
  // Instances checked for normalization only.
  std::vector<LargeCase> large_cases;
  // Self-test: flips the sign of the closed-form loss and swaps the oracle
  // hypothesis, which must make the report fail.
  bool perturb = false;
};

// n in 1..30, k in 2..5, epsilon0 in {0.5, 1, 2}, the three count rules,
// epsilon in {0.1, 0.5, 1.0}, monotonicity over 0.1, 0.2, ..., 3.0.
VerifyGrid DefaultVerifyGrid();

// DefaultVerifyGrid() plus the (n = 10^4, k = 15, epsilon0 = 4) normalization
// case.
VerifyGrid FullVerifyGrid();

struct FamilyReport {
  std::string name;
  double tolerance = 0.0;
  int64_t checks = 0;
  int64_t failures = 0;
  double max_error = 0.0;
  std::string worst;  // parameters at the largest error
  bool passed() const { return failures == 0; }
};

struct VerifyReport {
  std::vector<FamilyReport> families;
  int64_t instances = 0;
  bool passed() const;
};

// Families: convolution (relative error of both output distributions),
// two_route (closed-form loss vs log-ratio), normalization, exhaustive_delta,
// pld_delta (generic rule on the built distribution) and monotone_delta.
// Invalid instances in the grid are skipped.
VerifyReport RunVerify(const VerifyGrid& grid);

void WriteVerifyJson(std::ostream& out, const VerifyReport& report);

}  // namespace shuffle_dp::harness

#endif  // SHUFFLE_DP_HARNESS_VERIFY_H_
