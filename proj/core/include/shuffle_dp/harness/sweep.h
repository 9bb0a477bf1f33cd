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

// Tight-delta parameter sweeps.

#ifndef SHUFFLE_DP_HARNESS_SWEEP_H_
#define SHUFFLE_DP_HARNESS_SWEEP_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "shuffle_dp/accountant.h"

namespace shuffle_dp::harness {

// Cartesian product of the parameter lists. The primary count is either
// fixed or a fraction of n (rounded to nearest, clamped to [0, n-1]).
struct SweepGrid {
  std::string block;
  std::vector<double> epsilon0s;
  std::vector<int64_t> ns;
  std::vector<int> ks;
  std::vector<double> epsilons;
  std::optional<int64_t> count_x0;
  std::optional<double> count_fraction;
};

struct SweepRow {
  std::string block;
  double epsilon0 = 0.0;
  int64_t n = 0;
  int k = 0;
  int64_t count_x0 = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double log_delta = 0.0;
};

// The three blocks of the reference delta table: varying epsilon0 in
// {1, 2, 3}, n in {50, 100, 150} and k in {5, 10, 15} around the defaults
// n = 100, k = 10, epsilon0 = 2, count_x0 = 80, for
// epsilon in {0.1, 0.5, ..., 3.0}. The n block scales the primary count as
// 0.8 n, which keeps count_x0 = 80 at n = 100 and is valid at n = 50.
std::vector<SweepGrid> ReferenceTablePreset();

// Each distinct instance is evaluated once and reused for every epsilon.
absl::StatusOr<std::vector<SweepRow>> RunSweep(
    std::span<const SweepGrid> grids,
    LossFormula formula = LossFormula::kExact);

// Shortest round-trip decimal; exact zeros print as "0".
std::string FormatDelta(double delta);

void WriteSweepCsv(std::ostream& out, std::span<const SweepRow> rows);
// One JSON object per row.
void WriteSweepJsonLines(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace shuffle_dp::harness

#endif  // SHUFFLE_DP_HARNESS_SWEEP_H_
