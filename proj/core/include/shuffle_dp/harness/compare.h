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

// Paired shuffle-vs-Gaussian utility experiments at matched (epsilon, delta).

#ifndef SHUFFLE_DP_HARNESS_COMPARE_H_
#define SHUFFLE_DP_HARNESS_COMPARE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "shuffle_dp/harness/config.h"
#include "shuffle_dp/mechanisms.h"
#include "shuffle_dp/metrics.h"

namespace shuffle_dp::harness {

// Independent generator for (trial, stream), derived from the master seed.
// Stream 0 draws the dataset, stream 1 the shuffle reports, and stream
// 2 + i the Gaussian noise at the i-th epsilon.
Rng MakeStream(uint64_t seed, uint64_t trial, uint64_t stream);

struct TrialDelta {
  int trial = 0;
  double epsilon = 0.0;
  double delta = 0.0;      // accountant output
  double delta_used = 0.0; // after the zero-delta policy
  int64_t count_x0 = -1;   // the maximizing primary count
};

struct ModelSummary {
  double epsilon = 0.0;
  MechanismModel model = MechanismModel::kShuffleInv;
  BoxStats tv;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> labels;
  std::string binning;
  int64_t dropped = 0;
  // Ordered by trial, then epsilon, then model.
  std::vector<UtilityReport> reports;
  std::vector<TrialDelta> deltas;
  std::vector<ModelSummary> summaries;
  std::vector<std::string> notes;
};

// Runs config.trials trials for every epsilon. For each trial a dataset is
// drawn (or sub-sampled), delta is computed from its histogram, and each
// requested model is evaluated. Output is independent of config.threads.
absl::StatusOr<ExperimentResult> RunExperiment(
    const ExperimentConfig& config, std::span<const MechanismModel> models);

// All three models.
absl::StatusOr<ExperimentResult> RunCompare(const ExperimentConfig& config);

}  // namespace shuffle_dp::harness

#endif  // SHUFFLE_DP_HARNESS_COMPARE_H_
