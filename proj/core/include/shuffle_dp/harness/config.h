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

#ifndef SHUFFLE_DP_HARNESS_CONFIG_H_
#define SHUFFLE_DP_HARNESS_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "shuffle_dp/accountant.h"
#include "shuffle_dp/mechanisms.h"

namespace shuffle_dp::harness {

// Bounding box partitioned into rows x cols cells; k = rows * cols. Cell index
// is row * cols + col with row 0 at min_lat and col 0 at min_lon.
struct GridSpec {
  double min_lat = 0.0;
  double max_lat = 1.0;
  double min_lon = 0.0;
  double max_lon = 1.0;
  int rows = 1;
  int cols = 1;

  int k() const { return rows * cols; }
  absl::Status Validate() const;
};

// Draws from N(mean, variance) discretized into k equal-width bins over
// [lower, upper]; draws outside the range land in the edge bins.
struct SyntheticSpec {
  double mean = 0.0;
  double variance = 2.0;
  double lower = -6.0;
  double upper = 6.0;
};

enum class DatasetKind { kSynthetic, kCategoricalCsv, kLocationCsv };

struct DatasetSource {
  DatasetKind kind = DatasetKind::kSynthetic;
  std::string path;
  GridSpec grid;
  SyntheticSpec synthetic;
};

enum class DeltaMode {
  kPrimaryAdp,  // tight ADP for the configured primary symbol x0
  kCommunity,   // maximum over candidate counts
};

// What to do when the shuffle delta is exactly 0 and a Gaussian comparator
// needs delta > 0.
enum class ZeroDeltaPolicy {
  kReject,
  kMinPositive,  // substitute the smallest positive normal double
};

struct ExperimentConfig {
  int64_t n = 1000;  // 0 with a CSV source: use every record
  int k = 15;        // synthetic sources only; CSV sources derive k
  double epsilon0 = 4.0;
  std::vector<double> epsilons = {4.0};
  std::optional<int64_t> count_x0;  // delta / sweep subcommands
  int x0 = 0;                       // primary symbol index
  int trials = 10;
  uint64_t seed = 1;
  DatasetSource source;
  DeltaMode delta_mode = DeltaMode::kCommunity;
  bool all_counts = false;
  LossFormula loss_formula = LossFormula::kExact;
  double l2_sensitivity = kHistogramL2Sensitivity;
  ZeroDeltaPolicy zero_delta = ZeroDeltaPolicy::kReject;
  // Test hooks for the noiseless limits.
  std::optional<double> sigma_override;
  std::optional<double> shuffle_epsilon0_override;
  int threads = 1;
  std::string reports_path;
  std::string summary_path;
  // Copied into every report. Left unset, reports carry null so that equal
  // configs give byte-identical output.
  std::optional<std::string> timestamp;

  absl::Status Validate() const;
};

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(std::string_view json);
absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path);
std::string ExperimentConfigToJson(const ExperimentConfig& config,
                                   int indent = -1);

std::string_view LossFormulaName(LossFormula formula);
absl::StatusOr<LossFormula> ParseLossFormula(std::string_view name);
std::string_view DeltaModeName(DeltaMode mode);
absl::StatusOr<DeltaMode> ParseDeltaMode(std::string_view name);
std::string_view ZeroDeltaPolicyName(ZeroDeltaPolicy policy);
absl::StatusOr<ZeroDeltaPolicy> ParseZeroDeltaPolicy(std::string_view name);
std::string_view DatasetKindName(DatasetKind kind);
absl::StatusOr<DatasetKind> ParseDatasetKind(std::string_view name);

}  // namespace shuffle_dp::harness

#endif  // SHUFFLE_DP_HARNESS_CONFIG_H_
