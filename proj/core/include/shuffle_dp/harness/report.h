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

// Machine-readable output for experiment results.

#ifndef SHUFFLE_DP_HARNESS_REPORT_H_
#define SHUFFLE_DP_HARNESS_REPORT_H_

#include <ostream>
#include <span>
#include <string>

#include "absl/status/status.h"
#include "shuffle_dp/harness/compare.h"
#include "shuffle_dp/harness/config.h"
#include "shuffle_dp/metrics.h"

namespace shuffle_dp::harness {

// One JSON object per line with keys model, epsilon, delta, epsilon0, sigma,
// n, k, seed, trial, tv_distance, individual, individual_normalized,
// timestamp, plus the resolved config and result notes.
void WriteReportsJsonLines(std::ostream& out, const ExperimentResult& result);

// epsilon, model, count, min, q1, median, q3, max of the TV distance.
void WriteSummaryCsv(std::ostream& out, const ExperimentResult& result);

// Per-trial delta table: trial, epsilon, delta, delta_used, count_x0.
void WriteDeltasCsv(std::ostream& out, const ExperimentResult& result);

// Config plus free-form notes, written next to CSV outputs.
std::string MetadataJson(const ExperimentConfig& config,
                         std::span<const std::string> notes);

// Writes MetadataJson to `csv_path + ".config.json"`.
absl::Status WriteSidecar(const std::string& csv_path,
                          const ExperimentConfig& config,
                          std::span<const std::string> notes);

}  // namespace shuffle_dp::harness

#endif  // SHUFFLE_DP_HARNESS_REPORT_H_
