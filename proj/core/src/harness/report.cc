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

#include "shuffle_dp/harness/report.h"

#include <fstream>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "shuffle_dp/harness/csv.h"
#include "shuffle_dp/harness/sweep.h"
#include "src/harness/json_util.h"

namespace shuffle_dp::harness {
namespace {

using Json = nlohmann::ordered_json;

Json OptionalNumber(const std::optional<double>& value) {
  return value.has_value() ? internal::NumberOrString(*value) : Json(nullptr);
}

Json Notes(const ExperimentResult& result) {
  Json notes = Json::array();
  if (!result.binning.empty()) notes.push_back(result.binning);
  if (result.dropped > 0) {
    notes.push_back(absl::StrCat(result.dropped,
                                 " points outside the bounding box dropped"));
  }
  for (const std::string& note : result.notes) notes.push_back(note);
  return notes;
}

}  // namespace

void WriteReportsJsonLines(std::ostream& out, const ExperimentResult& result) {
  const Json config = internal::ConfigToJsonValue(result.config);
  const Json notes = Notes(result);
  for (const UtilityReport& r : result.reports) {
    Json j;
    j["model"] = std::string(ModelName(r.model));
    j["epsilon"] = r.epsilon;
    j["delta"] = r.delta;
    j["epsilon0"] = OptionalNumber(r.epsilon0);
    j["sigma"] = OptionalNumber(r.sigma);
    j["n"] = r.n;
    j["k"] = r.k;
    j["seed"] = r.seed;
    j["trial"] = r.trial;
    j["tv_distance"] = r.tv_distance;
    j["tv_distance_projected"] = OptionalNumber(r.tv_distance_projected);
    j["individual"] = r.individual;
    j["individual_normalized"] = r.individual_normalized;
    j["timestamp"] = result.config.timestamp.has_value()
                         ? Json(*result.config.timestamp)
                         : Json(nullptr);
    j["config"] = config;
    j["notes"] = notes;
    out << j.dump() << '\n';
  }
}

void WriteSummaryCsv(std::ostream& out, const ExperimentResult& result) {
  const std::vector<std::string> header = {
      "epsilon", "model", "count", "min", "q1", "median", "q3", "max"};
  WriteCsvRow(out, header);
  for (const ModelSummary& s : result.summaries) {
    std::vector<std::string> row = {
        FormatDelta(s.epsilon),  std::string(ModelName(s.model)),
        absl::StrCat(s.tv.count), FormatDelta(s.tv.min),
        FormatDelta(s.tv.q1),     FormatDelta(s.tv.median),
        FormatDelta(s.tv.q3),     FormatDelta(s.tv.max)};
    WriteCsvRow(out, row);
  }
}

void WriteDeltasCsv(std::ostream& out, const ExperimentResult& result) {
  const std::vector<std::string> header = {"trial", "epsilon", "delta",
                                           "delta_used", "count_x0"};
  WriteCsvRow(out, header);
  for (const TrialDelta& d : result.deltas) {
    std::vector<std::string> row = {
        absl::StrCat(d.trial), FormatDelta(d.epsilon), FormatDelta(d.delta),
        FormatDelta(d.delta_used), absl::StrCat(d.count_x0)};
    WriteCsvRow(out, row);
  }
}

std::string MetadataJson(const ExperimentConfig& config,
                         std::span<const std::string> notes) {
  Json j;
  j["config"] = internal::ConfigToJsonValue(config);
  j["notes"] = Json(std::vector<std::string>(notes.begin(), notes.end()));
  return j.dump(2);
}

absl::Status WriteSidecar(const std::string& csv_path,
                          const ExperimentConfig& config,
                          std::span<const std::string> notes) {
  const std::string path = csv_path + ".config.json";
  std::ofstream out(path);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write '", path, "'"));
  }
  out << MetadataJson(config, notes) << '\n';
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace shuffle_dp::harness
