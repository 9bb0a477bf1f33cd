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

#include "shuffle_dp/harness/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "src/harness/json_util.h"

namespace shuffle_dp::harness {
namespace {

using Json = nlohmann::json;

template <typename T>
absl::Status Read(const Json& object, const char* key, T& out) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return absl::OkStatus();
  try {
    out = it->get<T>();
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config key '", key, "': ", e.what()));
  }
  return absl::OkStatus();
}

template <typename T>
absl::Status ReadOptional(const Json& object, const char* key,
                          std::optional<T>& out) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return absl::OkStatus();
  T value{};
  if (absl::Status st = Read(object, key, value); !st.ok()) return st;
  out = value;
  return absl::OkStatus();
}

// Reads a string-valued enum through `parse`.
template <typename Enum, typename Parser>
absl::Status ReadEnum(const Json& object, const char* key, Parser parse,
                      Enum& out) {
  std::string name;
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return absl::OkStatus();
  if (absl::Status st = Read(object, key, name); !st.ok()) return st;
  absl::StatusOr<Enum> value = parse(name);
  if (!value.ok()) return value.status();
  out = *value;
  return absl::OkStatus();
}

absl::Status RejectUnknownKeys(const Json& object,
                               const std::set<std::string>& known,
                               std::string_view where) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    if (!known.contains(it.key())) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown key '", it.key(), "' in ", std::string(where)));
    }
  }
  return absl::OkStatus();
}

absl::Status ParseSource(const Json& object, DatasetSource& source) {
  if (!object.is_object()) {
    return absl::InvalidArgumentError("'source' must be an object");
  }
  if (absl::Status st = RejectUnknownKeys(
          object, {"kind", "path", "grid", "synthetic"}, "source");
      !st.ok()) {
    return st;
  }
  absl::Status st = ReadEnum(object, "kind", ParseDatasetKind, source.kind);
  if (st.ok()) st = Read(object, "path", source.path);
  if (!st.ok()) return st;
  if (auto it = object.find("grid"); it != object.end()) {
    if (st = RejectUnknownKeys(*it,
                               {"min_lat", "max_lat", "min_lon", "max_lon",
                                "rows", "cols"},
                               "source.grid");
        !st.ok()) {
      return st;
    }
    GridSpec& g = source.grid;
    for (absl::Status s :
         {Read(*it, "min_lat", g.min_lat), Read(*it, "max_lat", g.max_lat),
          Read(*it, "min_lon", g.min_lon), Read(*it, "max_lon", g.max_lon),
          Read(*it, "rows", g.rows), Read(*it, "cols", g.cols)}) {
      if (!s.ok()) return s;
    }
  }
  if (auto it = object.find("synthetic"); it != object.end()) {
    if (st = RejectUnknownKeys(*it, {"mean", "variance", "lower", "upper"},
                               "source.synthetic");
        !st.ok()) {
      return st;
    }
    SyntheticSpec& s = source.synthetic;
    for (absl::Status r :
         {Read(*it, "mean", s.mean), Read(*it, "variance", s.variance),
          Read(*it, "lower", s.lower), Read(*it, "upper", s.upper)}) {
      if (!r.ok()) return r;
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status GridSpec::Validate() const {
  if (!(min_lat < max_lat) || !(min_lon < max_lon)) {
    return absl::InvalidArgumentError("grid bounding box is degenerate");
  }
  if (rows < 1 || cols < 1) {
    return absl::InvalidArgumentError("grid rows and cols must be >= 1");
  }
  if (k() < 2) {
    return absl::InvalidArgumentError("grid must have at least 2 cells");
  }
  return absl::OkStatus();
}

absl::Status ExperimentConfig::Validate() const {
  const bool csv = source.kind != DatasetKind::kSynthetic;
  if (n < 0 || (n == 0 && !csv)) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  if (source.kind == DatasetKind::kSynthetic) {
    if (k < 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("k must be >= 2, got ", k));
    }
    if (!(source.synthetic.lower < source.synthetic.upper) ||
        !(source.synthetic.variance > 0)) {
      return absl::InvalidArgumentError("invalid synthetic distribution");
    }
  }
  if (source.kind == DatasetKind::kLocationCsv) {
    if (absl::Status st = source.grid.Validate(); !st.ok()) return st;
  }
  if (csv && source.path.empty()) {
    return absl::InvalidArgumentError("CSV source requires a path");
  }
  if (!(epsilon0 > 0) || !std::isfinite(epsilon0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon0 must be finite and > 0, got ", epsilon0));
  }
  if (epsilons.empty()) {
    return absl::InvalidArgumentError("epsilon grid is empty");
  }
  for (double e : epsilons) {
    if (!(e > 0) || !std::isfinite(e)) {
      return absl::InvalidArgumentError(
          absl::StrCat("epsilon must be finite and > 0, got ", e));
    }
  }
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("trials must be >= 1, got ", trials));
  }
  if (x0 < 0) return absl::InvalidArgumentError("x0 must be >= 0");
  if (count_x0.has_value() && *count_x0 < 0) {
    return absl::InvalidArgumentError("count_x0 must be >= 0");
  }
  if (!(l2_sensitivity > 0) || !std::isfinite(l2_sensitivity)) {
    return absl::InvalidArgumentError("l2_sensitivity must be > 0");
  }
  if (sigma_override.has_value() && !(*sigma_override > 0)) {
    return absl::InvalidArgumentError("sigma_override must be > 0");
  }
  if (shuffle_epsilon0_override.has_value() &&
      !(*shuffle_epsilon0_override > 0)) {
    return absl::InvalidArgumentError("shuffle_epsilon0_override must be > 0");
  }
  if (threads < 1) return absl::InvalidArgumentError("threads must be >= 1");
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config is not valid JSON: ", e.what()));
  }
  if (!root.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  if (absl::Status st = RejectUnknownKeys(
          root,
          {"n", "k", "epsilon0", "epsilons", "count_x0", "x0", "trials",
           "seed", "source", "delta_mode", "all_counts", "loss_formula",
           "l2_sensitivity", "zero_delta", "sigma_override",
           "shuffle_epsilon0_override", "threads", "reports_path",
           "summary_path", "timestamp"},
          "config");
      !st.ok()) {
    return st;
  }
  ExperimentConfig config;
  for (absl::Status st : {
           Read(root, "n", config.n),
           Read(root, "k", config.k),
           Read(root, "epsilon0", config.epsilon0),
           Read(root, "epsilons", config.epsilons),
           ReadOptional(root, "count_x0", config.count_x0),
           Read(root, "x0", config.x0),
           Read(root, "trials", config.trials),
           Read(root, "seed", config.seed),
           ReadEnum(root, "delta_mode", ParseDeltaMode, config.delta_mode),
           Read(root, "all_counts", config.all_counts),
           ReadEnum(root, "loss_formula", ParseLossFormula,
                    config.loss_formula),
           Read(root, "l2_sensitivity", config.l2_sensitivity),
           ReadEnum(root, "zero_delta", ParseZeroDeltaPolicy,
                    config.zero_delta),
           ReadOptional(root, "sigma_override", config.sigma_override),
           ReadOptional(root, "shuffle_epsilon0_override",
                        config.shuffle_epsilon0_override),
           Read(root, "threads", config.threads),
           Read(root, "reports_path", config.reports_path),
           Read(root, "summary_path", config.summary_path),
           ReadOptional(root, "timestamp", config.timestamp),
       }) {
    if (!st.ok()) return st;
  }
  if (auto it = root.find("source"); it != root.end()) {
    if (absl::Status st = ParseSource(*it, config.source); !st.ok()) return st;
  }
  return config;
}

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open config '", path, "'"));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(buffer.str());
}

namespace internal {

nlohmann::ordered_json NumberOrString(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

nlohmann::ordered_json ConfigToJsonValue(const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["n"] = config.n;
  j["k"] = config.k;
  j["epsilon0"] = config.epsilon0;
  j["epsilons"] = config.epsilons;
  j["count_x0"] = config.count_x0.has_value()
                      ? nlohmann::ordered_json(*config.count_x0)
                      : nlohmann::ordered_json(nullptr);
  j["x0"] = config.x0;
  j["trials"] = config.trials;
  j["seed"] = config.seed;
  nlohmann::ordered_json source;
  source["kind"] = DatasetKindName(config.source.kind);
  source["path"] = config.source.path;
  const GridSpec& g = config.source.grid;
  source["grid"] = {{"min_lat", g.min_lat}, {"max_lat", g.max_lat},
                    {"min_lon", g.min_lon}, {"max_lon", g.max_lon},
                    {"rows", g.rows},       {"cols", g.cols}};
  const SyntheticSpec& s = config.source.synthetic;
  source["synthetic"] = {{"mean", s.mean},
                         {"variance", s.variance},
                         {"lower", s.lower},
                         {"upper", s.upper}};
  j["source"] = source;
  j["delta_mode"] = DeltaModeName(config.delta_mode);
  j["all_counts"] = config.all_counts;
  j["loss_formula"] = LossFormulaName(config.loss_formula);
  j["l2_sensitivity"] = config.l2_sensitivity;
  j["zero_delta"] = ZeroDeltaPolicyName(config.zero_delta);
  j["sigma_override"] = config.sigma_override.has_value()
                            ? NumberOrString(*config.sigma_override)
                            : nlohmann::ordered_json(nullptr);
  j["shuffle_epsilon0_override"] =
      config.shuffle_epsilon0_override.has_value()
          ? NumberOrString(*config.shuffle_epsilon0_override)
          : nlohmann::ordered_json(nullptr);
  j["threads"] = config.threads;
  j["reports_path"] = config.reports_path;
  j["summary_path"] = config.summary_path;
  j["timestamp"] = config.timestamp.has_value()
                       ? nlohmann::ordered_json(*config.timestamp)
                       : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace internal

std::string ExperimentConfigToJson(const ExperimentConfig& config,
                                   int indent) {
  return internal::ConfigToJsonValue(config).dump(indent);
}

std::string_view LossFormulaName(LossFormula formula) {
  return formula == LossFormula::kExact ? "exact" : "legacy";
}

absl::StatusOr<LossFormula> ParseLossFormula(std::string_view name) {
  if (name == "exact") return LossFormula::kExact;
  if (name == "legacy") return LossFormula::kLegacy;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown loss formula '", std::string(name), "' (exact|legacy)"));
}

std::string_view DeltaModeName(DeltaMode mode) {
  return mode == DeltaMode::kPrimaryAdp ? "adp" : "community";
}

absl::StatusOr<DeltaMode> ParseDeltaMode(std::string_view name) {
  if (name == "adp") return DeltaMode::kPrimaryAdp;
  if (name == "community") return DeltaMode::kCommunity;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown delta mode '", std::string(name), "' (adp|community)"));
}

std::string_view ZeroDeltaPolicyName(ZeroDeltaPolicy policy) {
  return policy == ZeroDeltaPolicy::kReject ? "reject" : "min-positive";
}

absl::StatusOr<ZeroDeltaPolicy> ParseZeroDeltaPolicy(std::string_view name) {
  if (name == "reject") return ZeroDeltaPolicy::kReject;
  if (name == "min-positive") return ZeroDeltaPolicy::kMinPositive;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown zero-delta policy '", std::string(name), "' (reject|min-positive)"));
}

std::string_view DatasetKindName(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kSynthetic:
      return "synthetic";
    case DatasetKind::kCategoricalCsv:
      return "categorical";
    case DatasetKind::kLocationCsv:
      return "location";
  }
  return "synthetic";
}

absl::StatusOr<DatasetKind> ParseDatasetKind(std::string_view name) {
  if (name == "synthetic") return DatasetKind::kSynthetic;
  if (name == "categorical") return DatasetKind::kCategoricalCsv;
  if (name == "location") return DatasetKind::kLocationCsv;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown dataset kind '", std::string(name), "' (synthetic|categorical|location)"));
}

}  // namespace shuffle_dp::harness
