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

#include "shuffle_dp/harness/sweep.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "shuffle_dp/harness/csv.h"
#include "src/harness/json_util.h"

namespace shuffle_dp::harness {
namespace {

const std::vector<double>& ReferenceEpsilons() {
  static const auto* const kEpsilons =
      new std::vector<double>{0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  return *kEpsilons;
}

absl::StatusOr<int64_t> ResolveCount(const SweepGrid& grid, int64_t n) {
  if (grid.count_x0.has_value()) return *grid.count_x0;
  if (grid.count_fraction.has_value()) {
    double f = *grid.count_fraction;
    if (!(f >= 0.0 && f <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("count fraction must be in [0, 1], got ", f));
    }
    int64_t count = std::llround(f * static_cast<double>(n));
    return std::clamp<int64_t>(count, 0, n - 1);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("sweep block '", grid.block, "' has no primary count"));
}

}  // namespace

std::vector<SweepGrid> ReferenceTablePreset() {
  const std::vector<double>& eps = ReferenceEpsilons();
  return {
      SweepGrid{"epsilon0", {1.0, 2.0, 3.0}, {100}, {10}, eps, 80, {}},
      SweepGrid{"n", {2.0}, {50, 100, 150}, {10}, eps, {}, 0.8},
      SweepGrid{"k", {2.0}, {100}, {5, 10, 15}, eps, 80, {}},
  };
}

absl::StatusOr<std::vector<SweepRow>> RunSweep(
    std::span<const SweepGrid> grids, LossFormula formula) {
  std::map<std::tuple<int64_t, int, double, int64_t>, PrivacyLossProfile>
      cache;
  std::vector<SweepRow> rows;
  for (const SweepGrid& grid : grids) {
    for (double epsilon0 : grid.epsilon0s) {
      for (int64_t n : grid.ns) {
        for (int k : grid.ks) {
          absl::StatusOr<int64_t> count = ResolveCount(grid, n);
          if (!count.ok()) return count.status();
          auto key = std::make_tuple(n, k, epsilon0, *count);
          auto it = cache.find(key);
          if (it == cache.end()) {
            absl::StatusOr<ShuffleInstance> instance =
                ShuffleInstance::Create(n, k, epsilon0, *count);
            if (!instance.ok()) return instance.status();
            absl::StatusOr<PrivacyLossProfile> profile =
                PrivacyLossProfile::Compute(*instance, formula);
            if (!profile.ok()) return profile.status();
            it = cache.emplace(key, *std::move(profile)).first;
          }
          for (double epsilon : grid.epsilons) {
            absl::StatusOr<DeltaResult> result = it->second.Delta(epsilon);
            if (!result.ok()) return result.status();
            rows.push_back(SweepRow{grid.block, epsilon0, n, k, *count,
                                    epsilon, result->delta,
                                    result->log_delta});
          }
        }
      }
    }
  }
  return rows;
}

std::string FormatDelta(double delta) {
  if (delta == 0.0) return "0";
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), delta);
  return std::string(buffer, ptr);
}

void WriteSweepCsv(std::ostream& out, std::span<const SweepRow> rows) {
  const std::vector<std::string> header = {
      "block", "epsilon0", "n", "k", "count_x0", "epsilon", "delta",
      "log_delta"};
  WriteCsvRow(out, header);
  for (const SweepRow& row : rows) {
    std::vector<std::string> fields = {
        row.block,          FormatDelta(row.epsilon0),
        absl::StrCat(row.n), absl::StrCat(row.k),
        absl::StrCat(row.count_x0), FormatDelta(row.epsilon),
        FormatDelta(row.delta),
        std::isinf(row.log_delta) ? std::string("-inf")
                                  : FormatDelta(row.log_delta)};
    WriteCsvRow(out, fields);
  }
}

void WriteSweepJsonLines(std::ostream& out, std::span<const SweepRow> rows) {
  for (const SweepRow& row : rows) {
    nlohmann::ordered_json j;
    j["block"] = row.block;
    j["epsilon0"] = row.epsilon0;
    j["n"] = row.n;
    j["k"] = row.k;
    j["count_x0"] = row.count_x0;
    j["epsilon"] = row.epsilon;
    j["delta"] = row.delta;
    j["log_delta"] = internal::NumberOrString(row.log_delta);
    out << j.dump() << '\n';
  }
}

}  // namespace shuffle_dp::harness
