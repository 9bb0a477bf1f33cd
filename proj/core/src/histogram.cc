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

#include "shuffle_dp/histogram.h"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace shuffle_dp {

absl::StatusOr<Alphabet> Alphabet::Create(std::vector<std::string> symbols) {
  if (symbols.size() < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("alphabet needs at least 2 symbols, got ",
                     symbols.size()));
  }
  std::unordered_set<std::string> seen;
  for (const std::string& s : symbols) {
    if (!seen.insert(s).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate alphabet symbol '", s, "'"));
    }
  }
  return Alphabet(std::move(symbols));
}

absl::StatusOr<Alphabet> Alphabet::Indexed(int k) {
  std::vector<std::string> symbols;
  symbols.reserve(std::max(k, 0));
  for (int i = 0; i < k; ++i) symbols.push_back(absl::StrCat(i));
  return Create(std::move(symbols));
}

int Alphabet::IndexOf(const std::string& label) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), label);
  return it == symbols_.end() ? -1
                              : static_cast<int>(it - symbols_.begin());
}

absl::StatusOr<Dataset> Dataset::Create(std::vector<int> records, int k) {
  if (k < 2) {
    return absl::InvalidArgumentError(absl::StrCat("k must be >= 2, got ", k));
  }
  if (records.empty()) {
    return absl::InvalidArgumentError("dataset must have at least one record");
  }
  for (size_t i = 0; i < records.size(); ++i) {
    if (records[i] < 0 || records[i] >= k) {
      return absl::InvalidArgumentError(
          absl::StrCat("record ", i, " has symbol index ", records[i],
                       " outside [0, ", k, ")"));
    }
  }
  return Dataset(std::move(records), k);
}

absl::StatusOr<Histogram> Histogram::Create(std::vector<int64_t> counts) {
  if (counts.size() < 2) {
    return absl::InvalidArgumentError("histogram needs at least 2 bins");
  }
  int64_t total = 0;
  for (int64_t c : counts) {
    if (c < 0) return absl::InvalidArgumentError("negative histogram count");
    total += c;
  }
  return Histogram(std::move(counts), total);
}

Histogram Histogram::FromDataset(const Dataset& data) {
  std::vector<int64_t> counts(data.k(), 0);
  for (int x : data.records()) ++counts[x];
  return Histogram(std::move(counts), data.size());
}

std::vector<double> Histogram::Normalized() const {
  std::vector<double> out(counts_.size(), 0.0);
  if (total_ == 0) return out;
  for (size_t i = 0; i < counts_.size(); ++i) {
    out[i] = static_cast<double>(counts_[i]) / static_cast<double>(total_);
  }
  return out;
}

std::vector<double> Histogram::AsDoubles() const {
  return std::vector<double>(counts_.begin(), counts_.end());
}

}  // namespace shuffle_dp
