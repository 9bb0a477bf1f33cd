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

#ifndef SHUFFLE_DP_HISTOGRAM_H_
#define SHUFFLE_DP_HISTOGRAM_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace shuffle_dp {

// Ordered set of k >= 2 distinct symbol labels.
class Alphabet {
 public:
  static absl::StatusOr<Alphabet> Create(std::vector<std::string> symbols);
  // Symbols "0", "1", ..., "k-1".
  static absl::StatusOr<Alphabet> Indexed(int k);

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& label(int index) const { return symbols_[index]; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  // -1 when absent.
  int IndexOf(const std::string& label) const;

 private:
  explicit Alphabet(std::vector<std::string> symbols)
      : symbols_(std::move(symbols)) {}

  std::vector<std::string> symbols_;
};

// n >= 1 records, each a symbol index in [0, k).
class Dataset {
 public:
  static absl::StatusOr<Dataset> Create(std::vector<int> records, int k);

  int k() const { return k_; }
  int64_t size() const { return static_cast<int64_t>(records_.size()); }
  std::span<const int> records() const { return records_; }

 private:
  Dataset(std::vector<int> records, int k)
      : records_(std::move(records)), k_(k) {}

  std::vector<int> records_;
  int k_;
};

// Per-symbol counts over an alphabet of size k.
class Histogram {
 public:
  static absl::StatusOr<Histogram> Create(std::vector<int64_t> counts);
  static Histogram FromDataset(const Dataset& data);

  int k() const { return static_cast<int>(counts_.size()); }
  int64_t total() const { return total_; }
  int64_t count(int symbol) const { return counts_[symbol]; }
  std::span<const int64_t> counts() const { return counts_; }

  // counts / total; all zeros when total is 0.
  std::vector<double> Normalized() const;
  std::vector<double> AsDoubles() const;

 private:
  Histogram(std::vector<int64_t> counts, int64_t total)
      : counts_(std::move(counts)), total_(total) {}

  std::vector<int64_t> counts_;
  int64_t total_;
};

}  // namespace shuffle_dp

#endif  // SHUFFLE_DP_HISTOGRAM_H_
