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

#ifndef SHUFFLE_DP_HARNESS_CSV_H_
#define SHUFFLE_DP_HARNESS_CSV_H_

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace shuffle_dp::harness {

struct CsvRow {
  int line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  // -1 when absent.
  int ColumnIndex(std::string_view name) const;
};

// RFC 4180 style: comma separated, double-quoted fields may contain commas,
// newlines and "" escapes. The first record is the header. Blank lines are
// skipped.
absl::StatusOr<CsvTable> ReadCsv(std::istream& in);

std::string CsvEscape(std::string_view field);
void WriteCsvRow(std::ostream& out, std::span<const std::string> fields);

}  // namespace shuffle_dp::harness

#endif  // SHUFFLE_DP_HARNESS_CSV_H_
