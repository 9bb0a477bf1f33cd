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

#include "shuffle_dp/harness/ingest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <unordered_map>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "shuffle_dp/harness/csv.h"

namespace shuffle_dp::harness {
namespace {

absl::StatusOr<double> ParseCoordinate(const std::string& text, int line,
                                       const char* column) {
  std::string trimmed(absl::StripAsciiWhitespace(text));
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
  if (trimmed.empty() || ec != std::errc() ||
      ptr != trimmed.data() + trimmed.size() || !std::isfinite(value)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "line ", line, ": column '", column, "' is not a number: '", text,
        "'"));
  }
  return value;
}

// Index of the half-open-from-below cell (lo + i*w, lo + (i+1)*w] holding x,
// so interior boundaries go to the lower index.
int AxisCell(double x, double lo, double hi, int cells) {
  double scaled = (x - lo) / (hi - lo) * cells;
  int index = static_cast<int>(std::ceil(scaled)) - 1;
  return std::clamp(index, 0, cells - 1);
}

}  // namespace

absl::StatusOr<IngestResult> IngestCategorical(std::istream& in) {
  absl::StatusOr<CsvTable> table = ReadCsv(in);
  if (!table.ok()) return table.status();
  int column = table->ColumnIndex("value");
  if (column < 0) {
    return absl::InvalidArgumentError("CSV has no 'value' column");
  }
  std::vector<std::string> labels;
  std::unordered_map<std::string, int> index;
  std::vector<int> records;
  records.reserve(table->rows.size());
  for (const CsvRow& row : table->rows) {
    if (row.fields.size() != table->header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", row.line, ": expected ", table->header.size(),
          " fields, got ", row.fields.size()));
    }
    const std::string& label = row.fields[column];
    if (label.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", row.line, ": empty value"));
    }
    auto [it, inserted] =
        index.emplace(label, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(label);
    records.push_back(it->second);
  }
  if (records.empty()) {
    return absl::InvalidArgumentError("CSV contains no records");
  }
  if (labels.size() < 2) {
    // A one-symbol alphabet is meaningless for k-RR; pad with a placeholder.
    labels.push_back(labels.front() + "_other");
  }
  absl::StatusOr<Alphabet> alphabet = Alphabet::Create(labels);
  if (!alphabet.ok()) return alphabet.status();
  absl::StatusOr<Dataset> dataset =
      Dataset::Create(std::move(records), alphabet->size());
  if (!dataset.ok()) return dataset.status();
  return IngestResult{*std::move(dataset), *std::move(alphabet), 0,
                      "categorical: symbols in order of first appearance"};
}

int GridCell(const GridSpec& grid, double lat, double lon) {
  if (lat < grid.min_lat || lat > grid.max_lat || lon < grid.min_lon ||
      lon > grid.max_lon) {
    return -1;
  }
  int row = AxisCell(lat, grid.min_lat, grid.max_lat, grid.rows);
  int col = AxisCell(lon, grid.min_lon, grid.max_lon, grid.cols);
  return row * grid.cols + col;
}

absl::StatusOr<IngestResult> IngestLocations(std::istream& in,
                                             const GridSpec& grid) {
  if (absl::Status st = grid.Validate(); !st.ok()) return st;
  absl::StatusOr<CsvTable> table = ReadCsv(in);
  if (!table.ok()) return table.status();
  int lat_column = table->ColumnIndex("lat");
  int lon_column = table->ColumnIndex("lon");
  if (lat_column < 0 || lon_column < 0) {
    return absl::InvalidArgumentError("CSV needs 'lat' and 'lon' columns");
  }
  std::vector<int> records;
  int64_t dropped = 0;
  for (const CsvRow& row : table->rows) {
    if (row.fields.size() != table->header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", row.line, ": expected ", table->header.size(),
          " fields, got ", row.fields.size()));
    }
    absl::StatusOr<double> lat =
        ParseCoordinate(row.fields[lat_column], row.line, "lat");
    if (!lat.ok()) return lat.status();
    absl::StatusOr<double> lon =
        ParseCoordinate(row.fields[lon_column], row.line, "lon");
    if (!lon.ok()) return lon.status();
    int cell = GridCell(grid, *lat, *lon);
    if (cell < 0) {
      ++dropped;
      continue;
    }
    records.push_back(cell);
  }
  if (records.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "no points inside the bounding box (", dropped, " dropped)"));
  }
  absl::StatusOr<Alphabet> alphabet = Alphabet::Indexed(grid.k());
  if (!alphabet.ok()) return alphabet.status();
  absl::StatusOr<Dataset> dataset = Dataset::Create(std::move(records),
                                                    grid.k());
  if (!dataset.ok()) return dataset.status();
  return IngestResult{
      *std::move(dataset), *std::move(alphabet), dropped,
      absl::StrFormat("location: %dx%d grid over lat [%g, %g], lon [%g, %g]; "
                      "row-major cells, boundaries to the lower index",
                      grid.rows, grid.cols, grid.min_lat, grid.max_lat,
                      grid.min_lon, grid.max_lon)};
}

absl::StatusOr<IngestResult> SyntheticNormal(const SyntheticSpec& spec,
                                             int64_t n, int k, Rng& rng) {
  if (n < 1 || k < 2) {
    return absl::InvalidArgumentError("synthetic source needs n >= 1, k >= 2");
  }
  if (!(spec.variance > 0) || !(spec.lower < spec.upper)) {
    return absl::InvalidArgumentError("invalid synthetic distribution");
  }
  std::normal_distribution<double> normal(spec.mean, std::sqrt(spec.variance));
  const double width = (spec.upper - spec.lower) / k;
  std::vector<int> records(static_cast<size_t>(n));
  for (int& record : records) {
    double x = normal(rng);
    int bin = static_cast<int>(std::floor((x - spec.lower) / width));
    record = std::clamp(bin, 0, k - 1);
  }
  absl::StatusOr<Alphabet> alphabet = Alphabet::Indexed(k);
  if (!alphabet.ok()) return alphabet.status();
  absl::StatusOr<Dataset> dataset = Dataset::Create(std::move(records), k);
  if (!dataset.ok()) return dataset.status();
  return IngestResult{
      *std::move(dataset), *std::move(alphabet), 0,
      absl::StrFormat("synthetic: N(%g, %g) in %d equal-width bins over "
                      "[%g, %g], tails clamped into the edge bins",
                      spec.mean, spec.variance, k, spec.lower, spec.upper)};
}

std::vector<double> SyntheticBinMasses(const SyntheticSpec& spec, int k) {
  const double sd = std::sqrt(spec.variance);
  auto cdf = [&](double x) {
    return 0.5 * std::erfc(-(x - spec.mean) / (sd * std::numbers::sqrt2));
  };
  const double width = (spec.upper - spec.lower) / k;
  std::vector<double> masses(k);
  for (int i = 0; i < k; ++i) {
    double lo = i == 0 ? -INFINITY : spec.lower + i * width;
    double hi = i == k - 1 ? INFINITY : spec.lower + (i + 1) * width;
    masses[i] = (i == k - 1 ? 1.0 : cdf(hi)) - (i == 0 ? 0.0 : cdf(lo));
  }
  return masses;
}

absl::StatusOr<Dataset> Subsample(const Dataset& dataset, int64_t n,
                                  Rng& rng) {
  if (n < 1) return absl::InvalidArgumentError("subsample size must be >= 1");
  std::span<const int> records = dataset.records();
  if (n >= dataset.size()) {
    return Dataset::Create(std::vector<int>(records.begin(), records.end()),
                           dataset.k());
  }
  // Partial Fisher-Yates over indices, then restore input order so the
  // result does not depend on the draw order.
  std::vector<int64_t> index(records.size());
  std::iota(index.begin(), index.end(), 0);
  for (int64_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<int64_t> pick(i, dataset.size() - 1);
    std::swap(index[i], index[pick(rng)]);
  }
  index.resize(n);
  std::sort(index.begin(), index.end());
  std::vector<int> sample;
  sample.reserve(n);
  for (int64_t i : index) sample.push_back(records[i]);
  return Dataset::Create(std::move(sample), dataset.k());
}

absl::StatusOr<IngestResult> LoadDataset(const ExperimentConfig& config,
                                         Rng& rng) {
  const DatasetSource& source = config.source;
  if (source.kind == DatasetKind::kSynthetic) {
    return SyntheticNormal(source.synthetic, config.n, config.k, rng);
  }
  std::ifstream in(source.path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open dataset '", source.path, "'"));
  }
  absl::StatusOr<IngestResult> result =
      source.kind == DatasetKind::kCategoricalCsv
          ? IngestCategorical(in)
          : IngestLocations(in, source.grid);
  if (!result.ok()) return result;
  if (config.n > 0 && config.n < result->dataset.size()) {
    absl::StatusOr<Dataset> sample = Subsample(result->dataset, config.n, rng);
    if (!sample.ok()) return sample.status();
    result->dataset = *std::move(sample);
    absl::StrAppend(&result->binning, "; uniform subsample of ", config.n,
                    " records without replacement");
  }
  return result;
}

}  // namespace shuffle_dp::harness
