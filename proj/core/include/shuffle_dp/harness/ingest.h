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

// Dataset construction: categorical CSV, lat/lon CSV on a grid, and the
// synthetic normal source.

#ifndef SHUFFLE_DP_HARNESS_INGEST_H_
#define SHUFFLE_DP_HARNESS_INGEST_H_

#include <cstdint>
#include <istream>
#include <string>

#include "absl/status/statusor.h"
#include "shuffle_dp/harness/config.h"
#include "shuffle_dp/histogram.h"
#include "shuffle_dp/mechanisms.h"

namespace shuffle_dp::harness {

struct IngestResult {
  Dataset dataset;
  Alphabet alphabet;
  // Location sources only: points outside the bounding box.
  int64_t dropped = 0;
  // Human-readable description of how records were mapped to symbols.
  std::string binning;
};

// Reads the `value` column. Symbols are ordered by first appearance.
absl::StatusOr<IngestResult> IngestCategorical(std::istream& in);

// Reads `lat,lon` columns in decimal degrees. Cells are numbered row-major
// from (min_lat, min_lon). A point on an interior cell boundary belongs to
// the lower-index cell; points on the box edge are kept.
absl::StatusOr<IngestResult> IngestLocations(std::istream& in,
                                             const GridSpec& grid);

// Cell index of a point, or -1 outside the box.
int GridCell(const GridSpec& grid, double lat, double lon);

// n draws from N(mean, variance) binned into k equal-width bins over
// [lower, upper]; draws beyond the range land in the edge bins.
absl::StatusOr<IngestResult> SyntheticNormal(const SyntheticSpec& spec,
                                             int64_t n, int k, Rng& rng);

// Bin masses of the synthetic source, including the clamped tails.
std::vector<double> SyntheticBinMasses(const SyntheticSpec& spec, int k);

// Uniform sample of n records without replacement; n >= size keeps all.
absl::StatusOr<Dataset> Subsample(const Dataset& dataset, int64_t n,
                                  Rng& rng);

// Resolves config.source into a dataset of config.n records (all records
// when n is 0 for CSV sources).
absl::StatusOr<IngestResult> LoadDataset(const ExperimentConfig& config,
                                         Rng& rng);

}  // namespace shuffle_dp::harness

#endif  // SHUFFLE_DP_HARNESS_INGEST_H_
