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

#ifndef SHUFFLE_DP_SRC_HARNESS_JSON_UTIL_H_
#define SHUFFLE_DP_SRC_HARNESS_JSON_UTIL_H_

#include "json.hpp"
#include "shuffle_dp/harness/config.h"

namespace shuffle_dp::harness::internal {

nlohmann::ordered_json ConfigToJsonValue(const ExperimentConfig& config);

// Finite doubles as numbers; non-finite values as the strings "inf", "-inf"
// and "nan" so the output stays valid JSON.
nlohmann::ordered_json NumberOrString(double value);

}  // namespace shuffle_dp::harness::internal

#endif  // SHUFFLE_DP_SRC_HARNESS_JSON_UTIL_H_
