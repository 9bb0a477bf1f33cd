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

#include <vector>

#include "gtest/gtest.h"

namespace shuffle_dp {
namespace {

TEST(AlphabetTest, CreateAndLookup) {
  auto alphabet = Alphabet::Create({"a", "b", "c"});
  ASSERT_TRUE(alphabet.ok()) << alphabet.status();
  EXPECT_EQ(alphabet->size(), 3);
  EXPECT_EQ(alphabet->label(1), "b");
  EXPECT_EQ(alphabet->IndexOf("c"), 2);
  EXPECT_EQ(alphabet->IndexOf("z"), -1);
}

TEST(AlphabetTest, RejectsDuplicatesAndTinyAlphabets) {
  EXPECT_EQ(Alphabet::Create({"a", "a"}).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(Alphabet::Create({"a"}).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(Alphabet::Indexed(1).ok());
}

TEST(AlphabetTest, IndexedLabels) {
  auto alphabet = Alphabet::Indexed(3);
  ASSERT_TRUE(alphabet.ok());
  EXPECT_EQ(alphabet->symbols(), (std::vector<std::string>{"0", "1", "2"}));
}

TEST(DatasetTest, Validation) {
  EXPECT_TRUE(Dataset::Create({0, 1, 1}, 2).ok());
  EXPECT_FALSE(Dataset::Create({0, 2}, 2).ok());
  EXPECT_FALSE(Dataset::Create({0, -1}, 2).ok());
  EXPECT_FALSE(Dataset::Create({}, 2).ok());
  EXPECT_FALSE(Dataset::Create({0}, 1).ok());
}

TEST(HistogramTest, FromDatasetCounts) {
  auto data = Dataset::Create({0, 1, 0, 2, 0}, 4);
  ASSERT_TRUE(data.ok());
  Histogram h = Histogram::FromDataset(*data);
  EXPECT_EQ(h.k(), 4);
  EXPECT_EQ(h.total(), 5);
  EXPECT_EQ(h.count(0), 3);
  EXPECT_EQ(h.count(3), 0);
  std::vector<double> p = h.Normalized();
  EXPECT_DOUBLE_EQ(p[0], 0.6);
  EXPECT_DOUBLE_EQ(p[3], 0.0);
  EXPECT_EQ(h.AsDoubles(), (std::vector<double>{3, 1, 1, 0}));
}

TEST(HistogramTest, CreateValidation) {
  EXPECT_TRUE(Histogram::Create({0, 0}).ok());
  EXPECT_FALSE(Histogram::Create({3}).ok());
  EXPECT_FALSE(Histogram::Create({1, -1}).ok());
  auto h = Histogram::Create({2, 5, 3});
  ASSERT_TRUE(h.ok());
  EXPECT_EQ(h->total(), 10);
}

}  // namespace
}  // namespace shuffle_dp
