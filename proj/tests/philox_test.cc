/*
 * Copyright 2026 The percept-xai Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <set>

#include <gtest/gtest.h>

#include "percept/philox.hpp"

namespace percept {
namespace {

// Known-answer vectors published with the Random123 library (kat_vectors,
// philox4x32 with 10 rounds).
struct Kat {
  PhiloxCounter ctr;
  PhiloxKey key;
  PhiloxCounter expected;
};

constexpr Kat kKats[] = {
    {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}},
    {{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
     {0xffffffff, 0xffffffff},
     {0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}},
    {{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
     {0xa4093822, 0x299f31d0},
     {0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}},
};

TEST(Philox, KnownAnswers) {
  for (const Kat& kat : kKats) {
    EXPECT_EQ(Philox4x32(kat.ctr, kat.key), kat.expected);
  }
}

TEST(Philox, UsableAtCompileTime) {
  static_assert(Philox4x32({0, 0, 0, 0}, {0, 0})[0] == 0x6627e8d5u);
}

TEST(Philox, StateFieldsSelectDistinctBlocks) {
  std::set<PhiloxCounter> seen;
  for (std::uint64_t seed : {0ull, 1ull, 1ull << 40}) {
    for (std::uint64_t stream : {0ull, 1ull, 1ull << 33}) {
      for (std::uint64_t counter : {0ull, 1ull, 1ull << 35}) {
        seen.insert(DrawBlock({seed, stream, counter}));
      }
    }
  }
  EXPECT_EQ(seen.size(), 27u);
}

TEST(Philox, AdvanceMovesCounterOnly) {
  const RngState s{5, 6, 7};
  EXPECT_EQ(Advance(s), (RngState{5, 6, 8}));
  EXPECT_EQ(Advance(s, 10), (RngState{5, 6, 17}));
}

TEST(Philox, UnitIntervalRange) {
  EXPECT_EQ(ToUnitInterval(0, 0), 0.0);
  EXPECT_LT(ToUnitInterval(0xffffffff, 0xffffffff), 1.0);
  EXPECT_EQ(ToUnitInterval(0x80000000, 0), 0.5);
}

TEST(Philox, UniformMeanAndVariance) {
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto b = DrawBlock({123, 0, static_cast<std::uint64_t>(i)});
    const double u = ToUnitInterval(b[0], b[1]);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.5, 0.003);
  EXPECT_NEAR(sq / n - mean * mean, 1.0 / 12.0, 0.002);
}

}  // namespace
}  // namespace percept
