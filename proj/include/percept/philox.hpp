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

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A draw is a
// pure function of (key, counter), so any mask index can be generated in any
// order on any thread with identical results.

#ifndef PERCEPT_PHILOX_HPP_
#define PERCEPT_PHILOX_HPP_

#include <array>
#include <cstdint>

namespace percept {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

constexpr PhiloxCounter Philox4x32(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t kMulA = 0xD2511F53u;
  constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  constexpr std::uint32_t kWeylB = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  return ctr;
}

// Explicit generator state: key = seed, (stream, counter) = 128-bit counter.
// Passed by value and returned advanced; never shared.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t counter = 0;

  friend bool operator==(const RngState&, const RngState&) = default;
};

// Four 32-bit words for the current block.
constexpr PhiloxCounter DrawBlock(const RngState& state) {
  return Philox4x32(
      {static_cast<std::uint32_t>(state.counter),
       static_cast<std::uint32_t>(state.counter >> 32),
       static_cast<std::uint32_t>(state.stream),
       static_cast<std::uint32_t>(state.stream >> 32)},
      {static_cast<std::uint32_t>(state.seed),
       static_cast<std::uint32_t>(state.seed >> 32)});
}

constexpr RngState Advance(RngState state, std::uint64_t blocks = 1) {
  state.counter += blocks;
  return state;
}

// Uniform double in [0,1) from two 32-bit words (53 significant bits).
constexpr double ToUnitInterval(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits =
      ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace percept

#endif  // PERCEPT_PHILOX_HPP_
