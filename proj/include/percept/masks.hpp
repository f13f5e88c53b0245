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

// Random occlusion masks: a low-resolution Bernoulli(p) grid, upsampled
// (bicubic by default) and randomly cropped to the image size. Mask k is a
// pure function of (seed, k).

#ifndef PERCEPT_MASKS_HPP_
#define PERCEPT_MASKS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "percept/image.hpp"

namespace percept {

enum class Upsampling { kBicubic, kNearest };

// kNone resizes the grid straight to the target size (no jitter).
enum class CropMode { kRandom, kNone };

// kExhaustive enumerates all 2^(rows*cols) grids with their exact
// probabilities instead of sampling; only valid with CropMode::kNone.
enum class Sampling { kMonteCarlo, kExhaustive };

struct MaskConfig {
  int cell_rows = 7;
  int cell_cols = 7;
  double keep_prob = 0.5;
  std::size_t num_masks = 8000;
  // 0 selects the smallest factor leaving one upsampled cell of crop slack.
  int upsample_factor = 0;
  std::uint64_t seed = 0;
  Upsampling upsampling = Upsampling::kBicubic;
  CropMode crop = CropMode::kRandom;
  Sampling sampling = Sampling::kMonteCarlo;

  // Checks the parameter domains and, for random cropping, that the
  // upsampled grid covers `target` plus one cell.
  void Validate(Size target) const;
  int ResolvedUpsampleFactor(Size target) const;
  // Canonical text form; two configs with equal descriptions generate
  // identical mask sequences.
  std::string Describe() const;
};

// Largest grid that kExhaustive accepts (2^20 masks).
inline constexpr int kMaxExhaustiveCells = 20;

struct BinaryGrid {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> cells;  // row-major, each 0 or 1

  int ones() const;
  friend bool operator==(const BinaryGrid&, const BinaryGrid&) = default;
};

BinaryGrid SampleLowRes(const MaskConfig& config, std::size_t index);

// Upsample + crop of an explicit grid, with the crop offset drawn from mask
// `index`'s stream.
SoftMask GridToMask(const MaskConfig& config, const BinaryGrid& grid,
                    std::size_t index, Size target);

SoftMask MakeMask(const MaskConfig& config, std::size_t index, Size target);

// Continuous OR: max(m, edge). Edge pixels are always kept.
SoftMask TextureMask(const SoftMask& m, const ImageTensor& edges);

struct WeightedMask {
  SoftMask mask;
  double weight = 0.0;  // 1/N for Monte-Carlo, P(grid) for enumeration
};

// Indexable view over the masks of one configuration.
class MaskStream {
 public:
  MaskStream(MaskConfig config, Size target);

  std::size_t size() const { return size_; }
  WeightedMask At(std::size_t k) const;

  // Sequential cursor interface.
  bool HasNext() const { return cursor_ < size_; }
  WeightedMask Next() { return At(cursor_++); }
  std::size_t cursor() const { return cursor_; }

  const MaskConfig& config() const { return config_; }
  Size target() const { return target_; }

 private:
  MaskConfig config_;
  Size target_;
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;
};

}  // namespace percept

#endif  // PERCEPT_MASKS_HPP_
