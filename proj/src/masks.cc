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

#include "percept/masks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "percept/error.hpp"
#include "percept/imgproc.hpp"
#include "percept/philox.hpp"

namespace percept {
namespace {

RngState GridState(std::uint64_t seed, std::size_t index) {
  return {seed, 2 * static_cast<std::uint64_t>(index), 0};
}

RngState CropState(std::uint64_t seed, std::size_t index) {
  return {seed, 2 * static_cast<std::uint64_t>(index) + 1, 0};
}

int CeilDiv(int a, int b) { return (a + b - 1) / b; }

}  // namespace

void MaskConfig::Validate(Size target) const {
  if (!(keep_prob > 0.0 && keep_prob < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "keep probability must be in (0,1)");
  }
  if (cell_rows < 1 || cell_cols < 1) {
    throw Error(ErrorKind::kInvalidArgument, "mask grid must be at least 1x1");
  }
  if (sampling == Sampling::kMonteCarlo && num_masks < 1) {
    throw Error(ErrorKind::kInvalidArgument, "number of masks must be >= 1");
  }
  if (upsample_factor < 0) {
    throw Error(ErrorKind::kInvalidArgument, "upsample factor must be >= 0");
  }
  if (target.height < 1 || target.width < 1) {
    throw Error(ErrorKind::kInvalidArgument, "mask target must be >= 1x1");
  }
  if (sampling == Sampling::kExhaustive) {
    if (crop != CropMode::kNone) {
      throw Error(ErrorKind::kInvalidArgument,
                  "exhaustive enumeration requires crop mode 'none'");
    }
    if (cell_rows * cell_cols > kMaxExhaustiveCells) {
      throw Error(ErrorKind::kInvalidArgument,
                  "grid too large for exhaustive enumeration");
    }
  }
  if (crop == CropMode::kRandom) {
    const int f = ResolvedUpsampleFactor(target);
    if (cell_rows * f < target.height + f || cell_cols * f < target.width + f) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "upsampled grid " +
                      ToString(Size{cell_rows * f, cell_cols * f}) +
                      " leaves no crop slack for target " + ToString(target));
    }
  }
}

int MaskConfig::ResolvedUpsampleFactor(Size target) const {
  if (upsample_factor > 0) return upsample_factor;
  if (cell_rows < 2 || cell_cols < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "random cropping needs a grid of at least 2x2");
  }
  return std::max(CeilDiv(target.height, cell_rows - 1),
                  CeilDiv(target.width, cell_cols - 1));
}

std::string MaskConfig::Describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "grid=" << cell_rows << "x" << cell_cols << ";p=" << keep_prob
     << ";n=" << num_masks << ";factor=" << upsample_factor
     << ";seed=" << seed << ";upsample="
     << (upsampling == Upsampling::kBicubic ? "bicubic" : "nearest")
     << ";crop=" << (crop == CropMode::kRandom ? "random" : "none")
     << ";sampling="
     << (sampling == Sampling::kMonteCarlo ? "monte-carlo" : "exhaustive");
  return os.str();
}

int BinaryGrid::ones() const {
  return static_cast<int>(std::count(cells.begin(), cells.end(), 1));
}

BinaryGrid SampleLowRes(const MaskConfig& config, std::size_t index) {
  if (index >= config.num_masks) {
    throw Error(ErrorKind::kOutOfRange,
                "mask index " + std::to_string(index) + " >= " +
                    std::to_string(config.num_masks));
  }
  BinaryGrid grid{config.cell_rows, config.cell_cols, {}};
  const std::size_t n = static_cast<std::size_t>(grid.rows) * grid.cols;
  grid.cells.resize(n);
  RngState state = GridState(config.seed, index);
  for (std::size_t i = 0; i < n; i += 2) {
    const auto block = DrawBlock(state);
    state = Advance(state);
    grid.cells[i] = ToUnitInterval(block[0], block[1]) < config.keep_prob;
    if (i + 1 < n) {
      grid.cells[i + 1] = ToUnitInterval(block[2], block[3]) < config.keep_prob;
    }
  }
  return grid;
}

SoftMask GridToMask(const MaskConfig& config, const BinaryGrid& grid,
                    std::size_t index, Size target) {
  SoftMask cells(grid.rows, grid.cols);
  std::transform(grid.cells.begin(), grid.cells.end(), cells.data().begin(),
                 [](std::uint8_t v) { return static_cast<float>(v); });
  auto resize = [&](int h, int w) {
    return config.upsampling == Upsampling::kBicubic
               ? ResizeBicubic(cells, h, w)
               : ResizeNearest(cells, h, w);
  };
  if (config.crop == CropMode::kNone) {
    return resize(target.height, target.width);
  }
  const int f = config.ResolvedUpsampleFactor(target);
  const SoftMask up = resize(grid.rows * f, grid.cols * f);
  return RandomResizedCrop(up, target.height, target.width,
                           CropState(config.seed, index))
      .mask;
}

SoftMask MakeMask(const MaskConfig& config, std::size_t index, Size target) {
  config.Validate(target);
  return GridToMask(config, SampleLowRes(config, index), index, target);
}

SoftMask TextureMask(const SoftMask& m, const ImageTensor& edges) {
  if (m.size() != edges.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "texture mask: " + ToString(m.size()) + " vs edges " +
                    ToString(edges.size()));
  }
  SoftMask out = m;
  auto dst = out.data();
  const auto e = edges.data();
  const int c = edges.channels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = std::max(dst[i], e[i * c]);
  }
  return out;
}

MaskStream::MaskStream(MaskConfig config, Size target)
    : config_(config), target_(target) {
  config_.Validate(target_);
  if (config_.sampling == Sampling::kExhaustive) {
    size_ = std::size_t{1} << (config_.cell_rows * config_.cell_cols);
  } else {
    size_ = config_.num_masks;
  }
}

WeightedMask MaskStream::At(std::size_t k) const {
  if (k >= size_) {
    throw Error(ErrorKind::kOutOfRange,
                "mask stream index " + std::to_string(k) + " >= " +
                    std::to_string(size_));
  }
  if (config_.sampling == Sampling::kMonteCarlo) {
    return {GridToMask(config_, SampleLowRes(config_, k), k, target_),
            1.0 / static_cast<double>(size_)};
  }
  BinaryGrid grid{config_.cell_rows, config_.cell_cols, {}};
  const int n = grid.rows * grid.cols;
  grid.cells.resize(n);
  for (int i = 0; i < n; ++i) grid.cells[i] = (k >> i) & 1u;
  const int ones = grid.ones();
  const double weight = std::pow(config_.keep_prob, ones) *
                        std::pow(1.0 - config_.keep_prob, n - ones);
  return {GridToMask(config_, grid, k, target_), weight};
}

}  // namespace percept
