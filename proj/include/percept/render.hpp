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

// Heatmap rendering. Maps are min-max normalized per map for display only;
// raw values are never altered.

#ifndef PERCEPT_RENDER_HPP_
#define PERCEPT_RENDER_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "percept/engine.hpp"
#include "percept/image.hpp"
#include "percept/io.hpp"

namespace percept {

struct RenderOptions {
  std::string colormap = "jet";
  double alpha = 0.5;  // heatmap weight over the image

  void Validate() const;
};

const std::vector<std::string>& Colormaps();

// t in [0,1] -> RGB. "jet" runs blue (low) to red (high).
std::array<std::uint8_t, 3> MapColor(std::string_view colormap, double t);

// (v - min) / (max - min); a flat map becomes all zeros.
std::vector<float> MinMaxNormalize(std::span<const float> values);

// Blends the colorized map over `base`. When `base` is larger than the map,
// the normalized map is upsampled (bicubic) to the base resolution.
Rgb8Image RenderOverlay(const ImportanceMap& map, const ImageTensor& base,
                        const RenderOptions& options);

// Row-major tiles of identical size laid out rows x cols.
Rgb8Image RenderGrid(std::span<const Rgb8Image> tiles, int rows, int cols);

}  // namespace percept

#endif  // PERCEPT_RENDER_HPP_
