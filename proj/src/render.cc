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

#include "percept/render.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "percept/error.hpp"
#include "percept/imgproc.hpp"

namespace percept {
namespace {

double Ramp(double v) { return std::clamp(v, 0.0, 1.0); }

std::uint8_t ToByte(double v) {
  return static_cast<std::uint8_t>(std::lround(Ramp(v) * 255.0));
}

}  // namespace

void RenderOptions::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "overlay alpha must be in [0,1]");
  }
  const auto& names = Colormaps();
  if (std::find(names.begin(), names.end(), colormap) == names.end()) {
    throw Error(ErrorKind::kInvalidArgument,
                "unknown colormap '" + colormap + "'");
  }
}

const std::vector<std::string>& Colormaps() {
  static const std::vector<std::string> names = {"jet", "hot", "gray"};
  return names;
}

std::array<std::uint8_t, 3> MapColor(std::string_view colormap, double t) {
  t = Ramp(t);
  if (colormap == "jet") {
    return {ToByte(1.5 - std::abs(4.0 * t - 3.0)),
            ToByte(1.5 - std::abs(4.0 * t - 2.0)),
            ToByte(1.5 - std::abs(4.0 * t - 1.0))};
  }
  if (colormap == "hot") {
    return {ToByte(3.0 * t), ToByte(3.0 * t - 1.0), ToByte(3.0 * t - 2.0)};
  }
  if (colormap == "gray") {
    const auto v = ToByte(t);
    return {v, v, v};
  }
  throw Error(ErrorKind::kInvalidArgument,
              "unknown colormap '" + std::string(colormap) + "'");
}

std::vector<float> MinMaxNormalize(std::span<const float> values) {
  std::vector<float> out(values.size(), 0.0f);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = static_cast<double>(*hi) - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = static_cast<float>(Ramp((values[i] - *lo) / range));
  }
  return out;
}

Rgb8Image RenderOverlay(const ImportanceMap& map, const ImageTensor& base,
                        const RenderOptions& options) {
  options.Validate();
  if (base.channels() != 3) {
    throw Error(ErrorKind::kShapeMismatch, "overlay base must be RGB");
  }
  SoftMask heat(map.size.height, map.size.width, MinMaxNormalize(map.values));
  if (base.size() != map.size) {
    if (base.height() < map.size.height || base.width() < map.size.width) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "overlay base " + ToString(base.size()) +
                      " is smaller than map " + ToString(map.size));
    }
    heat = ResizeBicubic(heat, base.height(), base.width());
  }
  Rgb8Image out{base.height(), base.width(), {}};
  out.data.resize(base.size().area() * 3);
  const auto px = base.data();
  const auto h = heat.data();
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto color = MapColor(options.colormap, h[i]);
    for (int c = 0; c < 3; ++c) {
      const double v = options.alpha * (color[c] / 255.0) +
                       (1.0 - options.alpha) * px[3 * i + c];
      out.data[3 * i + c] = ToByte(v);
    }
  }
  return out;
}

Rgb8Image RenderGrid(std::span<const Rgb8Image> tiles, int rows, int cols) {
  if (rows < 1 || cols < 1 ||
      tiles.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorKind::kInvalidArgument,
                "grid of " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " needs that many tiles, got " +
                    std::to_string(tiles.size()));
  }
  const int th = tiles.front().height;
  const int tw = tiles.front().width;
  for (const auto& t : tiles) {
    if (t.height != th || t.width != tw) {
      throw Error(ErrorKind::kDimensionMismatch, "grid tiles differ in size");
    }
  }
  Rgb8Image grid{rows * th, cols * tw, {}};
  grid.data.resize(static_cast<std::size_t>(grid.height) * grid.width * 3);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Rgb8Image& tile = tiles[static_cast<std::size_t>(r) * cols + c];
      for (int y = 0; y < th; ++y) {
        std::copy_n(tile.data.begin() + static_cast<std::ptrdiff_t>(y) * tw * 3,
                    tw * 3,
                    grid.data.begin() +
                        ((static_cast<std::ptrdiff_t>(r) * th + y) *
                             grid.width +
                         static_cast<std::ptrdiff_t>(c) * tw) *
                            3);
      }
    }
  }
  return grid;
}

}  // namespace percept
