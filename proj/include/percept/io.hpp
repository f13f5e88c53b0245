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

// File formats: image loading, PNG output, and the raw importance-map format
// (8-byte header of two little-endian uint32 dims, height then width,
// followed by height*width little-endian float32 values, row-major).

#ifndef PERCEPT_IO_HPP_
#define PERCEPT_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "percept/engine.hpp"
#include "percept/image.hpp"

namespace percept {

struct Rgb8Image {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;  // row-major RGB

  friend bool operator==(const Rgb8Image&, const Rgb8Image&) = default;
};

// Any format OpenCV decodes; returned as 3-channel RGB in [0,1].
ImageTensor LoadImage(const std::filesystem::path& path);
void SavePng(const Rgb8Image& image, const std::filesystem::path& path);

struct RawMap {
  Size size;
  std::vector<float> values;
};

void WriteRawMap(const ImportanceMap& map, const std::filesystem::path& path);
RawMap ReadRawMap(const std::filesystem::path& path);

}  // namespace percept

#endif  // PERCEPT_IO_HPP_
