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

#include "percept/image.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "percept/error.hpp"

namespace percept {
namespace {

void CheckDims(int height, int width) {
  if (height < 1 || width < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "image dimensions must be positive, got " +
                    ToString(Size{height, width}));
  }
}

void CheckUnitRange(const std::vector<float>& data, const char* what) {
  for (const float v : data) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw Error(ErrorKind::kOutOfRange,
                  std::string(what) + " sample outside [0,1]: " +
                      std::to_string(v));
    }
  }
}

}  // namespace

std::string ToString(Size size) {
  return std::to_string(size.height) + "x" + std::to_string(size.width);
}

ImageTensor::ImageTensor(int height, int width, int channels, float fill)
    : height_(height), width_(width), channels_(channels) {
  CheckDims(height, width);
  if (channels != 1 && channels != 3) {
    throw Error(ErrorKind::kInvalidArgument,
                "channels must be 1 or 3, got " + std::to_string(channels));
  }
  data_.assign(size().area() * channels, fill);
}

ImageTensor::ImageTensor(int height, int width, int channels,
                         std::vector<float> data)
    : ImageTensor(height, width, channels) {
  if (data.size() != data_.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "image data length " + std::to_string(data.size()) +
                    " does not match " + ToString(size()) + "x" +
                    std::to_string(channels));
  }
  CheckUnitRange(data, "image");
  data_ = std::move(data);
}

SoftMask::SoftMask(int height, int width, float fill)
    : height_(height), width_(width) {
  CheckDims(height, width);
  data_.assign(size().area(), fill);
}

SoftMask::SoftMask(int height, int width, std::vector<float> data)
    : SoftMask(height, width) {
  if (data.size() != data_.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "mask data length does not match " + ToString(size()));
  }
  CheckUnitRange(data, "mask");
  data_ = std::move(data);
}

}  // namespace percept
