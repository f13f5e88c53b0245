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

// Pixel carriers shared by every module: ImageTensor (H x W x C samples in
// [0,1], row-major, channel-interleaved) and SoftMask (H x W blend weights in
// [0,1]).

#ifndef PERCEPT_IMAGE_HPP_
#define PERCEPT_IMAGE_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace percept {

struct Size {
  int height = 0;
  int width = 0;

  std::size_t area() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  friend bool operator==(const Size&, const Size&) = default;
};

std::string ToString(Size size);

class ImageTensor {
 public:
  ImageTensor() = default;
  // Filled with `fill`; channels must be 1 or 3.
  ImageTensor(int height, int width, int channels, float fill = 0.0f);
  // Takes ownership of `data`; validates length and the [0,1] range.
  ImageTensor(int height, int width, int channels, std::vector<float> data);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  Size size() const { return {height_, width_}; }
  bool empty() const { return data_.empty(); }

  float at(int y, int x, int c = 0) const { return data_[Index(y, x, c)]; }
  // Writers are responsible for keeping samples inside [0,1].
  float& at(int y, int x, int c = 0) { return data_[Index(y, x, c)]; }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

 private:
  std::size_t Index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

class SoftMask {
 public:
  SoftMask() = default;
  SoftMask(int height, int width, float fill = 0.0f);
  SoftMask(int height, int width, std::vector<float> data);

  int height() const { return height_; }
  int width() const { return width_; }
  Size size() const { return {height_, width_}; }

  float at(int y, int x) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  float& at(int y, int x) {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  friend bool operator==(const SoftMask&, const SoftMask&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

}  // namespace percept

#endif  // PERCEPT_IMAGE_HPP_
