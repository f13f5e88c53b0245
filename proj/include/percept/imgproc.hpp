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

// Deterministic image primitives behind every masking recipe. All functions
// are pure and thread-safe. Convolutions replicate borders.

#ifndef PERCEPT_IMGPROC_HPP_
#define PERCEPT_IMGPROC_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "percept/image.hpp"
#include "percept/philox.hpp"

namespace percept {

// ITU-R BT.601 luma weights.
inline constexpr double kLumaRed = 0.299;
inline constexpr double kLumaGreen = 0.587;
inline constexpr double kLumaBlue = 0.114;

struct CannyParams {
  double low_threshold = 0.1;   // on gradient magnitude / image max magnitude
  double high_threshold = 0.2;
  double smoothing_sigma = 1.4;

  void Validate() const;
};

// Luminance replicated into three channels. Throws kAlreadyGrayscale on a
// single-channel input.
ImageTensor ToGrayscale(const ImageTensor& img);

// Normalized 1-D Gaussian taps with radius ceil(3 * sigma).
std::vector<double> GaussianKernel(double sigma);

ImageTensor GaussianBlur(const ImageTensor& img, double sigma);

// Binary edge map (0 or 1) replicated into three channels.
ImageTensor CannyEdges(const ImageTensor& img, const CannyParams& params = {});

ImageTensor ResizeBicubic(const ImageTensor& img, int new_height,
                          int new_width);
SoftMask ResizeBicubic(const SoftMask& mask, int new_height, int new_width);
SoftMask ResizeNearest(const SoftMask& mask, int new_height, int new_width);

struct CropResult {
  SoftMask mask;
  RngState next_state;
  int top = 0;
  int left = 0;
};

// Extracts a target_height x target_width window at a uniformly drawn offset.
// Consumes exactly one counter block of `state`.
CropResult RandomResizedCrop(const SoftMask& mask, int target_height,
                             int target_width, RngState state);

// out = a * m + b * (1 - m), per pixel and channel.
ImageTensor Composite(const ImageTensor& a, const ImageTensor& b,
                      const SoftMask& m);

// Plane-level helpers. These operate on unclamped single-channel float planes
// (row-major) and are shared by the toy encoders, which see normalized input.
namespace plane {

std::vector<float> Blur(std::span<const float> src, Size size, double sigma);

// 0/1 per pixel.
std::vector<std::uint8_t> DetectEdges(std::span<const float> luminance,
                                      Size size, const CannyParams& params);

}  // namespace plane

}  // namespace percept

#endif  // PERCEPT_IMGPROC_HPP_
