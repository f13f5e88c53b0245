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

#include "percept/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "percept/error.hpp"

namespace percept {
namespace {

// Relative tolerance for magnitude comparisons in non-maximum suppression.
// Keeps tie-breaking stable when a constant offset perturbs rounding.
constexpr double kNmsTolerance = 1e-9;
// Gradient maxima below this are float noise on a flat image.
constexpr double kMinGradient = 1e-6;

float Clamp01(double v) {
  return static_cast<float>(std::clamp(v, 0.0, 1.0));
}

int ClampIndex(int i, int n) { return std::clamp(i, 0, n - 1); }

void CheckSameSpatial(Size a, Size b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::string(what) + ": " + ToString(a) + " vs " + ToString(b));
  }
}

// Separable convolution of `channels` interleaved planes with a symmetric
// kernel, replicate border.
std::vector<double> Convolve(const std::vector<double>& src, int height,
                             int width, int channels,
                             const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> tmp(src.size());
  std::vector<double> out(src.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const int xx = ClampIndex(x + k, width);
          acc += kernel[k + radius] *
                 src[(static_cast<std::size_t>(y) * width + xx) * channels + c];
        }
        tmp[(static_cast<std::size_t>(y) * width + x) * channels + c] = acc;
      }
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const int yy = ClampIndex(y + k, height);
          acc += kernel[k + radius] *
                 tmp[(static_cast<std::size_t>(yy) * width + x) * channels + c];
        }
        out[(static_cast<std::size_t>(y) * width + x) * channels + c] = acc;
      }
    }
  }
  return out;
}

std::vector<double> Luminance(const ImageTensor& img) {
  std::vector<double> lum(img.size().area());
  const auto data = img.data();
  if (img.channels() == 1) {
    std::copy(data.begin(), data.end(), lum.begin());
    return lum;
  }
  for (std::size_t i = 0; i < lum.size(); ++i) {
    lum[i] = kLumaRed * data[3 * i] + kLumaGreen * data[3 * i + 1] +
             kLumaBlue * data[3 * i + 2];
  }
  return lum;
}

std::vector<std::uint8_t> EdgesFromLuminance(const std::vector<double>& lum,
                                             Size size,
                                             const CannyParams& params) {
  params.Validate();
  const int h = size.height;
  const int w = size.width;
  const auto smooth =
      Convolve(lum, h, w, 1, GaussianKernel(params.smoothing_sigma));
  auto px = [&](int y, int x) {
    return smooth[static_cast<std::size_t>(ClampIndex(y, h)) * w +
                  ClampIndex(x, w)];
  };

  std::vector<double> gx(size.area());
  std::vector<double> gy(size.area());
  std::vector<double> mag(size.area());
  double max_mag = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = (px(y - 1, x + 1) + 2.0 * px(y, x + 1) +
                         px(y + 1, x + 1)) -
                        (px(y - 1, x - 1) + 2.0 * px(y, x - 1) +
                         px(y + 1, x - 1));
      const double dy = (px(y + 1, x - 1) + 2.0 * px(y + 1, x) +
                         px(y + 1, x + 1)) -
                        (px(y - 1, x - 1) + 2.0 * px(y - 1, x) +
                         px(y - 1, x + 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      gx[i] = dx;
      gy[i] = dy;
      mag[i] = std::hypot(dx, dy);
      max_mag = std::max(max_mag, mag[i]);
    }
  }

  std::vector<std::uint8_t> edges(size.area(), 0);
  if (max_mag < kMinGradient) return edges;
  for (double& m : mag) m /= max_mag;

  auto mag_at = [&](int y, int x) {
    if (y < 0 || y >= h || x < 0 || x >= w) return 0.0;
    return mag[static_cast<std::size_t>(y) * w + x];
  };

  // 0 = none, 1 = weak, 2 = strong.
  const double tan22 = std::tan(M_PI / 8.0);
  const double tan67 = std::tan(3.0 * M_PI / 8.0);
  std::vector<std::uint8_t> level(size.area(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double m = mag[i];
      if (m <= kNmsTolerance || m < params.low_threshold) continue;
      const double ax = std::abs(gx[i]);
      const double ay = std::abs(gy[i]);
      double prev = 0.0;
      double next = 0.0;
      if (ay <= ax * tan22) {
        prev = mag_at(y, x - 1);
        next = mag_at(y, x + 1);
      } else if (ay > ax * tan67) {
        prev = mag_at(y - 1, x);
        next = mag_at(y + 1, x);
      } else if (gx[i] * gy[i] > 0.0) {
        prev = mag_at(y - 1, x - 1);
        next = mag_at(y + 1, x + 1);
      } else {
        prev = mag_at(y - 1, x + 1);
        next = mag_at(y + 1, x - 1);
      }
      // Ties resolve toward the pixel on the positive side.
      if (m >= prev - kNmsTolerance && m > next + kNmsTolerance) {
        level[i] = m >= params.high_threshold ? 2 : 1;
      }
    }
  }

  std::deque<std::pair<int, int>> frontier;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (level[i] == 2) {
        edges[i] = 1;
        frontier.emplace_back(y, x);
      }
    }
  }
  while (!frontier.empty()) {
    const auto [y, x] = frontier.front();
    frontier.pop_front();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int yy = y + dy;
        const int xx = x + dx;
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
        const std::size_t j = static_cast<std::size_t>(yy) * w + xx;
        if (level[j] == 1 && edges[j] == 0) {
          edges[j] = 1;
          frontier.emplace_back(yy, xx);
        }
      }
    }
  }
  return edges;
}

struct Tap {
  int index;
  double weight;
};

// Catmull-Rom (a = -0.5) cubic convolution kernel.
double CubicWeight(double t) {
  t = std::abs(t);
  if (t < 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

// Half-pixel-centre mapping. When shrinking, the kernel is stretched by the
// scale factor so every source pixel contributes (antialiased downscale).
std::vector<std::vector<Tap>> CubicTaps(int in, int out) {
  const double scale = static_cast<double>(in) / out;
  const double stretch = std::max(1.0, scale);
  const double support = 2.0 * stretch;
  std::vector<std::vector<Tap>> taps(out);
  for (int o = 0; o < out; ++o) {
    const double center = (o + 0.5) * scale - 0.5;
    const int lo = static_cast<int>(std::ceil(center - support));
    const int hi = static_cast<int>(std::floor(center + support));
    double total = 0.0;
    for (int i = lo; i <= hi; ++i) {
      const double wgt = CubicWeight((i - center) / stretch);
      if (wgt == 0.0) continue;
      taps[o].push_back({ClampIndex(i, in), wgt});
      total += wgt;
    }
    for (Tap& t : taps[o]) t.weight /= total;
  }
  return taps;
}

std::vector<float> ResizeInterleaved(std::span<const float> src, Size in,
                                     int channels, Size out) {
  if (out.height < 1 || out.width < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "resize target must be at least 1x1, got " + ToString(out));
  }
  const auto col_taps = CubicTaps(in.width, out.width);
  const auto row_taps = CubicTaps(in.height, out.height);
  std::vector<double> tmp(static_cast<std::size_t>(in.height) * out.width *
                          channels);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (const Tap& t : col_taps[x]) {
          acc += t.weight *
                 src[(static_cast<std::size_t>(y) * in.width + t.index) *
                         channels + c];
        }
        tmp[(static_cast<std::size_t>(y) * out.width + x) * channels + c] =
            acc;
      }
    }
  }
  std::vector<float> dst(out.area() * channels);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (const Tap& t : row_taps[y]) {
          acc += t.weight *
                 tmp[(static_cast<std::size_t>(t.index) * out.width + x) *
                         channels + c];
        }
        dst[(static_cast<std::size_t>(y) * out.width + x) * channels + c] =
            Clamp01(acc);
      }
    }
  }
  return dst;
}

}  // namespace

void CannyParams::Validate() const {
  if (!(low_threshold >= 0.0 && low_threshold < high_threshold &&
        high_threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "canny thresholds must satisfy 0 <= low < high <= 1");
  }
  if (!(smoothing_sigma > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "canny smoothing sigma must be positive");
  }
}

ImageTensor ToGrayscale(const ImageTensor& img) {
  if (img.channels() != 3) {
    throw Error(ErrorKind::kAlreadyGrayscale, "already grayscale");
  }
  ImageTensor out(img.height(), img.width(), 3);
  const auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < img.size().area(); ++i) {
    const float l =
        Clamp01(kLumaRed * src[3 * i] + kLumaGreen * src[3 * i + 1] +
                kLumaBlue * src[3 * i + 2]);
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = l;
  }
  return out;
}

std::vector<double> GaussianKernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::kInvalidArgument,
                "gaussian sigma must be positive, got " +
                    std::to_string(sigma));
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-(k * k) / (2.0 * sigma * sigma));
    total += kernel[k + radius];
  }
  for (double& v : kernel) v /= total;
  return kernel;
}

ImageTensor GaussianBlur(const ImageTensor& img, double sigma) {
  const auto kernel = GaussianKernel(sigma);
  const auto src = img.data();
  const std::vector<double> in(src.begin(), src.end());
  const auto blurred =
      Convolve(in, img.height(), img.width(), img.channels(), kernel);
  ImageTensor out(img.height(), img.width(), img.channels());
  auto dst = out.data();
  for (std::size_t i = 0; i < blurred.size(); ++i) dst[i] = Clamp01(blurred[i]);
  return out;
}

ImageTensor CannyEdges(const ImageTensor& img, const CannyParams& params) {
  const auto edges = EdgesFromLuminance(Luminance(img), img.size(), params);
  ImageTensor out(img.height(), img.width(), 3);
  auto dst = out.data();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = edges[i];
  }
  return out;
}

ImageTensor ResizeBicubic(const ImageTensor& img, int new_height,
                          int new_width) {
  auto data = ResizeInterleaved(img.data(), img.size(), img.channels(),
                                {new_height, new_width});
  return ImageTensor(new_height, new_width, img.channels(), std::move(data));
}

SoftMask ResizeBicubic(const SoftMask& mask, int new_height, int new_width) {
  auto data =
      ResizeInterleaved(mask.data(), mask.size(), 1, {new_height, new_width});
  return SoftMask(new_height, new_width, std::move(data));
}

SoftMask ResizeNearest(const SoftMask& mask, int new_height, int new_width) {
  if (new_height < 1 || new_width < 1) {
    throw Error(ErrorKind::kInvalidArgument, "resize target must be >= 1x1");
  }
  SoftMask out(new_height, new_width);
  for (int y = 0; y < new_height; ++y) {
    const int sy = std::min(
        mask.height() - 1,
        static_cast<int>((y + 0.5) * mask.height() / new_height));
    for (int x = 0; x < new_width; ++x) {
      const int sx = std::min(
          mask.width() - 1,
          static_cast<int>((x + 0.5) * mask.width() / new_width));
      out.at(y, x) = mask.at(sy, sx);
    }
  }
  return out;
}

CropResult RandomResizedCrop(const SoftMask& mask, int target_height,
                             int target_width, RngState state) {
  if (target_height < 1 || target_width < 1) {
    throw Error(ErrorKind::kInvalidArgument, "crop target must be >= 1x1");
  }
  if (mask.height() < target_height || mask.width() < target_width) {
    throw Error(ErrorKind::kDimensionMismatch,
                "mask " + ToString(mask.size()) + " smaller than crop target " +
                    ToString(Size{target_height, target_width}));
  }
  const auto block = DrawBlock(state);
  const int rows = mask.height() - target_height + 1;
  const int cols = mask.width() - target_width + 1;
  const int top = std::min(
      rows - 1, static_cast<int>(ToUnitInterval(block[0], block[1]) * rows));
  const int left = std::min(
      cols - 1, static_cast<int>(ToUnitInterval(block[2], block[3]) * cols));

  CropResult result{SoftMask(target_height, target_width), Advance(state), top,
                    left};
  for (int y = 0; y < target_height; ++y) {
    const auto row = mask.data().subspan(
        static_cast<std::size_t>(top + y) * mask.width() + left, target_width);
    std::copy(row.begin(), row.end(),
              result.mask.data().begin() +
                  static_cast<std::ptrdiff_t>(y) * target_width);
  }
  return result;
}

ImageTensor Composite(const ImageTensor& a, const ImageTensor& b,
                      const SoftMask& m) {
  CheckSameSpatial(a.size(), b.size(), "composite operands");
  CheckSameSpatial(a.size(), m.size(), "composite mask");
  if (a.channels() != b.channels()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "composite operands differ in channel count");
  }
  const int channels = a.channels();
  ImageTensor out(a.height(), a.width(), channels);
  const auto pa = a.data();
  const auto pb = b.data();
  const auto pm = m.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < pm.size(); ++i) {
    const float w = pm[i];
    for (int c = 0; c < channels; ++c) {
      const std::size_t j = i * channels + c;
      dst[j] = std::clamp(pa[j] * w + pb[j] * (1.0f - w), 0.0f, 1.0f);
    }
  }
  return out;
}

namespace plane {

std::vector<float> Blur(std::span<const float> src, Size size, double sigma) {
  if (src.size() != size.area()) {
    throw Error(ErrorKind::kDimensionMismatch, "plane length mismatch");
  }
  const std::vector<double> in(src.begin(), src.end());
  const auto blurred =
      Convolve(in, size.height, size.width, 1, GaussianKernel(sigma));
  return {blurred.begin(), blurred.end()};
}

std::vector<std::uint8_t> DetectEdges(std::span<const float> luminance,
                                      Size size, const CannyParams& params) {
  if (luminance.size() != size.area()) {
    throw Error(ErrorKind::kDimensionMismatch, "plane length mismatch");
  }
  return EdgesFromLuminance({luminance.begin(), luminance.end()}, size,
                            params);
}

}  // namespace plane

}  // namespace percept
