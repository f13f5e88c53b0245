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

#include "percept/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "percept/error.hpp"

namespace percept {
namespace {

template <typename T>
T ToLittleEndian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

}  // namespace

ImageTensor LoadImage(const std::filesystem::path& path) {
  cv::Mat bgr;
  try {
    bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  } catch (const cv::Exception& e) {
    throw Error(ErrorKind::kIo, "cannot decode " + path.string() + ": " +
                                    e.what());
  }
  if (bgr.empty()) {
    throw Error(ErrorKind::kIo, "cannot read image " + path.string());
  }
  ImageTensor img(bgr.rows, bgr.cols, 3);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      img.at(y, x, 0) = row[x][2] / 255.0f;
      img.at(y, x, 1) = row[x][1] / 255.0f;
      img.at(y, x, 2) = row[x][0] / 255.0f;
    }
  }
  return img;
}

void SavePng(const Rgb8Image& image, const std::filesystem::path& path) {
  cv::Mat bgr(image.height, image.width, CV_8UC3);
  for (int y = 0; y < image.height; ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * image.width + x) * 3;
      row[x] = cv::Vec3b(image.data[i + 2], image.data[i + 1], image.data[i]);
    }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), bgr);
  } catch (const cv::Exception&) {
    ok = false;
  }
  if (!ok) throw Error(ErrorKind::kIo, "cannot write PNG " + path.string());
}

void WriteRawMap(const ImportanceMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  const std::uint32_t dims[2] = {
      ToLittleEndian(static_cast<std::uint32_t>(map.size.height)),
      ToLittleEndian(static_cast<std::uint32_t>(map.size.width))};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  for (const float v : map.values) {
    const float le = ToLittleEndian(v);
    out.write(reinterpret_cast<const char*>(&le), sizeof(le));
  }
  if (!out) throw Error(ErrorKind::kIo, "short write to " + path.string());
}

RawMap ReadRawMap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::uint32_t dims[2];
  if (!in.read(reinterpret_cast<char*>(dims), sizeof(dims))) {
    throw Error(ErrorKind::kIo, "truncated map header in " + path.string());
  }
  RawMap map;
  map.size = {static_cast<int>(ToLittleEndian(dims[0])),
              static_cast<int>(ToLittleEndian(dims[1]))};
  map.values.resize(map.size.area());
  for (float& v : map.values) {
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
      throw Error(ErrorKind::kIo, "truncated map data in " + path.string());
    }
    v = ToLittleEndian(v);
  }
  if (in.peek() != std::ifstream::traits_type::eof()) {
    throw Error(ErrorKind::kIo, "trailing bytes in " + path.string());
  }
  return map;
}

}  // namespace percept
