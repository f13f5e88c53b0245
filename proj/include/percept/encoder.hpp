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

// Embedding providers. An Encoder maps a 3-channel [0,1] image of its
// configured input size to a finite D-vector. Two families exist: ONNX
// models (the real thing) and analytic toy encoders with known
// sensitivities, used as test oracles.

#ifndef PERCEPT_ENCODER_HPP_
#define PERCEPT_ENCODER_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "percept/image.hpp"

namespace percept {

using Embedding = std::vector<float>;

// Per-channel (x - mean) / std, applied after [0,1] scaling.
struct InputNormalization {
  std::array<float, 3> mean = {0.0f, 0.0f, 0.0f};
  std::array<float, 3> std = {1.0f, 1.0f, 1.0f};

  static InputNormalization Identity() { return {}; }
  static InputNormalization ImageNet() {
    return {{0.485f, 0.456f, 0.406f}, {0.229f, 0.224f, 0.225f}};
  }
  friend bool operator==(const InputNormalization&,
                         const InputNormalization&) = default;
};

struct EncoderSpec {
  std::string source;  // model file path or "toy:<name>"
  std::string name;    // human-readable identity
  Size input_size = {224, 224};
  InputNormalization normalization;
  int embedding_dim = 0;  // 0: taken from the model

  void Validate() const;
  friend bool operator==(const EncoderSpec&, const EncoderSpec&) = default;
};

// Sidecar metadata (JSON) stored next to a model file:
//   {"model_name": str, "input_size": {"height": H, "width": W},
//    "normalization": {"mean": [3], "std": [3]}, "embedding_dim": D,
//    "format_version": 1, "model_file": optional path}
EncoderSpec LoadSidecar(const std::filesystem::path& path);
void SaveSidecar(const EncoderSpec& spec, const std::filesystem::path& path);

class Encoder {
 public:
  explicit Encoder(EncoderSpec spec);
  virtual ~Encoder() = default;

  Encoder(const Encoder&) = delete;
  Encoder& operator=(const Encoder&) = delete;

  const EncoderSpec& spec() const { return spec_; }
  int embedding_dim() const { return spec_.embedding_dim; }

  Embedding Embed(const ImageTensor& img) const;
  // Order-preserving; images must share the encoder's input size.
  std::vector<Embedding> EmbedBatch(std::span<const ImageTensor> imgs) const;

 protected:
  // `planar` holds `count` normalized images in N x 3 x H x W order.
  virtual std::vector<Embedding> Run(std::span<const float> planar,
                                     std::size_t count) const = 0;

  EncoderSpec spec_;
};

struct ToyInfo {
  std::string name;
  std::string description;
};

// Catalog of analytic encoders: mean-rgb, edge-pool, blur-diff, constant,
// flatten-pool.
const std::vector<ToyInfo>& ToyEncoders();

inline constexpr std::string_view kToyPrefix = "toy:";

// `spec.source` is ignored; input size and normalization are honoured.
std::unique_ptr<Encoder> MakeToyEncoder(std::string_view name,
                                        EncoderSpec spec = {});

// Up to `max_concurrency` network instances serve concurrent calls.
std::unique_ptr<Encoder> LoadOnnxEncoder(EncoderSpec spec,
                                         int max_concurrency = 1);

// Dispatches on "toy:<name>" vs a model path. An empty `meta_path` means the
// sidecar next to the model (model.json or model.onnx.json); toys fall back
// to defaults when no sidecar is given.
std::unique_ptr<Encoder> LoadEncoder(const std::string& model,
                                     const std::string& meta_path = {},
                                     int max_concurrency = 1);

}  // namespace percept

#endif  // PERCEPT_ENCODER_HPP_
