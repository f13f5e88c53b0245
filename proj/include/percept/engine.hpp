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

// Monte-Carlo importance estimation.
//
// For a reference image X_ref, a perturbation P and masks M_1..M_N:
//
//   R_ij = sum_n w_n * cos(f(X_ref), f(P(M_n))) * W(M_n)_ij
//
// with w_n = 1/N for sampled masks (or the exact grid probability under
// enumeration) and W the attribution-weight mask (identity by default). The
// "rise" normalization divides each pixel by sum_n w_n * W(M_n)_ij instead.
//
// Component recipes:
//   overall  X_ref = X,         P(M) = X*M
//   color    X_ref = X,         P(M) = X*M + gray(X)*(1-M)
//   shape    X_ref = edges(X),  P(M) = edges(X)*M
//   texture  X_ref = gray(X),   P(M) = gray(X)*Mt + blur(gray(X))*(1-Mt),
//            Mt = max(M, edges(X)); the weight stays M.

#ifndef PERCEPT_ENGINE_HPP_
#define PERCEPT_ENGINE_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "percept/encoder.hpp"
#include "percept/image.hpp"
#include "percept/imgproc.hpp"
#include "percept/masks.hpp"

namespace percept {

enum class Component { kOverall, kColor, kShape, kTexture };

inline constexpr std::array<Component, 4> kAllComponents = {
    Component::kOverall, Component::kColor, Component::kShape,
    Component::kTexture};

std::string_view ToString(Component component);
Component ParseComponent(std::string_view name);

enum class MapNormalization { kEq2, kRise };

std::string_view ToString(MapNormalization normalization);
MapNormalization ParseMapNormalization(std::string_view name);

struct ComponentParams {
  double blur_sigma = 5.0;  // texture removal
  CannyParams canny;
};

struct EngineOptions {
  MaskConfig masks;
  MapNormalization normalization = MapNormalization::kEq2;
  ComponentParams components;
  int batch_size = 16;
  int threads = 0;  // 0: PERCEPT_XAI_THREADS, else hardware concurrency
};

// Worker count for `requested` (0 = environment / hardware default).
int ResolveThreadCount(int requested);

struct ImportanceMap {
  Size size;
  Component component = Component::kOverall;
  std::vector<float> values;  // row-major
  std::size_t num_masks = 0;
  std::string fingerprint;
  std::vector<std::string> warnings;

  float at(int y, int x) const {
    return values[static_cast<std::size_t>(y) * size.width + x];
  }
};

struct RunReport {
  std::vector<ImportanceMap> maps;
  double wall_seconds = 0.0;
  std::string encoder_id;
  MaskConfig masks;

  // Throws kInvalidArgument when the component was not computed.
  const ImportanceMap& Get(Component component) const;
  bool Has(Component component) const;
};

struct Similarity {
  double value = 0.0;
  bool degenerate = false;  // a norm fell below 1e-12; value is 0
};

Similarity CosineSimilarity(std::span<const float> a, std::span<const float> b);

using PerturbFn = std::function<ImageTensor(const SoftMask&)>;
// Empty means the perturbation mask itself is the attribution weight.
using WeightFn = std::function<SoftMask(const SoftMask&)>;

// Generic estimator: reference embedding f(base), perturbed inputs
// perturbed_of(M_n), weights mask_for_weight(M_n).
ImportanceMap EstimateImportance(const Encoder& encoder,
                                 const ImageTensor& base,
                                 const PerturbFn& perturbed_of,
                                 const WeightFn& mask_for_weight,
                                 const EngineOptions& options);

ImportanceMap OverallImportance(const Encoder& encoder, const ImageTensor& img,
                                const EngineOptions& options);
ImportanceMap ColorImportance(const Encoder& encoder, const ImageTensor& img,
                              const EngineOptions& options);
ImportanceMap ShapeImportance(const Encoder& encoder, const ImageTensor& img,
                              const EngineOptions& options);
ImportanceMap TextureImportance(const Encoder& encoder, const ImageTensor& img,
                                const EngineOptions& options);

// All requested components in one pass over a shared mask stream. Each map
// equals the one its single-component function returns.
RunReport Explain(const Encoder& encoder, const ImageTensor& img,
                  std::span<const Component> components,
                  const EngineOptions& options);

}  // namespace percept

#endif  // PERCEPT_ENGINE_HPP_
