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

#include "percept/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <string>
#include <utility>

#include "json.hpp"
#include "percept/error.hpp"
#include "percept/imgproc.hpp"

namespace percept {
namespace {

using json = nlohmann::json;

constexpr int kPoolGrid = 8;
constexpr int kFlattenWindow = 4;
constexpr int kConstantDim = 8;
constexpr double kBlurDiffSigma = 1.0;

// Block means over a rows x cols partition of a plane.
std::vector<float> PoolGrid(std::span<const float> plane, Size size, int rows,
                            int cols) {
  std::vector<float> out(static_cast<std::size_t>(rows) * cols, 0.0f);
  for (int by = 0; by < rows; ++by) {
    const int y0 = by * size.height / rows;
    const int y1 = std::max(y0 + 1, (by + 1) * size.height / rows);
    for (int bx = 0; bx < cols; ++bx) {
      const int x0 = bx * size.width / cols;
      const int x1 = std::max(x0 + 1, (bx + 1) * size.width / cols);
      double acc = 0.0;
      for (int y = y0; y < std::min(y1, size.height); ++y) {
        for (int x = x0; x < std::min(x1, size.width); ++x) {
          acc += plane[static_cast<std::size_t>(y) * size.width + x];
        }
      }
      out[static_cast<std::size_t>(by) * cols + bx] =
          static_cast<float>(acc / ((y1 - y0) * (x1 - x0)));
    }
  }
  return out;
}

using ToyFn = std::function<Embedding(std::span<const float> planar, Size)>;

struct ToyDef {
  ToyInfo info;
  std::function<int(Size)> dim;
  ToyFn fn;
};

std::span<const float> Channel(std::span<const float> planar, Size size,
                               int c) {
  return planar.subspan(c * size.area(), size.area());
}

const std::vector<ToyDef>& ToyDefs() {
  static const std::vector<ToyDef> defs = {
      {{"mean-rgb", "per-channel spatial mean (D=3); color-sensitive"},
       [](Size) { return 3; },
       [](std::span<const float> planar, Size size) {
         Embedding e(3);
         for (int c = 0; c < 3; ++c) {
           double acc = 0.0;
           for (const float v : Channel(planar, size, c)) acc += v;
           e[c] = static_cast<float>(acc / size.area());
         }
         return e;
       }},
      {{"edge-pool",
        "Canny edges pooled to 8x8 occupancy (D=64); shape-sensitive"},
       [](Size) { return kPoolGrid * kPoolGrid; },
       [](std::span<const float> planar, Size size) {
         std::vector<float> lum(size.area());
         const auto r = Channel(planar, size, 0);
         const auto g = Channel(planar, size, 1);
         const auto b = Channel(planar, size, 2);
         for (std::size_t i = 0; i < lum.size(); ++i) {
           lum[i] = static_cast<float>(kLumaRed * r[i] + kLumaGreen * g[i] +
                                       kLumaBlue * b[i]);
         }
         const auto edges = plane::DetectEdges(lum, size, CannyParams{});
         const std::vector<float> occupancy(edges.begin(), edges.end());
         return PoolGrid(occupancy, size, kPoolGrid, kPoolGrid);
       }},
      {{"blur-diff",
        "|img - blur(img)| pooled to 8x8 (D=64); texture-sensitive"},
       [](Size) { return kPoolGrid * kPoolGrid; },
       [](std::span<const float> planar, Size size) {
         std::vector<float> detail(size.area(), 0.0f);
         for (int c = 0; c < 3; ++c) {
           const auto ch = Channel(planar, size, c);
           const auto blurred = plane::Blur(ch, size, kBlurDiffSigma);
           for (std::size_t i = 0; i < detail.size(); ++i) {
             detail[i] += std::abs(ch[i] - blurred[i]) / 3.0f;
           }
         }
         return PoolGrid(detail, size, kPoolGrid, kPoolGrid);
       }},
      {{"constant", "fixed all-ones vector (D=8); invariant to the input"},
       [](Size) { return kConstantDim; },
       [](std::span<const float>, Size) {
         return Embedding(kConstantDim, 1.0f);
       }},
      {{"flatten-pool",
        "4x4 average pooling then flatten (D=3*ceil(H/4)*ceil(W/4)); "
        "identity-like"},
       [](Size size) {
         return 3 * ((size.height + kFlattenWindow - 1) / kFlattenWindow) *
                ((size.width + kFlattenWindow - 1) / kFlattenWindow);
       },
       [](std::span<const float> planar, Size size) {
         const int rows = (size.height + kFlattenWindow - 1) / kFlattenWindow;
         const int cols = (size.width + kFlattenWindow - 1) / kFlattenWindow;
         Embedding e;
         e.reserve(3 * rows * cols);
         for (int c = 0; c < 3; ++c) {
           const auto ch = Channel(planar, size, c);
           for (int by = 0; by < rows; ++by) {
             for (int bx = 0; bx < cols; ++bx) {
               double acc = 0.0;
               int n = 0;
               for (int y = by * kFlattenWindow;
                    y < std::min(size.height, (by + 1) * kFlattenWindow); ++y) {
                 for (int x = bx * kFlattenWindow;
                      x < std::min(size.width, (bx + 1) * kFlattenWindow);
                      ++x) {
                   acc += ch[static_cast<std::size_t>(y) * size.width + x];
                   ++n;
                 }
               }
               e.push_back(static_cast<float>(acc / n));
             }
           }
         }
         return e;
       }},
  };
  return defs;
}

class ToyEncoder final : public Encoder {
 public:
  ToyEncoder(EncoderSpec spec, const ToyDef& def)
      : Encoder(std::move(spec)), def_(def) {}

 protected:
  std::vector<Embedding> Run(std::span<const float> planar,
                             std::size_t count) const override {
    const Size size = spec_.input_size;
    const std::size_t stride = 3 * size.area();
    std::vector<Embedding> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(def_.fn(planar.subspan(i * stride, stride), size));
    }
    return out;
  }

 private:
  const ToyDef& def_;
};

json ReadJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo,
                "malformed metadata " + path.string() + ": " + e.what());
  }
}

}  // namespace

void EncoderSpec::Validate() const {
  if (input_size.height < 1 || input_size.width < 1) {
    throw Error(ErrorKind::kInvalidArgument, "encoder input size must be >= 1x1");
  }
  for (const float s : normalization.std) {
    if (!(s > 0.0f)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "normalization std entries must be > 0");
    }
  }
  if (embedding_dim < 0) {
    throw Error(ErrorKind::kInvalidArgument, "embedding_dim must be >= 0");
  }
}

EncoderSpec LoadSidecar(const std::filesystem::path& path) {
  const json j = ReadJson(path);
  EncoderSpec spec;
  try {
    spec.name = j.value("model_name", path.stem().string());
    const auto& size = j.at("input_size");
    spec.input_size = {size.at("height").get<int>(),
                       size.at("width").get<int>()};
    if (j.contains("normalization")) {
      const auto& norm = j.at("normalization");
      spec.normalization.mean = norm.at("mean").get<std::array<float, 3>>();
      spec.normalization.std = norm.at("std").get<std::array<float, 3>>();
    }
    spec.embedding_dim = j.value("embedding_dim", 0);
    if (j.contains("model_file")) {
      const std::filesystem::path model = j.at("model_file").get<std::string>();
      spec.source = model.is_absolute()
                        ? model.string()
                        : (path.parent_path() / model).string();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo,
                "invalid metadata " + path.string() + ": " + e.what());
  }
  spec.Validate();
  return spec;
}

void SaveSidecar(const EncoderSpec& spec, const std::filesystem::path& path) {
  json j;
  j["format_version"] = 1;
  j["model_name"] = spec.name;
  j["input_size"] = {{"height", spec.input_size.height},
                     {"width", spec.input_size.width}};
  j["normalization"] = {{"mean", spec.normalization.mean},
                        {"std", spec.normalization.std}};
  j["embedding_dim"] = spec.embedding_dim;
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

Encoder::Encoder(EncoderSpec spec) : spec_(std::move(spec)) {
  spec_.Validate();
}

Embedding Encoder::Embed(const ImageTensor& img) const {
  return EmbedBatch(std::span<const ImageTensor>(&img, 1)).front();
}

std::vector<Embedding> Encoder::EmbedBatch(
    std::span<const ImageTensor> imgs) const {
  if (imgs.empty()) return {};
  const Size size = spec_.input_size;
  const std::size_t plane = size.area();
  std::vector<float> planar(imgs.size() * 3 * plane);
  const auto& norm = spec_.normalization;
  for (std::size_t n = 0; n < imgs.size(); ++n) {
    const ImageTensor& img = imgs[n];
    if (img.size() != size || img.channels() != 3) {
      throw Error(ErrorKind::kShapeMismatch,
                  "encoder '" + spec_.name + "' expects 3x" + ToString(size) +
                      " input, got " + std::to_string(img.channels()) + "x" +
                      ToString(img.size()));
    }
    const auto src = img.data();
    float* dst = planar.data() + n * 3 * plane;
    for (std::size_t i = 0; i < plane; ++i) {
      for (int c = 0; c < 3; ++c) {
        dst[c * plane + i] = (src[3 * i + c] - norm.mean[c]) / norm.std[c];
      }
    }
  }
  auto out = Run(planar, imgs.size());
  if (out.size() != imgs.size()) {
    throw Error(ErrorKind::kShapeMismatch, "encoder returned " +
                                               std::to_string(out.size()) +
                                               " embeddings for " +
                                               std::to_string(imgs.size()));
  }
  for (const Embedding& e : out) {
    if (spec_.embedding_dim > 0 &&
        e.size() != static_cast<std::size_t>(spec_.embedding_dim)) {
      throw Error(ErrorKind::kShapeMismatch,
                  "embedding dim " + std::to_string(e.size()) +
                      " differs from declared " +
                      std::to_string(spec_.embedding_dim));
    }
    if (!std::all_of(e.begin(), e.end(),
                     [](float v) { return std::isfinite(v); })) {
      throw Error(ErrorKind::kNonFiniteOutput,
                  "encoder '" + spec_.name + "' produced a non-finite value");
    }
  }
  return out;
}

const std::vector<ToyInfo>& ToyEncoders() {
  static const std::vector<ToyInfo> catalog = [] {
    std::vector<ToyInfo> infos;
    for (const ToyDef& d : ToyDefs()) infos.push_back(d.info);
    return infos;
  }();
  return catalog;
}

std::unique_ptr<Encoder> MakeToyEncoder(std::string_view name,
                                        EncoderSpec spec) {
  for (const ToyDef& def : ToyDefs()) {
    if (def.info.name == name) {
      spec.source = std::string(kToyPrefix) + std::string(name);
      if (spec.name.empty()) spec.name = spec.source;
      spec.Validate();
      spec.embedding_dim = def.dim(spec.input_size);
      return std::make_unique<ToyEncoder>(std::move(spec), def);
    }
  }
  throw Error(ErrorKind::kUnknownEncoder,
              "unknown toy encoder '" + std::string(name) + "'");
}

std::unique_ptr<Encoder> LoadEncoder(const std::string& model,
                                     const std::string& meta_path,
                                     int max_concurrency) {
  if (model.starts_with(kToyPrefix)) {
    EncoderSpec spec;
    if (!meta_path.empty()) spec = LoadSidecar(meta_path);
    return MakeToyEncoder(std::string_view(model).substr(kToyPrefix.size()),
                          spec);
  }
  std::filesystem::path meta = meta_path;
  if (meta.empty()) {
    const std::filesystem::path model_path(model);
    for (const auto& candidate :
         {std::filesystem::path(model_path).replace_extension(".json"),
          std::filesystem::path(model + ".json")}) {
      if (std::filesystem::exists(candidate)) {
        meta = candidate;
        break;
      }
    }
    if (meta.empty()) {
      throw Error(ErrorKind::kModelLoad,
                  "no sidecar metadata found for model " + model);
    }
  }
  EncoderSpec spec = LoadSidecar(meta);
  spec.source = model;
  if (spec.name.empty()) spec.name = std::filesystem::path(model).stem();
  return LoadOnnxEncoder(std::move(spec), max_concurrency);
}

}  // namespace percept
