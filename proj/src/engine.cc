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

#include "percept/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>

#include "percept/error.hpp"

namespace percept {
namespace {

// Masks per work unit. Fixed so the summation order, and therefore every
// output bit, is independent of the worker count.
constexpr std::size_t kChunkSize = 32;
constexpr double kDegenerateNorm = 1e-12;

struct Job {
  Component component = Component::kOverall;
  Embedding reference;
  PerturbFn perturb;
  WeightFn weight;
  bool flat_zero = false;  // degenerate: skip sampling, emit zeros
  std::vector<std::string> warnings;
};

struct Partial {
  std::vector<std::vector<double>> weighted;  // per job: sum w * s * W
  std::vector<std::vector<double>> coverage;  // per job: sum w * W
  std::vector<std::size_t> degenerate;        // per job
};

std::uint64_t Fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string Fingerprint(const Encoder& encoder, const EngineOptions& options,
                        Component component) {
  const auto& spec = encoder.spec();
  std::ostringstream os;
  os.precision(17);
  os << options.masks.Describe() << ";norm=" << ToString(options.normalization)
     << ";blur=" << options.components.blur_sigma
     << ";canny=" << options.components.canny.low_threshold << ","
     << options.components.canny.high_threshold << ","
     << options.components.canny.smoothing_sigma
     << ";encoder=" << spec.source << "|" << spec.name << "|"
     << ToString(spec.input_size);
  for (int c = 0; c < 3; ++c) {
    os << "|" << spec.normalization.mean[c] << "/" << spec.normalization.std[c];
  }
  os << ";component=" << ToString(component);
  std::ostringstream hex;
  hex << std::hex << Fnv1a(os.str());
  return hex.str();
}

Partial ProcessChunk(const Encoder& encoder, const MaskStream& stream,
                     const std::vector<Job>& jobs, std::size_t begin,
                     std::size_t end, bool track_coverage, int batch_size) {
  const std::size_t area = stream.target().area();
  Partial partial;
  partial.weighted.assign(jobs.size(), std::vector<double>(area, 0.0));
  if (track_coverage) {
    partial.coverage.assign(jobs.size(), std::vector<double>(area, 0.0));
  }
  partial.degenerate.assign(jobs.size(), 0);

  std::vector<WeightedMask> masks;
  masks.reserve(end - begin);
  for (std::size_t k = begin; k < end; ++k) masks.push_back(stream.At(k));

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    if (job.flat_zero) continue;
    auto& acc = partial.weighted[j];
    for (std::size_t b = 0; b < masks.size(); b += batch_size) {
      const std::size_t n = std::min<std::size_t>(batch_size, masks.size() - b);
      std::vector<ImageTensor> inputs;
      inputs.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        inputs.push_back(job.perturb(masks[b + i].mask));
      }
      const auto embeddings = encoder.EmbedBatch(inputs);
      for (std::size_t i = 0; i < n; ++i) {
        const WeightedMask& wm = masks[b + i];
        const Similarity sim = CosineSimilarity(job.reference, embeddings[i]);
        if (sim.degenerate) ++partial.degenerate[j];
        std::optional<SoftMask> custom;
        if (job.weight) custom = job.weight(wm.mask);
        const auto weight_mask = custom ? custom->data() : wm.mask.data();
        const double scale = wm.weight * sim.value;
        for (std::size_t p = 0; p < area; ++p) {
          acc[p] += scale * weight_mask[p];
        }
        if (track_coverage) {
          auto& cov = partial.coverage[j];
          for (std::size_t p = 0; p < area; ++p) {
            cov[p] += wm.weight * weight_mask[p];
          }
        }
      }
    }
  }
  return partial;
}

void Merge(Partial& total, const Partial& part) {
  for (std::size_t j = 0; j < part.weighted.size(); ++j) {
    for (std::size_t p = 0; p < part.weighted[j].size(); ++p) {
      total.weighted[j][p] += part.weighted[j][p];
    }
    if (!part.coverage.empty()) {
      for (std::size_t p = 0; p < part.coverage[j].size(); ++p) {
        total.coverage[j][p] += part.coverage[j][p];
      }
    }
    total.degenerate[j] += part.degenerate[j];
  }
}

std::vector<ImportanceMap> Run(const Encoder& encoder, Size size,
                               std::vector<Job> jobs,
                               const EngineOptions& options) {
  if (options.batch_size < 1) {
    throw Error(ErrorKind::kInvalidArgument, "batch size must be >= 1");
  }
  const MaskStream stream(options.masks, size);
  const bool rise = options.normalization == MapNormalization::kRise;
  const std::size_t chunks = (stream.size() + kChunkSize - 1) / kChunkSize;
  const int workers = static_cast<int>(std::min<std::size_t>(
      chunks, static_cast<std::size_t>(ResolveThreadCount(options.threads))));

  Partial total;
  total.weighted.assign(jobs.size(), std::vector<double>(size.area(), 0.0));
  if (rise) {
    total.coverage.assign(jobs.size(), std::vector<double>(size.area(), 0.0));
  }
  total.degenerate.assign(jobs.size(), 0);

  std::mutex mu;
  std::map<std::size_t, Partial> pending;
  std::size_t next_merge = 0;
  std::atomic<std::size_t> next_chunk{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= chunks || failed.load()) return;
      try {
        const std::size_t begin = c * kChunkSize;
        const std::size_t end = std::min(stream.size(), begin + kChunkSize);
        Partial part = ProcessChunk(encoder, stream, jobs, begin, end, rise,
                                    options.batch_size);
        std::lock_guard lock(mu);
        pending.emplace(c, std::move(part));
        // Merge strictly in chunk order.
        for (auto it = pending.find(next_merge); it != pending.end();
             it = pending.find(next_merge)) {
          Merge(total, it->second);
          pending.erase(it);
          ++next_merge;
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<ImportanceMap> maps;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    ImportanceMap map;
    map.size = size;
    map.component = jobs[j].component;
    map.num_masks = stream.size();
    map.fingerprint = Fingerprint(encoder, options, jobs[j].component);
    map.warnings = std::move(jobs[j].warnings);
    map.values.resize(size.area());
    for (std::size_t p = 0; p < size.area(); ++p) {
      double v = total.weighted[j][p];
      if (rise) {
        const double cov = total.coverage[j][p];
        v = cov > 0.0 ? v / cov : 0.0;
      }
      map.values[p] = static_cast<float>(v);
    }
    if (total.degenerate[j] > 0) {
      map.warnings.push_back(std::to_string(total.degenerate[j]) +
                             " perturbed inputs produced a zero embedding "
                             "(similarity taken as 0)");
    }
    maps.push_back(std::move(map));
  }
  return maps;
}

Embedding ReferenceEmbedding(const Encoder& encoder, const ImageTensor& base,
                             Component component) {
  Embedding reference = encoder.Embed(base);
  double norm = 0.0;
  for (const float v : reference) norm += static_cast<double>(v) * v;
  if (std::sqrt(norm) < kDegenerateNorm) {
    throw Error(ErrorKind::kUninformativeEncoder,
                "uninformative encoder: zero reference embedding for the " +
                    std::string(ToString(component)) + " component");
  }
  return reference;
}

bool AllZero(const ImageTensor& img) {
  const auto d = img.data();
  return std::all_of(d.begin(), d.end(), [](float v) { return v == 0.0f; });
}

Job MakeJob(const Encoder& encoder, const ImageTensor& img,
            Component component, const ComponentParams& params) {
  if (img.channels() != 3) {
    throw Error(ErrorKind::kShapeMismatch,
                "component analysis needs a 3-channel image");
  }
  const ImageTensor black(img.height(), img.width(), 3, 0.0f);
  Job job;
  job.component = component;
  switch (component) {
    case Component::kOverall: {
      job.reference = ReferenceEmbedding(encoder, img, component);
      job.perturb = [img, black](const SoftMask& m) {
        return Composite(img, black, m);
      };
      break;
    }
    case Component::kColor: {
      job.reference = ReferenceEmbedding(encoder, img, component);
      job.perturb = [img, gray = ToGrayscale(img)](const SoftMask& m) {
        return Composite(img, gray, m);
      };
      break;
    }
    case Component::kShape: {
      ImageTensor edges = CannyEdges(img, params.canny);
      if (AllZero(edges)) {
        job.flat_zero = true;
        job.warnings.push_back(
            "no edges detected; shape map is defined as flat zero");
        break;
      }
      job.reference = ReferenceEmbedding(encoder, edges, component);
      job.perturb = [edges = std::move(edges), black](const SoftMask& m) {
        return Composite(edges, black, m);
      };
      break;
    }
    case Component::kTexture: {
      ImageTensor gray = ToGrayscale(img);
      ImageTensor blurred = GaussianBlur(gray, params.blur_sigma);
      job.reference = ReferenceEmbedding(encoder, gray, component);
      job.perturb = [gray = std::move(gray), blurred = std::move(blurred),
                     edges = CannyEdges(img, params.canny)](const SoftMask& m) {
        return Composite(gray, blurred, TextureMask(m, edges));
      };
      break;
    }
  }
  return job;
}

ImportanceMap Single(const Encoder& encoder, const ImageTensor& img,
                     Component component, const EngineOptions& options) {
  std::vector<Job> jobs;
  jobs.push_back(MakeJob(encoder, img, component, options.components));
  return std::move(Run(encoder, img.size(), std::move(jobs), options).front());
}

}  // namespace

std::string_view ToString(Component component) {
  switch (component) {
    case Component::kOverall: return "overall";
    case Component::kColor: return "color";
    case Component::kShape: return "shape";
    case Component::kTexture: return "texture";
  }
  return "unknown";
}

Component ParseComponent(std::string_view name) {
  for (const Component c : kAllComponents) {
    if (ToString(c) == name) return c;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "unknown component '" + std::string(name) +
                  "' (expected overall, color, shape, texture)");
}

std::string_view ToString(MapNormalization normalization) {
  return normalization == MapNormalization::kEq2 ? "eq2" : "rise";
}

MapNormalization ParseMapNormalization(std::string_view name) {
  if (name == "eq2") return MapNormalization::kEq2;
  if (name == "rise") return MapNormalization::kRise;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown normalization '" + std::string(name) +
                  "' (expected eq2 or rise)");
}

int ResolveThreadCount(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PERCEPT_XAI_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

const ImportanceMap& RunReport::Get(Component component) const {
  for (const auto& m : maps) {
    if (m.component == component) return m;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "component '" + std::string(ToString(component)) +
                  "' was not computed");
}

bool RunReport::Has(Component component) const {
  return std::any_of(maps.begin(), maps.end(), [&](const ImportanceMap& m) {
    return m.component == component;
  });
}

Similarity CosineSimilarity(std::span<const float> a,
                            std::span<const float> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "cosine similarity of vectors with dims " +
                    std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na < kDegenerateNorm || nb < kDegenerateNorm) return {0.0, true};
  return {std::clamp(dot / (na * nb), -1.0, 1.0), false};
}

ImportanceMap EstimateImportance(const Encoder& encoder,
                                 const ImageTensor& base,
                                 const PerturbFn& perturbed_of,
                                 const WeightFn& mask_for_weight,
                                 const EngineOptions& options) {
  if (base.size() != encoder.spec().input_size) {
    throw Error(ErrorKind::kShapeMismatch,
                "base image " + ToString(base.size()) +
                    " does not match encoder input " +
                    ToString(encoder.spec().input_size));
  }
  std::vector<Job> jobs(1);
  jobs[0].reference = ReferenceEmbedding(encoder, base, Component::kOverall);
  jobs[0].perturb = perturbed_of;
  jobs[0].weight = mask_for_weight;
  return std::move(Run(encoder, base.size(), std::move(jobs), options).front());
}

ImportanceMap OverallImportance(const Encoder& encoder, const ImageTensor& img,
                                const EngineOptions& options) {
  return Single(encoder, img, Component::kOverall, options);
}

ImportanceMap ColorImportance(const Encoder& encoder, const ImageTensor& img,
                              const EngineOptions& options) {
  return Single(encoder, img, Component::kColor, options);
}

ImportanceMap ShapeImportance(const Encoder& encoder, const ImageTensor& img,
                              const EngineOptions& options) {
  return Single(encoder, img, Component::kShape, options);
}

ImportanceMap TextureImportance(const Encoder& encoder, const ImageTensor& img,
                                const EngineOptions& options) {
  return Single(encoder, img, Component::kTexture, options);
}

RunReport Explain(const Encoder& encoder, const ImageTensor& img,
                  std::span<const Component> components,
                  const EngineOptions& options) {
  if (components.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no components requested");
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<Job> jobs;
  for (const Component c : components) {
    jobs.push_back(MakeJob(encoder, img, c, options.components));
  }
  RunReport report;
  report.maps = Run(encoder, img.size(), std::move(jobs), options);
  report.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  report.encoder_id = encoder.spec().name;
  report.masks = options.masks;
  return report;
}

}  // namespace percept
