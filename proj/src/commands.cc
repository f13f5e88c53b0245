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

#include <algorithm>
#include <cctype>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "percept/cli.hpp"
#include "percept/encoder.hpp"
#include "percept/error.hpp"
#include "percept/io.hpp"
#include "percept/masks.hpp"

#ifndef PERCEPT_XAI_VERSION
#define PERCEPT_XAI_VERSION "dev"
#endif

namespace percept {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string MetaFor(const RunManifest& m, std::size_t i) {
  return m.metas.empty() ? std::string() : m.metas[i];
}

ImageTensor FitToEncoder(const ImageTensor& img, const Encoder& encoder) {
  const Size target = encoder.spec().input_size;
  if (img.size() == target) return img;
  return ResizeBicubic(img, target.height, target.width);
}

void EnsureDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::kIo, "cannot create output directory " +
                                    dir.string() + ": " + ec.message());
  }
}

json MapStats(const ImportanceMap& map) {
  const auto [lo, hi] = std::minmax_element(map.values.begin(),
                                            map.values.end());
  double mean = 0.0;
  for (const float v : map.values) mean += v;
  mean /= static_cast<double>(map.values.size());
  return {{"min", *lo}, {"max", *hi}, {"mean", mean},
          {"fingerprint", map.fingerprint}, {"warnings", map.warnings}};
}

json MaskJson(const MaskConfig& masks, Size target) {
  return {{"seed", masks.seed},
          {"num_masks", masks.num_masks},
          {"keep_prob", masks.keep_prob},
          {"grid", std::to_string(masks.cell_rows) + "x" +
                       std::to_string(masks.cell_cols)},
          {"upsample_factor", masks.crop == CropMode::kRandom
                                  ? masks.ResolvedUpsampleFactor(target)
                                  : 0},
          {"upsampling",
           masks.upsampling == Upsampling::kBicubic ? "bicubic" : "nearest"},
          {"crop", masks.crop == CropMode::kRandom ? "random" : "none"},
          {"sampling", masks.sampling == Sampling::kMonteCarlo
                           ? "monte-carlo"
                           : "exhaustive"}};
}

void WriteJson(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

void AppendWarnings(CommandResult& result, const RunReport& run,
                    std::ostream& log, const std::string& context) {
  for (const auto& map : run.maps) {
    for (const auto& w : map.warnings) {
      const std::string line =
          context + ToString(map.component).data() + ": " + w;
      log << "warning: " << line << "\n";
      result.warnings.push_back(line);
    }
  }
}

}  // namespace

std::string_view Version() { return PERCEPT_XAI_VERSION; }

void RunManifest::Validate() const {
  if (models.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no model given (--model)");
  }
  if (!metas.empty() && metas.size() != models.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "--meta must be given once per --model or not at all");
  }
  if (components.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no components requested");
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (std::size_t j = i + 1; j < components.size(); ++j) {
      if (components[i] == components[j]) {
        throw Error(ErrorKind::kInvalidArgument,
                    "component listed twice: " +
                        std::string(ToString(components[i])));
      }
    }
  }
  render.Validate();
}

std::vector<fs::path> ListImages(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::kIo, "not a directory: " + dir.string());
  }
  static const std::vector<std::string> kExtensions = {
      ".png", ".jpg", ".jpeg", ".bmp", ".ppm", ".pgm", ".tif", ".tiff"};
  std::vector<fs::path> images;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (std::find(kExtensions.begin(), kExtensions.end(), ext) !=
        kExtensions.end()) {
      images.push_back(entry.path());
    }
  }
  std::sort(images.begin(), images.end());
  return images;
}

CommandResult RunExplain(const RunManifest& manifest, std::ostream& log) {
  manifest.Validate();
  if (manifest.image.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "explain needs --image");
  }
  const auto start = std::chrono::steady_clock::now();
  const int threads = ResolveThreadCount(manifest.engine.threads);
  const auto encoder =
      LoadEncoder(manifest.models.front(), MetaFor(manifest, 0), threads);
  const double load_seconds = SecondsSince(start);

  const ImageTensor original = LoadImage(manifest.image);
  const ImageTensor analyzed = FitToEncoder(original, *encoder);
  EnsureDirectory(manifest.out);

  log << "explaining " << manifest.image.string() << " with "
      << encoder->spec().name << " (" << manifest.engine.masks.num_masks
      << " masks)\n";
  const RunReport run =
      Explain(*encoder, analyzed, manifest.components, manifest.engine);

  CommandResult result;
  AppendWarnings(result, run, log, "");
  json maps = json::object();
  for (const ImportanceMap& map : run.maps) {
    const std::string name(ToString(map.component));
    const fs::path raw = manifest.out / (name + ".map");
    const fs::path png = manifest.out / (name + "_overlay.png");
    WriteRawMap(map, raw);
    SavePng(RenderOverlay(map,
                          manifest.full_resolution ? original : analyzed,
                          manifest.render),
            png);
    result.written.push_back(raw);
    result.written.push_back(png);
    json entry = MapStats(map);
    entry["raw"] = raw.filename().string();
    entry["overlay"] = png.filename().string();
    maps[name] = entry;
  }

  json summary = {
      {"version", Version()},
      {"image", manifest.image.string()},
      {"encoder",
       {{"name", encoder->spec().name},
        {"source", encoder->spec().source},
        {"input_size", ToString(encoder->spec().input_size)},
        {"embedding_dim", encoder->embedding_dim()}}},
      {"masks", MaskJson(manifest.engine.masks, analyzed.size())},
      {"normalization", ToString(manifest.engine.normalization)},
      {"blur_sigma", manifest.engine.components.blur_sigma},
      {"canny",
       {{"low", manifest.engine.components.canny.low_threshold},
        {"high", manifest.engine.components.canny.high_threshold},
        {"sigma", manifest.engine.components.canny.smoothing_sigma}}},
      {"maps", maps},
      {"timings",
       {{"model_load_seconds", load_seconds},
        {"estimation_seconds", run.wall_seconds},
        {"total_seconds", SecondsSince(start)}}}};
  const fs::path summary_path = manifest.out / "summary.json";
  WriteJson(summary, summary_path);
  result.written.push_back(summary_path);
  log << "wrote " << result.written.size() << " files to "
      << manifest.out.string() << "\n";
  return result;
}

CommandResult RunBatch(const RunManifest& manifest, std::ostream& log,
                       const std::atomic<bool>* interrupted) {
  manifest.Validate();
  if (manifest.images_dir.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "batch needs --images-dir");
  }
  const auto images = ListImages(manifest.images_dir);
  if (images.empty()) {
    throw Error(ErrorKind::kEmptyInput,
                "no images found in " + manifest.images_dir.string());
  }
  EnsureDirectory(manifest.out);

  const int threads = ResolveThreadCount(manifest.engine.threads);
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(images.size())));
  EngineOptions engine = manifest.engine;
  engine.threads = std::max(1, threads / workers);
  const auto encoder =
      LoadEncoder(manifest.models.front(), MetaFor(manifest, 0), workers);

  const fs::path csv_path = manifest.out / "agreement.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw Error(ErrorKind::kIo, "cannot write " + csv_path.string());
  csv << CsvHeader() << "\n" << std::flush;

  CommandResult result;
  std::mutex mu;
  // Slot i: nullopt while pending; a report, or an empty id for a skip.
  std::vector<std::optional<AgreementReport>> slots(images.size());
  std::vector<bool> done(images.size(), false);
  std::vector<AgreementReport> completed;
  std::size_t next_emit = 0;
  std::size_t finished = 0;
  std::atomic<std::size_t> next_image{0};

  const std::vector<Component> all(kAllComponents.begin(),
                                   kAllComponents.end());
  auto stop_requested = [&] {
    return interrupted != nullptr && interrupted->load();
  };

  auto emit_ready = [&] {
    while (next_emit < images.size() && done[next_emit]) {
      if (slots[next_emit]) {
        csv << CsvRow(*slots[next_emit]) << "\n" << std::flush;
        completed.push_back(*slots[next_emit]);
      }
      ++next_emit;
    }
  };

  auto worker = [&] {
    for (;;) {
      if (stop_requested()) return;
      const std::size_t i = next_image.fetch_add(1);
      if (i >= images.size()) return;
      const fs::path& path = images[i];
      const std::string id = path.filename().string();
      std::optional<AgreementReport> report;
      std::vector<std::string> warnings;
      try {
        const ImageTensor img = FitToEncoder(LoadImage(path), *encoder);
        const RunReport run = Explain(*encoder, img, all, engine);
        for (const auto& map : run.maps) {
          for (const auto& w : map.warnings) {
            warnings.push_back(id + " " + ToString(map.component).data() +
                               ": " + w);
          }
        }
        report = ScoreRun(run, id, manifest.mode, &warnings);
        if (manifest.dump_maps) {
          const fs::path dir = manifest.out / "maps" / path.stem();
          EnsureDirectory(dir);
          for (const auto& map : run.maps) {
            WriteRawMap(map, dir / (std::string(ToString(map.component)) +
                                    ".map"));
          }
        }
      } catch (const Error& e) {
        // Unreadable or unusable images are skipped, not fatal.
        warnings.push_back("skipping " + id + ": " + e.what());
      }
      std::lock_guard lock(mu);
      for (const auto& w : warnings) {
        log << "warning: " << w << "\n";
        result.warnings.push_back(w);
      }
      slots[i] = std::move(report);
      done[i] = true;
      ++finished;
      log << "[" << finished << "/" << images.size() << "] " << id << "\n";
      emit_ready();
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // Rows finished out of order behind an unfinished slot (interrupt only).
  for (std::size_t i = next_emit; i < images.size(); ++i) {
    if (done[i] && slots[i]) {
      csv << CsvRow(*slots[i]) << "\n";
      completed.push_back(*slots[i]);
    }
  }

  if (!completed.empty()) {
    csv << CsvRow(Aggregate(completed)) << "\n";
  }
  csv.flush();
  result.written.push_back(csv_path);

  if (stop_requested()) {
    log << "interrupted after " << completed.size() << " images\n";
    result.exit_code = kInterruptedExitCode;
    return result;
  }
  if (completed.empty()) {
    throw Error(ErrorKind::kEmptyInput, "none of the images could be processed");
  }
  log << "wrote " << csv_path.string() << " (" << completed.size()
      << " images)\n";
  return result;
}

CommandResult RunCompare(const RunManifest& manifest, std::ostream& log) {
  manifest.Validate();
  if (manifest.models.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "compare needs at least two --model entries");
  }
  if (manifest.image.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "compare needs --image");
  }
  const ImageTensor original = LoadImage(manifest.image);
  EnsureDirectory(manifest.out);
  const int threads = ResolveThreadCount(manifest.engine.threads);

  std::vector<std::unique_ptr<Encoder>> encoders;
  Size tile{0, 0};
  for (std::size_t i = 0; i < manifest.models.size(); ++i) {
    encoders.push_back(
        LoadEncoder(manifest.models[i], MetaFor(manifest, i), threads));
    const Size s = encoders.back()->spec().input_size;
    tile.height = std::max(tile.height, s.height);
    tile.width = std::max(tile.width, s.width);
  }
  const ImageTensor tile_base =
      original.size() == tile ? original
                              : ResizeBicubic(original, tile.height, tile.width);

  CommandResult result;
  const std::vector<Component> all(kAllComponents.begin(),
                                   kAllComponents.end());
  std::vector<Rgb8Image> tiles;
  std::vector<AgreementReport> reports;
  for (const auto& encoder : encoders) {
    log << "explaining with " << encoder->spec().name << "\n";
    const RunReport run = Explain(*encoder, FitToEncoder(original, *encoder),
                                  all, manifest.engine);
    AppendWarnings(result, run, log, encoder->spec().name + " ");
    reports.push_back(ScoreRun(run, encoder->spec().name, manifest.mode,
                               &result.warnings));
    for (const Component c : manifest.components) {
      tiles.push_back(RenderOverlay(run.Get(c), tile_base, manifest.render));
    }
  }

  const fs::path grid_path = manifest.out / "compare_grid.png";
  SavePng(RenderGrid(tiles, static_cast<int>(encoders.size()),
                     static_cast<int>(manifest.components.size())),
          grid_path);
  const fs::path csv_path = manifest.out / "compare.csv";
  WriteAgreementCsv(csv_path, reports);
  result.written = {grid_path, csv_path};
  log << "wrote " << grid_path.string() << " and " << csv_path.string()
      << "\n";
  return result;
}

}  // namespace percept
