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

// Command implementations behind the percept-xai executable. Each command
// reads a RunManifest, writes its outputs under manifest.out, and throws
// percept::Error on fatal problems.

#ifndef PERCEPT_CLI_HPP_
#define PERCEPT_CLI_HPP_

#include <atomic>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "percept/agreement.hpp"
#include "percept/engine.hpp"
#include "percept/render.hpp"

namespace percept {

std::string_view Version();

struct RunManifest {
  std::vector<std::string> models;  // model paths or "toy:<name>"
  std::vector<std::string> metas;   // empty, or one sidecar per model
  std::filesystem::path image;
  std::filesystem::path images_dir;
  std::vector<Component> components = {kAllComponents.begin(),
                                       kAllComponents.end()};
  EngineOptions engine;
  AgreementMode mode = AgreementMode::kPearson;
  std::filesystem::path out = "percept_out";
  RenderOptions render;
  bool full_resolution = false;  // overlays at the input image resolution
  bool dump_maps = false;        // batch: also write per-image raw maps

  void Validate() const;
};

struct CommandResult {
  int exit_code = 0;
  std::vector<std::filesystem::path> written;
  std::vector<std::string> warnings;
};

// Exit code returned when a batch is stopped by `interrupted`.
inline constexpr int kInterruptedExitCode = 130;

// Raw map, PNG overlay per component, plus summary.json.
CommandResult RunExplain(const RunManifest& manifest, std::ostream& log);

// agreement.csv over every readable image in manifest.images_dir. Rows are
// flushed as soon as they are final, so an interrupted run keeps its
// completed rows and still gets an aggregate footer.
CommandResult RunBatch(const RunManifest& manifest, std::ostream& log,
                       const std::atomic<bool>* interrupted = nullptr);

// compare_grid.png (models x components) and compare.csv.
CommandResult RunCompare(const RunManifest& manifest, std::ostream& log);

// Image files (png, jpg, jpeg, bmp, ppm, pgm, tif, tiff) in name order.
std::vector<std::filesystem::path> ListImages(
    const std::filesystem::path& dir);

}  // namespace percept

#endif  // PERCEPT_CLI_HPP_
