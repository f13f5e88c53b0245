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

// percept-xai command-line front end.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "percept/cli.hpp"
#include "percept/encoder.hpp"
#include "percept/error.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void OnSigint(int) { g_interrupted.store(true); }

struct Flags {
  std::vector<std::string> models;
  std::vector<std::string> metas;
  std::string image;
  std::string images_dir;
  std::string components = "overall,color,shape,texture";
  std::size_t num_masks = 8000;
  std::string grid = "7x7";
  double keep_prob = 0.5;
  std::uint64_t seed = 0;
  std::string mode = "pearson";
  std::string normalize = "eq2";
  std::string out = "percept_out";
  std::string colormap = "jet";
  double alpha = 0.5;
  int upsample_factor = 0;
  double blur_sigma = 5.0;
  double canny_low = 0.1;
  double canny_high = 0.2;
  int batch_size = 16;
  int threads = 0;
  bool full_res = false;
  bool dump_maps = false;
};

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

void ParseGrid(const std::string& text, int& rows, int& cols) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used_r = 0, used_c = 0;
    const std::string r = text.substr(0, x), c = text.substr(x + 1);
    rows = std::stoi(r, &used_r);
    cols = std::stoi(c, &used_c);
    if (used_r != r.size() || used_c != c.size()) {
      throw std::invalid_argument(text);
    }
  } catch (const std::logic_error&) {
    throw percept::Error(percept::ErrorKind::kInvalidArgument,
                         "--grid must look like 7x7, got '" + text + "'");
  }
}

percept::RunManifest ToManifest(const Flags& f) {
  percept::RunManifest m;
  m.models = f.models;
  m.metas = f.metas;
  m.image = f.image;
  m.images_dir = f.images_dir;
  m.components.clear();
  for (const auto& name : SplitList(f.components)) {
    m.components.push_back(percept::ParseComponent(name));
  }
  auto& masks = m.engine.masks;
  ParseGrid(f.grid, masks.cell_rows, masks.cell_cols);
  masks.num_masks = f.num_masks;
  masks.keep_prob = f.keep_prob;
  masks.seed = f.seed;
  masks.upsample_factor = f.upsample_factor;
  m.engine.normalization = percept::ParseMapNormalization(f.normalize);
  m.engine.components.blur_sigma = f.blur_sigma;
  m.engine.components.canny.low_threshold = f.canny_low;
  m.engine.components.canny.high_threshold = f.canny_high;
  m.engine.batch_size = f.batch_size;
  m.engine.threads = f.threads;
  m.mode = percept::ParseAgreementMode(f.mode);
  m.out = f.out;
  m.render.colormap = f.colormap;
  m.render.alpha = f.alpha;
  m.full_resolution = f.full_res;
  m.dump_maps = f.dump_maps;
  return m;
}

void AddRunFlags(CLI::App* cmd, Flags& f, bool multi_model) {
  if (multi_model) {
    cmd->add_option("--model", f.models,
                    "model file or toy:<name> (repeat for each model)")
        ->required();
    cmd->add_option("--meta", f.metas, "sidecar JSON, one per --model");
  } else {
    cmd->add_option("--model", f.models, "model file or toy:<name>")
        ->required()
        ->expected(1);
    cmd->add_option("--meta", f.metas, "sidecar JSON")->expected(1);
  }
  cmd->add_option("--components", f.components,
                  "comma-separated subset of overall,color,shape,texture")
      ->capture_default_str();
  cmd->add_option("--num-masks", f.num_masks, "masks per component")
      ->capture_default_str();
  cmd->add_option("--grid", f.grid, "mask grid, ROWSxCOLS")
      ->capture_default_str();
  cmd->add_option("--keep-prob", f.keep_prob, "probability a cell is kept")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "mask RNG seed")->capture_default_str();
  cmd->add_option("--mode", f.mode, "agreement: pearson or raw-dot")
      ->capture_default_str();
  cmd->add_option("--normalize", f.normalize, "map normalization: eq2 or rise")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--colormap", f.colormap, "jet, hot or gray")
      ->capture_default_str();
  cmd->add_option("--alpha", f.alpha, "overlay opacity in [0,1]")
      ->capture_default_str();
  cmd->add_option("--upsample-factor", f.upsample_factor,
                  "grid upsampling factor (0: automatic)")
      ->capture_default_str();
  cmd->add_option("--blur-sigma", f.blur_sigma, "texture-removal blur sigma")
      ->capture_default_str();
  cmd->add_option("--canny-low", f.canny_low, "edge detector low threshold")
      ->capture_default_str();
  cmd->add_option("--canny-high", f.canny_high,
                  "edge detector high threshold")
      ->capture_default_str();
  cmd->add_option("--batch-size", f.batch_size, "encoder batch size")
      ->capture_default_str();
  cmd->add_option("--threads", f.threads,
                  "worker threads (0: PERCEPT_XAI_THREADS or all cores)")
      ->capture_default_str();
  cmd->add_flag("--full-res", f.full_res,
                "render overlays at the input image resolution");
}

int Report(const percept::CommandResult& result) {
  if (!result.warnings.empty()) {
    std::cerr << result.warnings.size() << " warning(s)\n";
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Color, shape and texture importance maps for image encoders",
               "percept-xai"};
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);

  Flags f;
  auto* explain = app.add_subcommand("explain", "importance maps for one image");
  AddRunFlags(explain, f, false);
  explain->add_option("--image", f.image, "input image")->required();

  auto* batch = app.add_subcommand("batch", "agreement scores over a directory");
  AddRunFlags(batch, f, false);
  batch->add_option("--images-dir", f.images_dir, "image directory")
      ->required();
  batch->add_flag("--dump-maps", f.dump_maps, "also write per-image raw maps");

  auto* compare = app.add_subcommand("compare", "compare encoders on one image");
  AddRunFlags(compare, f, true);
  compare->add_option("--image", f.image, "input image")->required();

  auto* toys = app.add_subcommand("toys", "list the built-in toy encoders");
  auto* version = app.add_subcommand("version", "print the version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*version) {
      std::cout << "percept-xai " << percept::Version() << "\n";
      return 0;
    }
    if (*toys) {
      for (const auto& toy : percept::ToyEncoders()) {
        std::cout << percept::kToyPrefix << toy.name << "\t"
                  << toy.description << "\n";
      }
      return 0;
    }
    const percept::RunManifest manifest = ToManifest(f);
    if (*explain) return Report(percept::RunExplain(manifest, std::cerr));
    if (*compare) return Report(percept::RunCompare(manifest, std::cerr));
    std::signal(SIGINT, OnSigint);
    return Report(percept::RunBatch(manifest, std::cerr, &g_interrupted));
  } catch (const percept::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
