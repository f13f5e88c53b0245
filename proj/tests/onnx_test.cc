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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "percept/encoder.hpp"
#include "percept/engine.hpp"
#include "percept/error.hpp"
#include "test_util.hpp"

#ifndef PERCEPT_ONNX_FIXTURE_DIR
#define PERCEPT_ONNX_FIXTURE_DIR "onnx_fixtures"
#endif

namespace percept {
namespace {

namespace fs = std::filesystem;

constexpr int kSize = 32;
constexpr int kDim = 16;
constexpr int kInputs = 8;

const fs::path kDir = PERCEPT_ONNX_FIXTURE_DIR;

std::vector<float> ReadFloats(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  std::vector<float> v(static_cast<std::size_t>(in.tellg()) / sizeof(float));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(v.data()), v.size() * sizeof(float));
  return v;
}

double Cosine(const std::vector<float>& a, const std::vector<float>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += double(a[i]) * b[i];
    aa += double(a[i]) * a[i];
    bb += double(b[i]) * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

class OnnxTest : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!fs::exists(kDir / "tiny.onnx")) {
      GTEST_SKIP() << "ONNX fixtures not generated (python/torch/onnx "
                      "unavailable)";
    }
  }

  static std::unique_ptr<Encoder> Load(int concurrency = 1) {
    return LoadEncoder((kDir / "tiny.onnx").string(), "", concurrency);
  }

  // Planar fixture input n as an interleaved image.
  static ImageTensor Input(int n) {
    static const std::vector<float> all = ReadFloats(kDir / "tiny_inputs.bin");
    ImageTensor img(kSize, kSize, 3);
    const std::size_t plane = kSize * kSize;
    for (int c = 0; c < 3; ++c) {
      for (int y = 0; y < kSize; ++y) {
        for (int x = 0; x < kSize; ++x) {
          img.at(y, x, c) =
              all[(n * 3 + c) * plane + static_cast<std::size_t>(y) * kSize + x];
        }
      }
    }
    return img;
  }

  static std::vector<float> Expected(int n) {
    static const std::vector<float> all =
        ReadFloats(kDir / "tiny_expected.bin");
    return {all.begin() + n * kDim, all.begin() + (n + 1) * kDim};
  }
};

TEST_F(OnnxTest, SidecarIsPickedUp) {
  const auto enc = Load();
  EXPECT_EQ(enc->spec().name, "tiny-convnet");
  EXPECT_EQ(enc->spec().input_size, (Size{kSize, kSize}));
  EXPECT_EQ(enc->spec().normalization, InputNormalization::ImageNet());
  EXPECT_EQ(enc->embedding_dim(), kDim);
}

TEST_F(OnnxTest, MatchesSourceFramework) {
  const auto enc = Load();
  for (int n = 0; n < kInputs; ++n) {
    const Embedding got = enc->Embed(Input(n));
    const std::vector<float> want = Expected(n);
    ASSERT_EQ(got.size(), want.size());
    EXPECT_GE(Cosine(got, want), 0.9999) << n;
    for (int d = 0; d < kDim; ++d) {
      EXPECT_NEAR(got[d], want[d], 1e-4 * (1.0 + std::abs(want[d])));
    }
  }
}

TEST_F(OnnxTest, RepeatedCallsAreIdentical) {
  const auto enc = Load();
  EXPECT_EQ(enc->Embed(Input(3)), enc->Embed(Input(3)));
}

TEST_F(OnnxTest, BatchMatchesSingle) {
  const auto enc = Load();
  std::vector<ImageTensor> batch;
  for (int n = 0; n < kInputs; ++n) batch.push_back(Input(n));
  const auto out = enc->EmbedBatch(batch);
  ASSERT_EQ(out.size(), batch.size());
  for (int n = 0; n < kInputs; ++n) {
    const Embedding single = enc->Embed(batch[n]);
    EXPECT_GE(Cosine(out[n], single), 1.0 - 1e-5);
    for (int d = 0; d < kDim; ++d) EXPECT_NEAR(out[n][d], single[d], 1e-5);
  }
}

TEST_F(OnnxTest, ConcurrentCallsAgree) {
  const auto enc = Load(3);
  const Embedding ref = enc->Embed(Input(1));
  std::vector<Embedding> got(6);
  std::vector<std::thread> pool;
  for (int t = 0; t < 6; ++t) {
    pool.emplace_back([&, t] { got[t] = enc->Embed(Input(1)); });
  }
  for (auto& th : pool) th.join();
  for (const auto& g : got) EXPECT_EQ(g, ref);
}

TEST_F(OnnxTest, DeclaredDimensionIsChecked) {
  const fs::path dir = testing::ScratchDir("onnx_dim");
  EncoderSpec spec = LoadSidecar(kDir / "tiny.json");
  spec.embedding_dim = kDim + 1;
  SaveSidecar(spec, dir / "bad.json");
  try {
    LoadEncoder((kDir / "tiny.onnx").string(), (dir / "bad.json").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShapeMismatch);
  }
}

TEST_F(OnnxTest, WrongInputSizeIsRejected) {
  const auto enc = Load();
  try {
    enc->Embed(testing::RandomImage(kSize + 1, kSize, 3, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShapeMismatch);
  }
}

TEST_F(OnnxTest, DrivesTheEngine) {
  const auto enc = Load(2);
  EngineOptions opts;
  opts.masks.num_masks = 64;
  opts.threads = 2;
  const RunReport run = Explain(*enc, Input(0), kAllComponents, opts);
  ASSERT_EQ(run.maps.size(), 4u);
  for (const auto& map : run.maps) {
    for (const float v : map.values) ASSERT_TRUE(std::isfinite(v));
  }
  opts.threads = 1;
  EXPECT_EQ(OverallImportance(*enc, Input(0), opts).values,
            run.Get(Component::kOverall).values);
}

}  // namespace
}  // namespace percept
