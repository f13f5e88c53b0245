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
#include <vector>

#include <gtest/gtest.h>

#include "percept/error.hpp"
#include "percept/imgproc.hpp"
#include "percept/masks.hpp"
#include "test_util.hpp"

namespace percept {
namespace {

MaskConfig SmallConfig() {
  MaskConfig c;
  c.num_masks = 100;
  c.seed = 11;
  return c;
}

TEST(MaskConfig, DefaultsValidFor224) {
  const MaskConfig c;
  EXPECT_NO_THROW(c.Validate({224, 224}));
  EXPECT_EQ(c.ResolvedUpsampleFactor({224, 224}), 38);
  EXPECT_EQ(c.num_masks, 8000u);
  EXPECT_EQ(c.keep_prob, 0.5);
}

TEST(MaskConfig, RejectsBadDomains) {
  MaskConfig c;
  for (const double p : {0.0, 1.0, -0.2, 1.5}) {
    c = {};
    c.keep_prob = p;
    EXPECT_THROW(c.Validate({32, 32}), Error) << p;
  }
  c = {};
  c.num_masks = 0;
  EXPECT_THROW(c.Validate({32, 32}), Error);
  c = {};
  c.cell_rows = 0;
  EXPECT_THROW(c.Validate({32, 32}), Error);
}

TEST(MaskConfig, RequiresCropSlack) {
  MaskConfig c;
  c.upsample_factor = 32;  // 7 * 32 = 224: no room for a cell of jitter
  try {
    c.Validate({224, 224});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimensionMismatch);
  }
  c.upsample_factor = 256;  // the literal large factor is accepted
  EXPECT_NO_THROW(c.Validate({224, 224}));
}

TEST(MaskConfig, ExhaustiveConstraints) {
  MaskConfig c;
  c.sampling = Sampling::kExhaustive;
  c.cell_rows = c.cell_cols = 2;
  EXPECT_THROW(c.Validate({8, 8}), Error);  // random crop
  c.crop = CropMode::kNone;
  EXPECT_NO_THROW(c.Validate({8, 8}));
  c.cell_rows = c.cell_cols = 5;
  EXPECT_THROW(c.Validate({8, 8}), Error);
}

TEST(MaskConfig, DescribeSeparatesConfigs) {
  MaskConfig a, b;
  EXPECT_EQ(a.Describe(), b.Describe());
  b.seed = 1;
  EXPECT_NE(a.Describe(), b.Describe());
}

TEST(SampleLowRes, DeterministicPerIndex) {
  const MaskConfig c = SmallConfig();
  for (std::size_t k = 0; k < 20; ++k) {
    EXPECT_EQ(SampleLowRes(c, k), SampleLowRes(c, k));
  }
  EXPECT_NE(SampleLowRes(c, 0), SampleLowRes(c, 1));
  MaskConfig other = c;
  other.seed = 12;
  EXPECT_NE(SampleLowRes(c, 0), SampleLowRes(other, 0));
}

TEST(SampleLowRes, TinyProbabilityGivesZeros) {
  MaskConfig c = SmallConfig();
  c.keep_prob = 1e-9;
  for (std::size_t k = 0; k < c.num_masks; ++k) {
    EXPECT_EQ(SampleLowRes(c, k).ones(), 0);
  }
}

TEST(SampleLowRes, CellFrequencies) {
  MaskConfig c;
  c.num_masks = 10000;
  std::vector<int> ones(49, 0);
  for (std::size_t k = 0; k < c.num_masks; ++k) {
    const BinaryGrid g = SampleLowRes(c, k);
    for (int i = 0; i < 49; ++i) ones[i] += g.cells[i];
  }
  for (const int n : ones) {
    EXPECT_GE(n / 10000.0, 0.48);
    EXPECT_LE(n / 10000.0, 0.52);
  }
}

TEST(SampleLowRes, IndexOutOfRange) {
  const MaskConfig c = SmallConfig();
  try {
    SampleLowRes(c, c.num_masks);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOutOfRange);
  }
}

TEST(MakeMask, AllOnesAndAllZerosGrids) {
  const MaskConfig c = SmallConfig();
  const Size target{50, 60};
  BinaryGrid grid{7, 7, std::vector<std::uint8_t>(49, 1)};
  const SoftMask ones = GridToMask(c, grid, 3, target);
  for (const float v : ones.data()) EXPECT_EQ(v, 1.0f);
  grid.cells.assign(49, 0);
  const SoftMask zeros = GridToMask(c, grid, 3, target);
  for (const float v : zeros.data()) EXPECT_EQ(v, 0.0f);
}

TEST(MakeMask, ValuesInUnitRangeAndDeterministic) {
  const MaskConfig c = SmallConfig();
  for (std::size_t k = 0; k < 10; ++k) {
    const SoftMask m = MakeMask(c, k, {64, 48});
    EXPECT_EQ(m.size(), (Size{64, 48}));
    EXPECT_EQ(m, MakeMask(c, k, {64, 48}));
    for (const float v : m.data()) {
      EXPECT_GE(v, 0.0f);
      EXPECT_LE(v, 1.0f);
    }
  }
}

TEST(MakeMask, NoCropMatchesDirectResize) {
  MaskConfig c = SmallConfig();
  c.crop = CropMode::kNone;
  c.upsampling = Upsampling::kNearest;
  c.cell_rows = c.cell_cols = 2;
  const BinaryGrid g = SampleLowRes(c, 4);
  SoftMask cells(2, 2);
  for (int i = 0; i < 4; ++i) cells.data()[i] = g.cells[i];
  EXPECT_EQ(MakeMask(c, 4, {8, 8}), ResizeNearest(cells, 8, 8));
}

TEST(MakeMask, MeanFieldAtDefaultSettings) {
  MaskConfig c;
  const Size target{56, 56};
  std::vector<double> sum(target.area(), 0.0);
  for (std::size_t k = 0; k < c.num_masks; ++k) {
    const SoftMask m = MakeMask(c, k, target);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += m.data()[i];
  }
  const double n = static_cast<double>(c.num_masks);
  int within = 0;
  for (const double s : sum) {
    EXPECT_NEAR(s / n, 0.5, 0.05);
    within += std::abs(s / n - 0.5) <= 3.0 / std::sqrt(n);
  }
  EXPECT_GE(within, static_cast<int>(0.99 * sum.size()));
}

TEST(TextureMask, OrSemantics) {
  const SoftMask m = testing::RandomMask(6, 5, 1);
  EXPECT_EQ(TextureMask(m, ImageTensor(6, 5, 3, 0.0f)), m);
  const SoftMask full = TextureMask(m, ImageTensor(6, 5, 3, 1.0f));
  for (const float v : full.data()) EXPECT_EQ(v, 1.0f);
  SoftMask bm(2, 2, {0, 1, 0, 1});
  ImageTensor be(2, 2, 1, std::vector<float>{0, 0, 1, 1});
  EXPECT_EQ(TextureMask(bm, be), SoftMask(2, 2, {0, 1, 1, 1}));
}

TEST(TextureMask, DominatesInputs) {
  const SoftMask m = testing::RandomMask(9, 9, 2);
  const ImageTensor e = CannyEdges(testing::RandomImage(9, 9, 3, 3));
  const SoftMask t = TextureMask(m, e);
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 9; ++x) {
      EXPECT_GE(t.at(y, x), m.at(y, x));
      EXPECT_GE(t.at(y, x), e.at(y, x));
    }
  }
}

TEST(TextureMask, RejectsMismatch) {
  EXPECT_THROW(TextureMask(SoftMask(3, 3), ImageTensor(3, 4, 3)), Error);
}

TEST(MaskStream, CursorWalksEveryMask) {
  MaskConfig c = SmallConfig();
  c.num_masks = 5;
  MaskStream s(c, {40, 40});
  EXPECT_EQ(s.size(), 5u);
  std::size_t k = 0;
  while (s.HasNext()) {
    const WeightedMask w = s.Next();
    EXPECT_EQ(w.mask, MakeMask(c, k, {40, 40}));
    EXPECT_DOUBLE_EQ(w.weight, 0.2);
    ++k;
  }
  EXPECT_EQ(k, 5u);
  EXPECT_THROW(s.At(5), Error);
}

TEST(MaskStream, OrderIndependent) {
  const MaskConfig c = SmallConfig();
  const MaskStream s(c, {30, 30});
  const SoftMask late = s.At(77).mask;
  for (std::size_t k = 0; k < 77; ++k) s.At(k);
  EXPECT_EQ(s.At(77).mask, late);
}

TEST(MaskStream, ExhaustiveWeightsAreProbabilities) {
  MaskConfig c;
  c.cell_rows = c.cell_cols = 2;
  c.keep_prob = 0.3;
  c.crop = CropMode::kNone;
  c.upsampling = Upsampling::kNearest;
  c.sampling = Sampling::kExhaustive;
  const MaskStream s(c, {8, 8});
  ASSERT_EQ(s.size(), 16u);
  double total = 0.0;
  std::vector<double> mean(64, 0.0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const WeightedMask w = s.At(k);
    total += w.weight;
    for (int i = 0; i < 64; ++i) mean[i] += w.weight * w.mask.data()[i];
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  for (const double m : mean) EXPECT_NEAR(m, 0.3, 1e-12);
}

}  // namespace
}  // namespace percept
