/*
 * Copyright 2026 The LAPT Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lapt/features.h"

#include <array>
#include <random>

#include "gtest/gtest.h"
#include "lapt/errors.h"

namespace lapt {
namespace features {
namespace {

Image RandomImage(std::mt19937_64& rng, int width, int height) {
  std::uniform_real_distribution<double> unit(0., 1.);
  Image image(width, height);
  for (double& value : image.data) value = unit(rng);
  return image;
}

SemanticImage RandomSemantic(std::mt19937_64& rng, int width, int height,
                             int num_classes) {
  std::uniform_int_distribution<int> label(0, num_classes);
  SemanticImage image(width, height);
  for (auto& value : image.labels) value = static_cast<std::uint8_t>(label(rng));
  return image;
}

TEST(RgbPyramidTest, ConstantWhiteImage) {
  const Image image(352, 128, 1.);
  const FeaturePyramid pyramid = RgbPyramid(image, kDefaultFactors);
  for (const FeatureMap& level : pyramid.levels) {
    for (const double value : level.data) EXPECT_EQ(value, 1.);
  }
}

TEST(RgbPyramidTest, BlockMean) {
  Image image(2, 2);
  image.at(1, 1, 0) = 1.;
  image.at(1, 1, 1) = 1.;
  const int factors[] = {2};
  const FeatureMap level = RgbPyramid(image, factors).levels[0];
  EXPECT_EQ(level.at(0, 0, 0), 0.);
  EXPECT_EQ(level.at(1, 0, 0), 0.5);
  EXPECT_EQ(level.at(2, 0, 0), 0.);
}

TEST(RgbPyramidTest, ShapeContract) {
  const Image image(352, 128, 0.25);
  const FeaturePyramid pyramid = RgbPyramid(image, kDefaultFactors, 4);
  ASSERT_EQ(pyramid.levels.size(), 2u);
  EXPECT_EQ(pyramid.levels[0].channels, 3);
  EXPECT_EQ(pyramid.levels[0].height, 16);
  EXPECT_EQ(pyramid.levels[0].width, 44);
  EXPECT_EQ(pyramid.levels[0].factor, 8);
  EXPECT_EQ(pyramid.levels[1].height, 8);
  EXPECT_EQ(pyramid.levels[1].width, 22);
  EXPECT_EQ(pyramid.levels[1].factor, 16);
  EXPECT_EQ(pyramid.levels[1].camera, 4);
  EXPECT_NO_THROW(pyramid.Validate(352, 128));
}

TEST(RgbPyramidTest, MatchesNestedLoopBlockMean) {
  std::mt19937_64 rng(31);
  const Image image = RandomImage(rng, 352, 128);
  const FeaturePyramid pyramid = RgbPyramid(image, kDefaultFactors);
  for (const FeatureMap& level : pyramid.levels) {
    const int f = level.factor;
    for (int c = 0; c < 3; ++c) {
      for (int row = 0; row < level.height; ++row) {
        for (int col = 0; col < level.width; ++col) {
          double sum = 0.;
          for (int y = row * f; y < (row + 1) * f; ++y) {
            for (int x = col * f; x < (col + 1) * f; ++x) sum += image.at(c, y, x);
          }
          EXPECT_NEAR(level.at(c, row, col), sum / (f * f), 1e-12);
          EXPECT_GE(level.at(c, row, col), 0.);
          EXPECT_LE(level.at(c, row, col), 1.);
        }
      }
    }
  }
}

TEST(RgbPyramidTest, RejectsNonDividingFactor) {
  const Image image(20, 16);
  const int bad[] = {8};
  EXPECT_THROW(RgbPyramid(image, bad), InvalidArgument);
  const int zero[] = {0};
  EXPECT_THROW(RgbPyramid(image, zero), InvalidArgument);
}

TEST(OneHotSemanticPyramidTest, UniformClass) {
  const SemanticImage image(32, 16, 2);
  const FeaturePyramid pyramid = OneHotSemanticPyramid(image, 3, kDefaultFactors);
  for (const FeatureMap& level : pyramid.levels) {
    ASSERT_EQ(level.channels, 3);
    for (int row = 0; row < level.height; ++row) {
      for (int col = 0; col < level.width; ++col) {
        EXPECT_EQ(level.at(0, row, col), 0.);
        EXPECT_EQ(level.at(1, row, col), 1.);
        EXPECT_EQ(level.at(2, row, col), 0.);
      }
    }
  }
}

TEST(OneHotSemanticPyramidTest, AllBackgroundBlockIsZero) {
  const SemanticImage image(16, 16, 0);
  const int factors[] = {8};
  const FeaturePyramid pyramid = OneHotSemanticPyramid(image, 4, factors);
  for (const double value : pyramid.levels[0].data) {
    EXPECT_EQ(value, 0.);
  }
}

TEST(OneHotSemanticPyramidTest, BackgroundExcludedAndTieGoesToSmallestId) {
  SemanticImage image(2, 2, 0);
  image.at(0, 1) = 3;
  image.at(1, 0) = 2;
  const int factors[] = {2};
  const FeatureMap level = OneHotSemanticPyramid(image, 3, factors).levels[0];
  EXPECT_EQ(level.at(0, 0, 0), 0.);
  EXPECT_EQ(level.at(1, 0, 0), 1.);
  EXPECT_EQ(level.at(2, 0, 0), 0.);
}

TEST(OneHotSemanticPyramidTest, MatchesCountingOracle) {
  std::mt19937_64 rng(32);
  const int classes = 5;
  for (int trial = 0; trial < 4; ++trial) {
    const SemanticImage image = RandomSemantic(rng, 352, 128, classes);
    const FeaturePyramid pyramid =
        OneHotSemanticPyramid(image, classes, kDefaultFactors);
    for (const FeatureMap& level : pyramid.levels) {
      const int f = level.factor;
      for (int row = 0; row < level.height; ++row) {
        for (int col = 0; col < level.width; ++col) {
          std::array<int, 6> counts{};
          for (int y = row * f; y < (row + 1) * f; ++y) {
            for (int x = col * f; x < (col + 1) * f; ++x) ++counts[image.at(y, x)];
          }
          int best = 0;
          for (int c = 1; c <= classes; ++c) {
            if (counts[c] > 0 && (best == 0 || counts[c] > counts[best])) best = c;
          }
          double sum = 0.;
          for (int c = 0; c < classes; ++c) {
            const double expected = best == c + 1 ? 1. : 0.;
            EXPECT_EQ(level.at(c, row, col), expected);
            sum += level.at(c, row, col);
          }
          EXPECT_TRUE(sum == 0. || sum == 1.);
        }
      }
    }
  }
}

TEST(OneHotSemanticPyramidTest, RejectsLabelAboveClassCount) {
  SemanticImage image(8, 8, 1);
  image.at(3, 3) = 4;
  const int factors[] = {8};
  EXPECT_THROW(OneHotSemanticPyramid(image, 3, factors), InvalidArgument);
}

TEST(FeaturePyramidTest, ValidateRejectsShapeMismatch) {
  FeaturePyramid pyramid;
  pyramid.levels.emplace_back(3, 16, 44, 8);
  pyramid.levels.emplace_back(3, 8, 21, 16);
  EXPECT_THROW(pyramid.Validate(352, 128), InvalidArgument);
}

TEST(FeaturePyramidTest, ValidateRejectsNonIncreasingFactors) {
  FeaturePyramid pyramid;
  pyramid.levels.emplace_back(3, 8, 22, 16);
  pyramid.levels.emplace_back(3, 16, 44, 8);
  EXPECT_THROW(pyramid.Validate(352, 128), InvalidArgument);
}

TEST(FeaturePyramidTest, LevelLookup) {
  const FeaturePyramid pyramid =
      RgbPyramid(Image(32, 32, 0.5), kDefaultFactors);
  EXPECT_EQ(pyramid.Level(16).width, 2);
  EXPECT_THROW(pyramid.Level(4), InvalidArgument);
}

TEST(FeatureProviderTest, ProvidersReportChannelsAndCameras) {
  const RgbFeatureProvider rgb({Image(16, 16), Image(16, 16)});
  EXPECT_EQ(rgb.num_cameras(), 2);
  EXPECT_EQ(rgb.channels(), 3);
  const int factors[] = {8, 16};
  EXPECT_EQ(rgb.Extract(1, factors).levels[0].camera, 1);

  const SemanticFeatureProvider semantic({SemanticImage(16, 16, 1)}, 5);
  EXPECT_EQ(semantic.channels(), 5);
  EXPECT_EQ(semantic.Extract(0, factors).levels[1].at(0, 0, 0), 1.);
}

TEST(FeatureProviderTest, PrecomputedServesRequestedFactors) {
  const FeaturePyramid pyramid = RgbPyramid(Image(32, 16, 0.2), kDefaultFactors);
  const PrecomputedFeatureProvider provider({pyramid});
  const int only_coarse[] = {16};
  const FeaturePyramid served = provider.Extract(0, only_coarse);
  ASSERT_EQ(served.levels.size(), 1u);
  EXPECT_EQ(served.levels[0].factor, 16);
  const int missing[] = {4};
  EXPECT_THROW(provider.Extract(0, missing), InvalidArgument);
}

}  // namespace
}  // namespace features
}  // namespace lapt
