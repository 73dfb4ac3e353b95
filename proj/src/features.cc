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

#include <algorithm>
#include <string>

#include "lapt/errors.h"

namespace lapt {
namespace features {
namespace {

void CheckFactors(std::span<const int> factors, int width, int height) {
  if (factors.empty()) {
    throw InvalidArgument("at least one downsample factor is required");
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const int factor = factors[i];
    if (factor < 1) {
      throw InvalidArgument("downsample factors must be positive");
    }
    if (width % factor != 0 || height % factor != 0) {
      throw InvalidArgument("factor " + std::to_string(factor) +
                            " does not divide image size " +
                            std::to_string(width) + "x" +
                            std::to_string(height));
    }
    if (i > 0 && factor <= factors[i - 1]) {
      throw InvalidArgument("downsample factors must strictly increase");
    }
  }
}

}  // namespace

Image::Image(int width, int height, double fill)
    : width(width),
      height(height),
      data(3 * static_cast<std::size_t>(width) * height, fill) {}

SemanticImage::SemanticImage(int width, int height, std::uint8_t fill)
    : width(width),
      height(height),
      labels(static_cast<std::size_t>(width) * height, fill) {}

FeatureMap::FeatureMap(int channels, int height, int width, int factor,
                       int camera)
    : channels(channels),
      height(height),
      width(width),
      factor(factor),
      camera(camera),
      data(static_cast<std::size_t>(channels) * height * width, 0.) {}

void FeaturePyramid::Validate(int image_width, int image_height) const {
  if (levels.empty()) throw InvalidArgument("feature pyramid is empty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const FeatureMap& level = levels[i];
    if (i > 0 && level.factor <= levels[i - 1].factor) {
      throw InvalidArgument("pyramid factors must strictly increase");
    }
    if (level.width * level.factor != image_width ||
        level.height * level.factor != image_height) {
      throw InvalidArgument("feature map size times factor " +
                            std::to_string(level.factor) +
                            " does not match the image size");
    }
  }
}

const FeatureMap& FeaturePyramid::Level(int factor) const {
  for (const FeatureMap& level : levels) {
    if (level.factor == factor) return level;
  }
  throw InvalidArgument("feature pyramid has no level with factor " +
                        std::to_string(factor));
}

FeaturePyramid RgbPyramid(const Image& image, std::span<const int> factors,
                          int camera) {
  CheckFactors(factors, image.width, image.height);
  FeaturePyramid pyramid;
  for (const int factor : factors) {
    FeatureMap map(3, image.height / factor, image.width / factor, factor,
                   camera);
    const double inverse_area = 1. / (static_cast<double>(factor) * factor);
    for (int c = 0; c < 3; ++c) {
      for (int row = 0; row < map.height; ++row) {
        for (int col = 0; col < map.width; ++col) {
          double sum = 0.;
          for (int dy = 0; dy < factor; ++dy) {
            for (int dx = 0; dx < factor; ++dx) {
              sum += image.at(c, row * factor + dy, col * factor + dx);
            }
          }
          map.at(c, row, col) = sum * inverse_area;
        }
      }
    }
    pyramid.levels.push_back(std::move(map));
  }
  return pyramid;
}

FeaturePyramid OneHotSemanticPyramid(const SemanticImage& semantic,
                                     int num_classes,
                                     std::span<const int> factors,
                                     int camera) {
  CheckFactors(factors, semantic.width, semantic.height);
  if (num_classes < 1) throw InvalidArgument("num_classes must be >= 1");
  for (const std::uint8_t label : semantic.labels) {
    if (label > num_classes) {
      throw InvalidArgument("semantic label " + std::to_string(label) +
                            " exceeds num_classes");
    }
  }
  FeaturePyramid pyramid;
  std::vector<int> votes(num_classes + 1);
  for (const int factor : factors) {
    FeatureMap map(num_classes, semantic.height / factor,
                   semantic.width / factor, factor, camera);
    for (int row = 0; row < map.height; ++row) {
      for (int col = 0; col < map.width; ++col) {
        std::fill(votes.begin(), votes.end(), 0);
        for (int dy = 0; dy < factor; ++dy) {
          for (int dx = 0; dx < factor; ++dx) {
            ++votes[semantic.at(row * factor + dy, col * factor + dx)];
          }
        }
        int best = 0;
        for (int label = 1; label <= num_classes; ++label) {
          if (votes[label] > (best == 0 ? 0 : votes[best])) best = label;
        }
        if (best != 0) map.at(best - 1, row, col) = 1.;
      }
    }
    pyramid.levels.push_back(std::move(map));
  }
  return pyramid;
}

FeaturePyramid RgbFeatureProvider::Extract(int camera,
                                           std::span<const int> factors) const {
  return RgbPyramid(images_.at(camera), factors, camera);
}

FeaturePyramid SemanticFeatureProvider::Extract(
    int camera, std::span<const int> factors) const {
  return OneHotSemanticPyramid(images_.at(camera), num_classes_, factors,
                               camera);
}

PrecomputedFeatureProvider::PrecomputedFeatureProvider(
    std::vector<FeaturePyramid> pyramids)
    : pyramids_(std::move(pyramids)) {
  for (const FeaturePyramid& pyramid : pyramids_) {
    for (const FeatureMap& level : pyramid.levels) {
      if (channels_ == 0) channels_ = level.channels;
      if (level.channels != channels_) {
        throw InvalidArgument("precomputed features disagree on channel count");
      }
    }
  }
}

FeaturePyramid PrecomputedFeatureProvider::Extract(
    int camera, std::span<const int> factors) const {
  const FeaturePyramid& source = pyramids_.at(camera);
  FeaturePyramid selected;
  for (const int factor : factors) {
    selected.levels.push_back(source.Level(factor));
  }
  return selected;
}

}  // namespace features
}  // namespace lapt
