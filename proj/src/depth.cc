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

#include "lapt/depth.h"

#include <cmath>

#include "lapt/errors.h"

namespace lapt {
namespace depth {

DepthImage::DepthImage(int width, int height)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("depth image size must be positive");
  }
  const std::size_t size =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  values_.assign(size, 0.);
  present_.assign(size, 0);
}

std::optional<double> DepthImage::at(int u, int v) const {
  const std::size_t index = Index(u, v);
  if (present_[index] == 0) return std::nullopt;
  return values_[index];
}

void DepthImage::KeepNearest(int u, int v, double depth) {
  if (!(depth > 0.) || !std::isfinite(depth)) {
    throw InvalidArgument("depth must be positive and finite");
  }
  const std::size_t index = Index(u, v);
  if (present_[index] == 0) {
    present_[index] = 1;
    values_[index] = depth;
    ++occupancy_count_;
  } else if (depth < values_[index]) {
    values_[index] = depth;
  }
}

bool DepthImage::operator==(const DepthImage& other) const {
  if (width_ != other.width_ || height_ != other.height_ ||
      occupancy_count_ != other.occupancy_count_ ||
      present_ != other.present_) {
    return false;
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (present_[i] != 0 && values_[i] != other.values_[i]) return false;
  }
  return true;
}

DepthImage RasterizeDepth(std::span<const geometry::PixelProjection> projected,
                          int width, int height) {
  DepthImage image(width, height);
  for (const geometry::PixelProjection& point : projected) {
    if (!(point.u >= 0. && point.u < width && point.v >= 0. &&
          point.v < height)) {
      throw InvalidArgument("projected point lies outside the depth raster");
    }
    image.KeepNearest(static_cast<int>(std::floor(point.u)),
                      static_cast<int>(std::floor(point.v)), point.depth);
  }
  return image;
}

DepthImage MinPool(const DepthImage& depth, int factor) {
  if (factor < 1) {
    throw InvalidArgument("min-pool factor must be a positive integer");
  }
  if (depth.width() % factor != 0 || depth.height() % factor != 0) {
    throw InvalidArgument("min-pool factor must divide the image size");
  }
  DepthImage pooled(depth.width() / factor, depth.height() / factor);
  for (int v = 0; v < depth.height(); ++v) {
    for (int u = 0; u < depth.width(); ++u) {
      if (depth.has(u, v)) {
        pooled.KeepNearest(u / factor, v / factor, depth.value(u, v));
      }
    }
  }
  return pooled;
}

}  // namespace depth
}  // namespace lapt
