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

#ifndef LAPT_DEPTH_H_
#define LAPT_DEPTH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lapt/geometry.h"

namespace lapt {
namespace depth {

// Sparse per-pixel depth raster with an explicit presence mask. Cells are
// stored row-major (index = v * width + u).
class DepthImage {
 public:
  DepthImage() = default;
  // All cells empty. Throws InvalidArgument on a non-positive size.
  DepthImage(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t occupancy_count() const { return occupancy_count_; }

  bool has(int u, int v) const { return present_[Index(u, v)] != 0; }
  std::optional<double> at(int u, int v) const;
  // Requires has(u, v).
  double value(int u, int v) const { return values_[Index(u, v)]; }

  // Stores `depth` unless a smaller depth is already present (z-buffer).
  // Throws InvalidArgument unless depth > 0 and finite.
  void KeepNearest(int u, int v, double depth);

  bool operator==(const DepthImage& other) const;

 private:
  std::size_t Index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(u);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> present_;
  std::size_t occupancy_count_ = 0;
};

// Z-buffers projected points into a width x height raster: each touched cell
// (floor(u), floor(v)) keeps the smallest depth. Throws InvalidArgument for an
// out-of-bounds coordinate or a non-positive depth.
DepthImage RasterizeDepth(std::span<const geometry::PixelProjection> projected,
                          int width, int height);

// Block minimum over present values with a factor x factor kernel and stride.
// Throws InvalidArgument if factor < 1 or does not divide both dimensions.
DepthImage MinPool(const DepthImage& depth, int factor);

}  // namespace depth
}  // namespace lapt

#endif  // LAPT_DEPTH_H_
