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

#ifndef LAPT_EVAL_H_
#define LAPT_EVAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "Eigen/Core"
#include "lapt/bev.h"
#include "lapt/geometry.h"

namespace lapt {
namespace eval {

// Binary X x Y raster, row-major (index = row * cells_x + col).
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int cells_x, int cells_y);

  int cells_x() const { return cells_x_; }
  int cells_y() const { return cells_y_; }
  bool at(int row, int col) const {
    return cells_[static_cast<std::size_t>(row) * cells_x_ + col] != 0;
  }
  void set(int row, int col, bool value = true) {
    cells_[static_cast<std::size_t>(row) * cells_x_ + col] = value ? 1 : 0;
  }
  std::span<const std::uint8_t> cells() const { return cells_; }
  std::size_t Count() const;

  BinaryMask& operator|=(const BinaryMask& other);
  bool operator==(const BinaryMask& other) const = default;

 private:
  int cells_x_ = 0;
  int cells_y_ = 0;
  std::vector<std::uint8_t> cells_;
};

// C binary class channels over a grid. channels[i] belongs to class_ids[i].
struct SemanticGrid {
  bev::GridSpec spec;
  std::vector<int> class_ids;
  std::vector<BinaryMask> channels;

  // Returns the channel of `class_id`; throws InvalidArgument if absent.
  const BinaryMask& Channel(int class_id) const;
  bool operator==(const SemanticGrid& other) const = default;
};

// Box annotation in the vehicle frame. `size` is (length along the yawed x
// axis, width, height).
struct Cuboid {
  geometry::Vec3 center = geometry::Vec3::Zero();
  geometry::Vec3 size = geometry::Vec3::Ones();
  double yaw = 0.;
  int class_id = 0;

  // Throws InvalidArgument on non-positive sizes.
  void Validate() const;
  // True iff (x, y) lies inside the closed yaw-rotated footprint.
  bool FootprintContains(double x, double y) const;
};

struct Polygon2D {
  std::vector<Eigen::Vector2d> vertices;
  int class_id = 0;

  // Throws InvalidArgument with fewer than 3 vertices or on a
  // self-intersecting outline.
  void Validate() const;
  // Even-odd rule.
  bool Contains(double x, double y) const;
};

// A cell is set iff its centre lies inside the footprint of any box whose
// class equals `class_id`.
BinaryMask RasterizeCuboids(std::span<const Cuboid> boxes,
                            const bev::GridSpec& spec, int class_id);

// A cell is set iff its centre lies inside any polygon of `class_id`
// (even-odd rule). Validates every polygon of that class.
BinaryMask RasterizePolygons(std::span<const Polygon2D> polygons,
                             const bev::GridSpec& spec, int class_id);

// |pred & gt| / |pred | gt|; 1.0 when both are empty. Throws InvalidArgument
// on a shape mismatch.
double Iou(const BinaryMask& pred, const BinaryMask& gt);

// cell = value >= threshold.
BinaryMask Binarize(const bev::BevGrid& grid, int channel, double threshold);

}  // namespace eval
}  // namespace lapt

#endif  // LAPT_EVAL_H_
