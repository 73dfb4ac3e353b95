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

#include "lapt/eval.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lapt/errors.h"

namespace lapt {
namespace eval {
namespace {

double Cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
             const Eigen::Vector2d& c) {
  return (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
}

bool OnSegment(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
               const Eigen::Vector2d& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

int Sign(double value) { return (value > 0.) - (value < 0.); }

// Closed-segment intersection test, collinear overlaps included.
bool SegmentsIntersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                       const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
  const int d1 = Sign(Cross(q1, q2, p1));
  const int d2 = Sign(Cross(q1, q2, p2));
  const int d3 = Sign(Cross(p1, p2, q1));
  const int d4 = Sign(Cross(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && OnSegment(q1, q2, p1)) return true;
  if (d2 == 0 && OnSegment(q1, q2, p2)) return true;
  if (d3 == 0 && OnSegment(p1, p2, q1)) return true;
  if (d4 == 0 && OnSegment(p1, p2, q2)) return true;
  return false;
}

}  // namespace

BinaryMask::BinaryMask(int cells_x, int cells_y)
    : cells_x_(cells_x),
      cells_y_(cells_y),
      cells_(static_cast<std::size_t>(cells_x) * cells_y, 0) {}

std::size_t BinaryMask::Count() const {
  return static_cast<std::size_t>(
      std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

BinaryMask& BinaryMask::operator|=(const BinaryMask& other) {
  if (other.cells_x_ != cells_x_ || other.cells_y_ != cells_y_) {
    throw InvalidArgument("mask shapes differ");
  }
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] |= other.cells_[i];
  return *this;
}

const BinaryMask& SemanticGrid::Channel(int class_id) const {
  for (std::size_t i = 0; i < class_ids.size(); ++i) {
    if (class_ids[i] == class_id) return channels[i];
  }
  throw InvalidArgument("semantic grid has no channel for class " +
                        std::to_string(class_id));
}

void Cuboid::Validate() const {
  if (!(size.x() > 0. && size.y() > 0. && size.z() > 0.)) {
    throw InvalidArgument("cuboid sizes must be positive");
  }
}

bool Cuboid::FootprintContains(double x, double y) const {
  const double dx = x - center.x();
  const double dy = y - center.y();
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const double along = c * dx + s * dy;
  const double across = -s * dx + c * dy;
  return std::abs(along) <= 0.5 * size.x() && std::abs(across) <= 0.5 * size.y();
}

void Polygon2D::Validate() const {
  const std::size_t n = vertices.size();
  if (n < 3) throw InvalidArgument("polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& a1 = vertices[i];
    const Eigen::Vector2d& a2 = vertices[(i + 1) % n];
    if (a1 == a2) throw InvalidArgument("polygon has a zero-length edge");
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (SegmentsIntersect(a1, a2, vertices[j], vertices[(j + 1) % n])) {
        throw InvalidArgument("polygon is self-intersecting");
      }
    }
  }
}

bool Polygon2D::Contains(double x, double y) const {
  bool inside = false;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Eigen::Vector2d& a = vertices[i];
    const Eigen::Vector2d& b = vertices[j];
    if ((a.y() > y) != (b.y() > y) &&
        x < (b.x() - a.x()) * (y - a.y()) / (b.y() - a.y()) + a.x()) {
      inside = !inside;
    }
  }
  return inside;
}

BinaryMask RasterizeCuboids(std::span<const Cuboid> boxes,
                            const bev::GridSpec& spec, int class_id) {
  BinaryMask mask(spec.cells_x(), spec.cells_y());
  for (const Cuboid& box : boxes) {
    if (box.class_id != class_id) continue;
    box.Validate();
    // Only scan the cells under the footprint's bounding circle.
    const double radius = 0.5 * std::hypot(box.size.x(), box.size.y());
    const int col_begin = std::max(
        0, static_cast<int>(std::floor((box.center.x() - radius +
                                        0.5 * spec.x_extent()) /
                                       spec.resolution())) - 1);
    const int col_end = std::min(
        spec.cells_x() - 1,
        static_cast<int>(std::floor(
            (box.center.x() + radius + 0.5 * spec.x_extent()) /
            spec.resolution())) + 1);
    const int row_begin = std::max(
        0, static_cast<int>(std::floor((box.center.y() - radius +
                                        0.5 * spec.y_extent()) /
                                       spec.resolution())) - 1);
    const int row_end = std::min(
        spec.cells_y() - 1,
        static_cast<int>(std::floor(
            (box.center.y() + radius + 0.5 * spec.y_extent()) /
            spec.resolution())) + 1);
    for (int row = row_begin; row <= row_end; ++row) {
      for (int col = col_begin; col <= col_end; ++col) {
        if (box.FootprintContains(spec.CellCenterX(col),
                                  spec.CellCenterY(row))) {
          mask.set(row, col);
        }
      }
    }
  }
  return mask;
}

BinaryMask RasterizePolygons(std::span<const Polygon2D> polygons,
                             const bev::GridSpec& spec, int class_id) {
  BinaryMask mask(spec.cells_x(), spec.cells_y());
  for (const Polygon2D& polygon : polygons) {
    if (polygon.class_id != class_id) continue;
    polygon.Validate();
    for (int row = 0; row < spec.cells_y(); ++row) {
      for (int col = 0; col < spec.cells_x(); ++col) {
        if (polygon.Contains(spec.CellCenterX(col), spec.CellCenterY(row))) {
          mask.set(row, col);
        }
      }
    }
  }
  return mask;
}

double Iou(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.cells_x() != gt.cells_x() || pred.cells_y() != gt.cells_y()) {
    throw InvalidArgument("IoU operands have different shapes");
  }
  std::size_t intersection = 0;
  std::size_t union_count = 0;
  const auto a = pred.cells();
  const auto b = gt.cells();
  for (std::size_t i = 0; i < a.size(); ++i) {
    intersection += a[i] & b[i];
    union_count += a[i] | b[i];
  }
  if (union_count == 0) return 1.;
  return static_cast<double>(intersection) / static_cast<double>(union_count);
}

BinaryMask Binarize(const bev::BevGrid& grid, int channel, double threshold) {
  if (channel < 0 || channel >= grid.channels()) {
    throw InvalidArgument("binarize channel out of range");
  }
  BinaryMask mask(grid.cells_x(), grid.cells_y());
  for (int row = 0; row < grid.cells_y(); ++row) {
    for (int col = 0; col < grid.cells_x(); ++col) {
      if (grid.at(channel, row, col) >= threshold) mask.set(row, col);
    }
  }
  return mask;
}

}  // namespace eval
}  // namespace lapt
