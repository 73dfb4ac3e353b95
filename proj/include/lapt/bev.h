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

#ifndef LAPT_BEV_H_
#define LAPT_BEV_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lapt/depth.h"
#include "lapt/features.h"
#include "lapt/geometry.h"

namespace lapt {
namespace bev {

// Metric geometry of a vehicle-centred BEV grid. Column index follows +x
// (forward), row index follows +y (left):
//   col = floor((x + x_extent / 2) / resolution)
//   row = floor((y + y_extent / 2) / resolution)
// with half-open bounds [-e/2, e/2) and a vertical slab [z_min, z_max).
class GridSpec {
 public:
  static constexpr double kDefaultExtent = 100.;
  static constexpr double kDefaultResolution = 0.5;
  static constexpr double kDefaultZMin = -2.;
  static constexpr double kDefaultZMax = 4.;

  // 100 m x 100 m at 0.5 m, slab [-2, 4) m: 200 x 200 cells.
  GridSpec();
  // Throws InvalidArgument unless each extent is an integral multiple of the
  // resolution and z_min < z_max.
  GridSpec(double x_extent, double y_extent, double resolution, double z_min,
           double z_max);

  double x_extent() const { return x_extent_; }
  double y_extent() const { return y_extent_; }
  double resolution() const { return resolution_; }
  double z_min() const { return z_min_; }
  double z_max() const { return z_max_; }
  int cells_x() const { return cells_x_; }
  int cells_y() const { return cells_y_; }
  std::size_t num_cells() const {
    return static_cast<std::size_t>(cells_x_) * cells_y_;
  }

  // Same extents and slab at twice the cell size. Throws InvalidArgument if
  // the cell counts are odd.
  GridSpec Coarsened() const;

  struct Cell {
    int col;
    int row;
  };
  // Cell containing a vehicle-frame point, or nullopt outside the grid
  // volume.
  std::optional<Cell> Locate(const geometry::Vec3& vehicle_point) const;
  // Vehicle-frame (x, y) of a cell centre.
  double CellCenterX(int col) const {
    return -0.5 * x_extent_ + (col + 0.5) * resolution_;
  }
  double CellCenterY(int row) const {
    return -0.5 * y_extent_ + (row + 0.5) * resolution_;
  }

  bool operator==(const GridSpec& other) const;

 private:
  double x_extent_;
  double y_extent_;
  double resolution_;
  double z_min_;
  double z_max_;
  int cells_x_;
  int cells_y_;
};

// N_f x Y x X feature tensor over a GridSpec; storage is channel-major, then
// row, then column.
class BevGrid {
 public:
  BevGrid() = default;
  BevGrid(const GridSpec& spec, int channels);

  const GridSpec& spec() const { return spec_; }
  int channels() const { return channels_; }
  int cells_x() const { return spec_.cells_x(); }
  int cells_y() const { return spec_.cells_y(); }

  double& at(int channel, int row, int col) {
    return data_[Index(channel, row, col)];
  }
  double at(int channel, int row, int col) const {
    return data_[Index(channel, row, col)];
  }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<const double> channel(int c) const {
    return std::span<const double>(data_).subspan(
        static_cast<std::size_t>(c) * spec_.num_cells(), spec_.num_cells());
  }

  // Number of cells with any non-zero channel.
  std::size_t NonZeroCells() const;
  // Sum over all cells and channels.
  double Total() const;

  bool operator==(const BevGrid& other) const {
    return spec_ == other.spec_ && channels_ == other.channels_ &&
           data_ == other.data_;
  }

 private:
  std::size_t Index(int channel, int row, int col) const {
    return (static_cast<std::size_t>(channel) * spec_.cells_y() + row) *
               spec_.cells_x() +
           col;
  }

  GridSpec spec_;
  int channels_ = 0;
  std::vector<double> data_;
};

// Where one feature pixel lands: its flat pixel index in the feature map and
// the flat (row * X + col) cell index in the grid.
struct SplatTarget {
  std::size_t pixel;
  std::size_t cell;
};

// Back-projects every feature pixel that has a pooled depth through its block
// centre (factor * (u + 0.5), factor * (v + 0.5)), moves it to the vehicle
// frame and keeps the ones inside the grid volume, in row-major pixel order.
// Throws InvalidArgument if the depth and feature sizes disagree.
std::vector<SplatTarget> ComputeSplatTargets(
    const features::FeatureMap& feature_map, const depth::DepthImage& pooled,
    const geometry::CameraIntrinsics& intrinsics,
    const geometry::RigidTransform& camera_from_vehicle, const GridSpec& spec);

// Adds the targeted feature vectors into `grid` in the order given.
void AccumulateSplat(const features::FeatureMap& feature_map,
                     std::span<const SplatTarget> targets, BevGrid& grid);

// Voxel sum-pooling of one camera's feature map into a fresh grid.
BevGrid SplatFeatures(const features::FeatureMap& feature_map,
                      const depth::DepthImage& pooled,
                      const geometry::CameraIntrinsics& intrinsics,
                      const geometry::RigidTransform& camera_from_vehicle,
                      const GridSpec& spec);

// Element-wise sum, accumulated in operand order. Throws InvalidArgument on
// an empty list or mismatched shapes.
BevGrid FuseScales(std::span<const BevGrid> grids);

enum class FusionMethod { kSum, kConcat, kMaxPool };

// Parses "sum", "concat" or "maxpool"; throws InvalidArgument otherwise.
FusionMethod ParseFusionMethod(std::string_view name);
std::string_view FusionMethodName(FusionMethod method);

// sum: element-wise sum. concat: camera channels followed by LiDAR channels.
// maxpool: element-wise max of the two stacked maps. Throws InvalidArgument
// on a grid mismatch or, for sum and maxpool, a channel-count mismatch.
BevGrid FuseModalities(const BevGrid& camera_bev, const BevGrid& lidar_bev,
                       FusionMethod method);

// Bilinear x2 upsampling with half-pixel centres (source coordinate
// (i + 0.5) / 2 - 0.5, clamped at the border) onto `fine_spec`, which must
// have exactly twice the cells of the input along both axes.
BevGrid UpsampleBilinear2x(const BevGrid& coarse, const GridSpec& fine_spec);

// Splats into spec.Coarsened() and upsamples the result back onto `spec`.
BevGrid ProjectCoarseThenUpsample(
    const features::FeatureMap& feature_map, const depth::DepthImage& pooled,
    const geometry::CameraIntrinsics& intrinsics,
    const geometry::RigidTransform& camera_from_vehicle, const GridSpec& spec);

// Non-learned LiDAR branch: per cell (point count, max z, mean z) over the
// vehicle-frame points inside the grid volume; empty cells are zero.
inline constexpr int kLidarBevChannels = 3;
BevGrid LidarOccupancyBev(std::span<const geometry::Vec3> lidar_points,
                          const geometry::RigidTransform& lidar_from_vehicle,
                          const GridSpec& spec);

}  // namespace bev
}  // namespace lapt

#endif  // LAPT_BEV_H_
