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

#include "lapt/bev.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lapt/errors.h"

namespace lapt {
namespace bev {
namespace {

int CellCount(double extent, double resolution, const char* axis) {
  const double ratio = extent / resolution;
  const double rounded = std::round(ratio);
  if (!(rounded >= 1.) || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw InvalidArgument(std::string(axis) +
                          " extent must be an integral multiple of the "
                          "resolution");
  }
  return static_cast<int>(rounded);
}

void CheckSameGrid(const BevGrid& a, const BevGrid& b) {
  if (!(a.spec() == b.spec())) {
    throw InvalidArgument("BEV grids have different grid geometry");
  }
}

}  // namespace

GridSpec::GridSpec()
    : GridSpec(kDefaultExtent, kDefaultExtent, kDefaultResolution,
               kDefaultZMin, kDefaultZMax) {}

GridSpec::GridSpec(double x_extent, double y_extent, double resolution,
                   double z_min, double z_max)
    : x_extent_(x_extent),
      y_extent_(y_extent),
      resolution_(resolution),
      z_min_(z_min),
      z_max_(z_max) {
  if (!(resolution > 0.) || !std::isfinite(resolution)) {
    throw InvalidArgument("grid resolution must be positive");
  }
  if (!(z_min < z_max)) {
    throw InvalidArgument("grid slab requires z_min < z_max");
  }
  cells_x_ = CellCount(x_extent, resolution, "x");
  cells_y_ = CellCount(y_extent, resolution, "y");
}

GridSpec GridSpec::Coarsened() const {
  if (cells_x_ % 2 != 0 || cells_y_ % 2 != 0) {
    throw InvalidArgument("coarse grid requires even cell counts");
  }
  return GridSpec(x_extent_, y_extent_, 2. * resolution_, z_min_, z_max_);
}

std::optional<GridSpec::Cell> GridSpec::Locate(
    const geometry::Vec3& vehicle_point) const {
  const double half_x = 0.5 * x_extent_;
  const double half_y = 0.5 * y_extent_;
  const double x = vehicle_point.x();
  const double y = vehicle_point.y();
  const double z = vehicle_point.z();
  if (!(x >= -half_x && x < half_x && y >= -half_y && y < half_y &&
        z >= z_min_ && z < z_max_)) {
    return std::nullopt;
  }
  const int col = static_cast<int>(std::floor((x + half_x) / resolution_));
  const int row = static_cast<int>(std::floor((y + half_y) / resolution_));
  // Rounding can push a point just below the upper bound onto index X.
  return Cell{std::min(col, cells_x_ - 1), std::min(row, cells_y_ - 1)};
}

bool GridSpec::operator==(const GridSpec& other) const {
  return x_extent_ == other.x_extent_ && y_extent_ == other.y_extent_ &&
         resolution_ == other.resolution_ && z_min_ == other.z_min_ &&
         z_max_ == other.z_max_;
}

BevGrid::BevGrid(const GridSpec& spec, int channels)
    : spec_(spec), channels_(channels) {
  if (channels < 1) throw InvalidArgument("BEV grid needs >= 1 channel");
  data_.assign(static_cast<std::size_t>(channels) * spec.num_cells(), 0.);
}

std::size_t BevGrid::NonZeroCells() const {
  const std::size_t cells = spec_.num_cells();
  std::size_t count = 0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    for (int c = 0; c < channels_; ++c) {
      if (data_[c * cells + cell] != 0.) {
        ++count;
        break;
      }
    }
  }
  return count;
}

double BevGrid::Total() const {
  double total = 0.;
  for (const double value : data_) total += value;
  return total;
}

std::vector<SplatTarget> ComputeSplatTargets(
    const features::FeatureMap& feature_map, const depth::DepthImage& pooled,
    const geometry::CameraIntrinsics& intrinsics,
    const geometry::RigidTransform& camera_from_vehicle, const GridSpec& spec) {
  if (pooled.width() != feature_map.width ||
      pooled.height() != feature_map.height) {
    throw InvalidArgument("pooled depth and feature map sizes differ");
  }
  const double factor = feature_map.factor;
  std::vector<SplatTarget> targets;
  for (int v = 0; v < feature_map.height; ++v) {
    for (int u = 0; u < feature_map.width; ++u) {
      if (!pooled.has(u, v)) continue;
      const geometry::Vec3 camera_point = geometry::BackProjectPixel(
          factor * (u + 0.5), factor * (v + 0.5), pooled.value(u, v),
          intrinsics);
      const auto cell = spec.Locate(
          geometry::CameraToVehicle(camera_point, camera_from_vehicle));
      if (!cell) continue;
      targets.push_back(
          {static_cast<std::size_t>(v) * feature_map.width + u,
           static_cast<std::size_t>(cell->row) * spec.cells_x() + cell->col});
    }
  }
  return targets;
}

void AccumulateSplat(const features::FeatureMap& feature_map,
                     std::span<const SplatTarget> targets, BevGrid& grid) {
  if (feature_map.channels != grid.channels()) {
    throw InvalidArgument("feature map and BEV grid channel counts differ");
  }
  const std::size_t pixels =
      static_cast<std::size_t>(feature_map.height) * feature_map.width;
  const std::size_t cells = grid.spec().num_cells();
  std::span<double> out = grid.data();
  for (const SplatTarget& target : targets) {
    for (int c = 0; c < feature_map.channels; ++c) {
      out[c * cells + target.cell] += feature_map.data[c * pixels + target.pixel];
    }
  }
}

BevGrid SplatFeatures(const features::FeatureMap& feature_map,
                      const depth::DepthImage& pooled,
                      const geometry::CameraIntrinsics& intrinsics,
                      const geometry::RigidTransform& camera_from_vehicle,
                      const GridSpec& spec) {
  const std::vector<SplatTarget> targets = ComputeSplatTargets(
      feature_map, pooled, intrinsics, camera_from_vehicle, spec);
  BevGrid grid(spec, feature_map.channels);
  AccumulateSplat(feature_map, targets, grid);
  return grid;
}

BevGrid FuseScales(std::span<const BevGrid> grids) {
  if (grids.empty()) throw InvalidArgument("no grids to fuse");
  BevGrid fused = grids.front();
  for (std::size_t i = 1; i < grids.size(); ++i) {
    CheckSameGrid(fused, grids[i]);
    if (grids[i].channels() != fused.channels()) {
      throw InvalidArgument("scale grids have different channel counts");
    }
    std::span<double> out = fused.data();
    std::span<const double> in = grids[i].data();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += in[j];
  }
  return fused;
}

FusionMethod ParseFusionMethod(std::string_view name) {
  if (name == "sum") return FusionMethod::kSum;
  if (name == "concat") return FusionMethod::kConcat;
  if (name == "maxpool") return FusionMethod::kMaxPool;
  throw InvalidArgument("unknown fusion method '" + std::string(name) +
                        "' (expected sum, concat or maxpool)");
}

std::string_view FusionMethodName(FusionMethod method) {
  switch (method) {
    case FusionMethod::kSum:
      return "sum";
    case FusionMethod::kConcat:
      return "concat";
    case FusionMethod::kMaxPool:
      return "maxpool";
  }
  return "unknown";
}

BevGrid FuseModalities(const BevGrid& camera_bev, const BevGrid& lidar_bev,
                       FusionMethod method) {
  CheckSameGrid(camera_bev, lidar_bev);
  if (method == FusionMethod::kConcat) {
    BevGrid fused(camera_bev.spec(),
                  camera_bev.channels() + lidar_bev.channels());
    std::span<double> out = fused.data();
    std::copy(camera_bev.data().begin(), camera_bev.data().end(), out.begin());
    std::copy(lidar_bev.data().begin(), lidar_bev.data().end(),
              out.begin() + static_cast<std::ptrdiff_t>(camera_bev.data().size()));
    return fused;
  }
  if (camera_bev.channels() != lidar_bev.channels()) {
    throw InvalidArgument(std::string(FusionMethodName(method)) +
                          " fusion requires equal channel counts");
  }
  BevGrid fused = camera_bev;
  std::span<double> out = fused.data();
  std::span<const double> in = lidar_bev.data();
  if (method == FusionMethod::kSum) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += in[i];
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], in[i]);
  }
  return fused;
}

BevGrid UpsampleBilinear2x(const BevGrid& coarse, const GridSpec& fine_spec) {
  if (fine_spec.cells_x() != 2 * coarse.cells_x() ||
      fine_spec.cells_y() != 2 * coarse.cells_y()) {
    throw InvalidArgument("upsampling target must have twice the cells");
  }
  struct Tap {
    int low;
    int high;
    double weight;  // of `high`
  };
  auto taps = [](int fine_cells, int coarse_cells) {
    std::vector<Tap> result(fine_cells);
    for (int i = 0; i < fine_cells; ++i) {
      const double source =
          std::clamp((i + 0.5) * 0.5 - 0.5, 0., coarse_cells - 1.);
      const int low = static_cast<int>(std::floor(source));
      const int high = std::min(low + 1, coarse_cells - 1);
      result[i] = {low, high, source - low};
    }
    return result;
  };
  const std::vector<Tap> col_taps = taps(fine_spec.cells_x(), coarse.cells_x());
  const std::vector<Tap> row_taps = taps(fine_spec.cells_y(), coarse.cells_y());
  BevGrid fine(fine_spec, coarse.channels());
  for (int c = 0; c < coarse.channels(); ++c) {
    for (int row = 0; row < fine_spec.cells_y(); ++row) {
      const Tap& ry = row_taps[row];
      for (int col = 0; col < fine_spec.cells_x(); ++col) {
        const Tap& rx = col_taps[col];
        const double top = (1. - rx.weight) * coarse.at(c, ry.low, rx.low) +
                           rx.weight * coarse.at(c, ry.low, rx.high);
        const double bottom = (1. - rx.weight) * coarse.at(c, ry.high, rx.low) +
                              rx.weight * coarse.at(c, ry.high, rx.high);
        fine.at(c, row, col) = (1. - ry.weight) * top + ry.weight * bottom;
      }
    }
  }
  return fine;
}

BevGrid ProjectCoarseThenUpsample(
    const features::FeatureMap& feature_map, const depth::DepthImage& pooled,
    const geometry::CameraIntrinsics& intrinsics,
    const geometry::RigidTransform& camera_from_vehicle, const GridSpec& spec) {
  const BevGrid coarse = SplatFeatures(feature_map, pooled, intrinsics,
                                       camera_from_vehicle, spec.Coarsened());
  return UpsampleBilinear2x(coarse, spec);
}

BevGrid LidarOccupancyBev(std::span<const geometry::Vec3> lidar_points,
                          const geometry::RigidTransform& lidar_from_vehicle,
                          const GridSpec& spec) {
  BevGrid grid(spec, kLidarBevChannels);
  const geometry::RigidTransform vehicle_from_lidar =
      lidar_from_vehicle.inverse();
  std::vector<double> height_sum(spec.num_cells(), 0.);
  for (const geometry::Vec3& point : lidar_points) {
    const geometry::Vec3 vehicle_point = vehicle_from_lidar * point;
    const auto cell = spec.Locate(vehicle_point);
    if (!cell) continue;
    const double z = vehicle_point.z();
    double& count = grid.at(0, cell->row, cell->col);
    double& max_z = grid.at(1, cell->row, cell->col);
    max_z = count == 0. ? z : std::max(max_z, z);
    count += 1.;
    height_sum[static_cast<std::size_t>(cell->row) * spec.cells_x() +
               cell->col] += z;
  }
  for (int row = 0; row < spec.cells_y(); ++row) {
    for (int col = 0; col < spec.cells_x(); ++col) {
      const double count = grid.at(0, row, col);
      if (count > 0.) {
        grid.at(2, row, col) =
            height_sum[static_cast<std::size_t>(row) * spec.cells_x() + col] /
            count;
      }
    }
  }
  return grid;
}

}  // namespace bev
}  // namespace lapt
