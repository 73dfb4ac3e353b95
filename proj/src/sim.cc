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

#include "lapt/sim.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "lapt/errors.h"

namespace lapt {
namespace sim {
namespace {

constexpr double kRayEpsilon = 1e-9;

double Radians(double degrees) { return degrees * std::numbers::pi / 180.; }

// mt19937_64 is fully specified by the standard; the distributions are not,
// so uniform doubles are built from raw draws to stay reproducible across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Uniform(double low, double high) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return low + (high - low) * unit;
  }
  bool Coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

eval::Polygon2D Strip(const Eigen::Vector2d& axis, const Eigen::Vector2d& normal,
                      double half_length, double lateral_low,
                      double lateral_high, int class_id) {
  eval::Polygon2D strip;
  strip.class_id = class_id;
  strip.vertices = {-half_length * axis + lateral_low * normal,
                    half_length * axis + lateral_low * normal,
                    half_length * axis + lateral_high * normal,
                    -half_length * axis + lateral_high * normal};
  return strip;
}

geometry::Vec3 SampleSize(Rng& rng, const SizeRange& range) {
  return {rng.Uniform(range.min.x(), range.max.x()),
          rng.Uniform(range.min.y(), range.max.y()),
          rng.Uniform(range.min.z(), range.max.z())};
}

// Slab test in the box frame. Returns the first positive crossing.
std::optional<double> IntersectBox(const eval::Cuboid& box,
                                   const geometry::Vec3& origin,
                                   const geometry::Vec3& direction) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const geometry::Vec3 delta = origin - box.center;
  const geometry::Vec3 local_origin(c * delta.x() + s * delta.y(),
                                    -s * delta.x() + c * delta.y(), delta.z());
  const geometry::Vec3 local_direction(
      c * direction.x() + s * direction.y(),
      -s * direction.x() + c * direction.y(), direction.z());
  const geometry::Vec3 half = 0.5 * box.size;
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double o = local_origin[axis];
    const double d = local_direction[axis];
    if (d == 0.) {
      if (o < -half[axis] || o > half[axis]) return std::nullopt;
      continue;
    }
    double t0 = (-half[axis] - o) / d;
    double t1 = (half[axis] - o) / d;
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (t_near > kRayEpsilon) return t_near;
  if (t_far > kRayEpsilon) return t_far;
  return std::nullopt;
}

int GroundClass(const Scene& scene, double x, double y) {
  for (const eval::Polygon2D& region : scene.ground_regions) {
    if (region.Contains(x, y)) return region.class_id;
  }
  return kBackground;
}

}  // namespace

const char* ClassName(int class_id) {
  switch (class_id) {
    case kBackground:
      return "background";
    case kDrivableArea:
      return "drivable_area";
    case kWalkway:
      return "walkway";
    case kVehicle:
      return "vehicle";
    case kHuman:
      return "human";
    case kMovableObject:
      return "movable_object";
  }
  return "unknown";
}

std::vector<int> AllClassIds() {
  return {kDrivableArea, kWalkway, kVehicle, kHuman, kMovableObject};
}

Scene GenerateScene(std::uint64_t seed, const SceneParams& params) {
  Rng rng(seed);
  Scene scene;
  scene.seed = seed;

  const double road_yaw = rng.Uniform(0., std::numbers::pi);
  const Eigen::Vector2d axis(std::cos(road_yaw), std::sin(road_yaw));
  const Eigen::Vector2d normal(-axis.y(), axis.x());
  const double half_road =
      0.5 * rng.Uniform(params.road_width_min, params.road_width_max);
  const double walkway_left =
      rng.Uniform(params.walkway_width_min, params.walkway_width_max);
  const double walkway_right =
      rng.Uniform(params.walkway_width_min, params.walkway_width_max);
  // Long enough to cross the whole default grid diagonally.
  constexpr double kHalfLength = 75.;
  scene.ground_regions.push_back(
      Strip(axis, normal, kHalfLength, -half_road, half_road, kDrivableArea));
  scene.ground_regions.push_back(Strip(axis, normal, kHalfLength, half_road,
                                       half_road + walkway_left, kWalkway));
  scene.ground_regions.push_back(Strip(axis, normal, kHalfLength,
                                       -half_road - walkway_right, -half_road,
                                       kWalkway));

  struct Footprint {
    Eigen::Vector2d center;
    double radius;
  };
  std::vector<Footprint> placed;

  // `lateral` draws the offset from the road centre line for a given
  // footprint width.
  auto place = [&](int count, int class_id, const SizeRange& size_range,
                   auto&& lateral, bool along_road) {
    for (int i = 0; i < count; ++i) {
      bool done = false;
      for (int attempt = 0; attempt < 2000 && !done; ++attempt) {
        const geometry::Vec3 size = SampleSize(rng, size_range);
        const double along =
            rng.Uniform(-kHalfLength, kHalfLength);
        const double offset = lateral(size.y());
        const Eigen::Vector2d center = along * axis + offset * normal;
        double yaw = along_road ? road_yaw + (rng.Coin() ? std::numbers::pi : 0.)
                                : rng.Uniform(-std::numbers::pi,
                                              std::numbers::pi);
        if (along_road) yaw += rng.Uniform(-0.1, 0.1);
        const double radius = 0.5 * std::hypot(size.x(), size.y());
        if (std::abs(center.x()) > params.placement_half_extent ||
            std::abs(center.y()) > params.placement_half_extent ||
            center.norm() < params.ego_clearance + radius) {
          continue;
        }
        const bool overlaps = std::any_of(
            placed.begin(), placed.end(), [&](const Footprint& other) {
              return (other.center - center).norm() <
                     other.radius + radius + 0.3;
            });
        if (overlaps) continue;
        placed.push_back({center, radius});
        eval::Cuboid box;
        box.center = geometry::Vec3(center.x(), center.y(), 0.5 * size.z());
        box.size = size;
        box.yaw = yaw;
        box.class_id = class_id;
        scene.objects.push_back(box);
        done = true;
      }
      if (!done) {
        throw InvalidArgument("could not place all scene objects without "
                              "overlap; reduce the object counts");
      }
    }
  };

  place(params.vehicles, kVehicle, params.vehicle_size,
        [&](double width) {
          const double limit = std::max(0., half_road - 0.5 * width - 0.3);
          return rng.Uniform(-limit, limit);
        },
        true);
  place(params.humans, kHuman, params.human_size,
        [&](double width) {
          const bool left = rng.Coin();
          const double walkway = left ? walkway_left : walkway_right;
          const double inset = 0.5 * width + 0.1;
          const double offset =
              half_road + rng.Uniform(inset, std::max(inset, walkway - inset));
          return left ? offset : -offset;
        },
        false);
  place(params.movable_objects, kMovableObject, params.movable_size,
        [&](double width) {
          const bool left = rng.Coin();
          const double offset =
              half_road - 0.5 * width - rng.Uniform(0.2, 0.8);
          return left ? offset : -offset;
        },
        true);
  return scene;
}

std::optional<Hit> CastRay(const Scene& scene, const geometry::Vec3& origin,
                           const geometry::Vec3& direction, double t_max) {
  std::optional<Hit> best;
  if (scene.ground_plane && direction.z() != 0.) {
    const double t = -origin.z() / direction.z();
    if (t > kRayEpsilon && t <= t_max) {
      geometry::Vec3 point = origin + t * direction;
      point.z() = 0.;
      best = Hit{t, GroundClass(scene, point.x(), point.y()), point};
    }
  }
  for (const eval::Cuboid& box : scene.objects) {
    const std::optional<double> t = IntersectBox(box, origin, direction);
    if (!t || *t > t_max) continue;
    if (!best || *t < best->t) {
      best = Hit{*t, box.class_id, origin + *t * direction};
    }
  }
  return best;
}

std::optional<Hit> CastCameraRay(const Scene& scene,
                                 const geometry::Camera& camera, double u,
                                 double v) {
  const geometry::CameraIntrinsics& k = camera.intrinsics;
  const Eigen::Matrix3d vehicle_from_camera =
      camera.camera_from_vehicle.rotation().transpose();
  const geometry::Vec3 origin =
      -vehicle_from_camera * camera.camera_from_vehicle.translation();
  const geometry::Vec3 ray((u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.);
  return CastRay(scene, origin, vehicle_from_camera * ray);
}

Rgb8 ClassColor(int class_id) {
  switch (class_id) {
    case kDrivableArea:
      return {60, 60, 70};
    case kWalkway:
      return {180, 170, 150};
    case kVehicle:
      return {30, 90, 220};
    case kHuman:
      return {230, 40, 40};
    case kMovableObject:
      return {250, 160, 20};
    default:
      return {110, 120, 90};
  }
}

std::vector<RenderedView> RenderViews(const Scene& scene,
                                      const geometry::CameraRig& rig) {
  rig.Validate();
  std::vector<RenderedView> views;
  views.reserve(rig.cameras.size());
  for (const geometry::Camera& camera : rig.cameras) {
    const int width = camera.intrinsics.width;
    const int height = camera.intrinsics.height;
    RenderedView view{features::SemanticImage(width, height),
                      depth::DepthImage(width, height),
                      features::Image(width, height)};
    for (int v = 0; v < height; ++v) {
      for (int u = 0; u < width; ++u) {
        const std::optional<Hit> hit =
            CastCameraRay(scene, camera, u + 0.5, v + 0.5);
        Rgb8 color = kSkyColor;
        if (hit) {
          view.semantic.at(v, u) = static_cast<std::uint8_t>(hit->class_id);
          view.depth.KeepNearest(u, v, hit->t);
          color = ClassColor(hit->class_id);
        }
        view.rgb.at(0, v, u) = color.r / 255.;
        view.rgb.at(1, v, u) = color.g / 255.;
        view.rgb.at(2, v, u) = color.b / 255.;
      }
    }
    views.push_back(std::move(view));
  }
  return views;
}

LidarPattern LidarPattern::Default() {
  return Uniform(32, -30.67, 10.67, 1084, 70.);
}

LidarPattern LidarPattern::Uniform(int rings, double min_elevation_deg,
                                   double max_elevation_deg, int azimuth_steps,
                                   double max_range) {
  LidarPattern pattern;
  for (int i = 0; i < rings; ++i) {
    const double fraction = rings == 1 ? 0. : static_cast<double>(i) / (rings - 1);
    pattern.elevations.push_back(Radians(
        min_elevation_deg + fraction * (max_elevation_deg - min_elevation_deg)));
  }
  pattern.azimuth_step =
      azimuth_steps > 0 ? 2. * std::numbers::pi / azimuth_steps : 0.;
  pattern.max_range = max_range;
  return pattern;
}

void LidarPattern::Validate() const {
  if (elevations.empty()) throw InvalidArgument("LiDAR pattern has no rings");
  if (!(max_range > 0.)) throw InvalidArgument("LiDAR range must be positive");
  if (!(azimuth_step > 0.)) {
    throw InvalidArgument("LiDAR azimuth step must be positive");
  }
}

std::vector<geometry::Vec3> SampleLidar(
    const Scene& scene, const LidarPattern& pattern,
    const geometry::RigidTransform& lidar_from_vehicle) {
  pattern.Validate();
  const geometry::RigidTransform vehicle_from_lidar =
      lidar_from_vehicle.inverse();
  const Eigen::Matrix3d rotation = vehicle_from_lidar.rotation();
  const geometry::Vec3 origin = vehicle_from_lidar.translation();
  const int steps = static_cast<int>(
      std::floor(2. * std::numbers::pi / pattern.azimuth_step + 1e-9));
  std::vector<geometry::Vec3> cloud;
  for (const double elevation : pattern.elevations) {
    for (int i = 0; i < steps; ++i) {
      const double azimuth = i * pattern.azimuth_step;
      const geometry::Vec3 direction(std::cos(elevation) * std::cos(azimuth),
                                     std::cos(elevation) * std::sin(azimuth),
                                     std::sin(elevation));
      const std::optional<Hit> hit =
          CastRay(scene, origin, rotation * direction, pattern.max_range);
      if (hit) cloud.push_back(hit->t * direction);
    }
  }
  return cloud;
}

eval::SemanticGrid AnalyticBev(const Scene& scene, const bev::GridSpec& spec,
                               std::span<const int> classes) {
  eval::SemanticGrid grid;
  grid.spec = spec;
  for (const int class_id : classes) {
    eval::BinaryMask mask = eval::RasterizeCuboids(scene.objects, spec, class_id);
    mask |= eval::RasterizePolygons(scene.ground_regions, spec, class_id);
    grid.class_ids.push_back(class_id);
    grid.channels.push_back(std::move(mask));
  }
  return grid;
}

geometry::CameraRig DefaultRig(int width, int height) {
  geometry::CameraRig rig;
  const double fx = 0.5 * width / std::tan(Radians(35.));
  for (const double yaw_deg : {0., -55., 55., -110., 110., 180.}) {
    const double yaw = Radians(yaw_deg);
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    // Rows are the camera axes (right, down, forward) in vehicle coordinates.
    Eigen::Matrix3d rotation;
    rotation << s, -c, 0., 0., 0., -1., c, s, 0.;
    const geometry::Vec3 position(c, s, 1.5);
    geometry::Camera camera;
    camera.intrinsics = {fx, fx, 0.5 * width, 0.5 * height, width, height};
    camera.camera_from_vehicle = geometry::RigidTransform::FromRotationTranslation(
        rotation, -rotation * position);
    rig.cameras.push_back(camera);
  }
  rig.lidar_from_vehicle =
      geometry::RigidTransform::Translation(geometry::Vec3(0., 0., -1.84));
  return rig;
}

}  // namespace sim
}  // namespace lapt
