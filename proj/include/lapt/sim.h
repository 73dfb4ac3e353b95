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

#ifndef LAPT_SIM_H_
#define LAPT_SIM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lapt/bev.h"
#include "lapt/depth.h"
#include "lapt/eval.h"
#include "lapt/features.h"
#include "lapt/geometry.h"

namespace lapt {
namespace sim {

// Class ids used by the synthetic world. 0 is background (sky and ground
// outside every region).
enum ClassId : int {
  kBackground = 0,
  kDrivableArea = 1,
  kWalkway = 2,
  kVehicle = 3,
  kHuman = 4,
  kMovableObject = 5,
};
inline constexpr int kNumClasses = 5;
const char* ClassName(int class_id);
std::vector<int> AllClassIds();

struct Scene {
  // Flat regions on the z = 0 plane. When two overlap, the earlier one wins
  // for rendering; the BEV rasterization is per class and unaffected.
  std::vector<eval::Polygon2D> ground_regions;
  // Objects may float (center z != h / 2); nothing enforces contact.
  std::vector<eval::Cuboid> objects;
  bool ground_plane = true;
  std::uint64_t seed = 0;
};

struct SizeRange {
  geometry::Vec3 min;
  geometry::Vec3 max;
};

struct SceneParams {
  int vehicles = 12;
  int humans = 10;
  int movable_objects = 8;
  SizeRange vehicle_size{{3.8, 1.7, 1.4}, {5.2, 2.1, 2.0}};
  SizeRange human_size{{0.5, 0.5, 1.5}, {0.8, 0.8, 1.9}};
  SizeRange movable_size{{0.4, 0.4, 0.7}, {1.2, 0.6, 1.1}};
  // Object centres stay within this half-width square around the ego...
  double placement_half_extent = 45.;
  // ...and at least this far from it.
  double ego_clearance = 6.;
  double road_width_min = 8.;
  double road_width_max = 14.;
  double walkway_width_min = 2.5;
  double walkway_width_max = 4.;
};

// Deterministic for a given (seed, params): a straight road through the ego
// position with walkways on both sides, vehicles on the road, humans on the
// walkways and movable objects along the road edges. Throws InvalidArgument
// if the objects cannot be placed without overlap.
Scene GenerateScene(std::uint64_t seed, const SceneParams& params = {});

struct Hit {
  double t;  // ray parameter; hit = origin + t * direction
  int class_id;
  geometry::Vec3 point;  // vehicle frame
};

// Nearest intersection with t in (0, t_max] against all boxes and the ground
// plane. The direction need not be normalized.
std::optional<Hit> CastRay(const Scene& scene, const geometry::Vec3& origin,
                           const geometry::Vec3& direction,
                           double t_max = 1e9);

// Casts the pinhole ray through image coordinates (u, v). The ray is scaled
// so that Hit::t is the camera-frame depth.
std::optional<Hit> CastCameraRay(const Scene& scene,
                                 const geometry::Camera& camera, double u,
                                 double v);

// Colour assigned to a class (background ground included); sky has its own.
struct Rgb8 {
  std::uint8_t r, g, b;
};
Rgb8 ClassColor(int class_id);
inline constexpr Rgb8 kSkyColor{150, 200, 245};

struct RenderedView {
  features::SemanticImage semantic;
  depth::DepthImage depth;
  features::Image rgb;
};

// Ray casts every pixel centre (u + 0.5, v + 0.5) of every camera.
std::vector<RenderedView> RenderViews(const Scene& scene,
                                      const geometry::CameraRig& rig);

struct LidarPattern {
  std::vector<double> elevations;  // radians, one per ring
  double azimuth_step = 0.;        // radians
  double max_range = 0.;           // meters

  // 32 rings spread over [-30.67, 10.67] degrees, 1084 azimuth steps per
  // revolution, 70 m range.
  static LidarPattern Default();
  // `rings` evenly spread over [min_elevation, max_elevation] degrees.
  static LidarPattern Uniform(int rings, double min_elevation_deg,
                              double max_elevation_deg, int azimuth_steps,
                              double max_range);
  // Throws InvalidArgument on no rings or a non-positive range or step.
  void Validate() const;
};

// One return per (ring, azimuth) ray that hits a surface within range,
// expressed in the LiDAR frame; misses produce nothing.
std::vector<geometry::Vec3> SampleLidar(
    const Scene& scene, const LidarPattern& pattern,
    const geometry::RigidTransform& lidar_from_vehicle);

// Per class: cuboid footprints of that class OR ground regions of that class.
eval::SemanticGrid AnalyticBev(const Scene& scene, const bev::GridSpec& spec,
                               std::span<const int> classes);

// Six 70-degree cameras at 0, +-55, +-110 and 180 degrees yaw, 1.5 m above
// the ground, and a roof LiDAR at 1.84 m.
geometry::CameraRig DefaultRig(int width = 352, int height = 128);

}  // namespace sim
}  // namespace lapt

#endif  // LAPT_SIM_H_
