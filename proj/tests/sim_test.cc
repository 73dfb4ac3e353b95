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

#include "gtest/gtest.h"
#include "lapt/errors.h"

namespace lapt {
namespace sim {
namespace {

using geometry::Vec3;

// True if `p` lies on the ground plane or on the boundary of a box, within
// `tolerance`.
bool OnSceneSurface(const Scene& scene, const Vec3& p, double tolerance) {
  if (scene.ground_plane && std::abs(p.z()) <= tolerance) return true;
  for (const eval::Cuboid& box : scene.objects) {
    const double c = std::cos(box.yaw), s = std::sin(box.yaw);
    const Vec3 d = p - box.center;
    const Vec3 local(c * d.x() + s * d.y(), -s * d.x() + c * d.y(), d.z());
    const Vec3 half = 0.5 * box.size;
    bool inside = true;
    bool on_face = false;
    for (int i = 0; i < 3; ++i) {
      const double gap = half[i] - std::abs(local[i]);
      inside = inside && gap >= -tolerance;
      on_face = on_face || std::abs(gap) <= tolerance;
    }
    if (inside && on_face) return true;
  }
  return false;
}

void ExpectScenesEqual(const Scene& a, const Scene& b) {
  ASSERT_EQ(a.objects.size(), b.objects.size());
  for (std::size_t i = 0; i < a.objects.size(); ++i) {
    EXPECT_EQ(a.objects[i].center, b.objects[i].center);
    EXPECT_EQ(a.objects[i].size, b.objects[i].size);
    EXPECT_EQ(a.objects[i].yaw, b.objects[i].yaw);
    EXPECT_EQ(a.objects[i].class_id, b.objects[i].class_id);
  }
  ASSERT_EQ(a.ground_regions.size(), b.ground_regions.size());
  for (std::size_t i = 0; i < a.ground_regions.size(); ++i) {
    EXPECT_EQ(a.ground_regions[i].vertices, b.ground_regions[i].vertices);
    EXPECT_EQ(a.ground_regions[i].class_id, b.ground_regions[i].class_id);
  }
}

TEST(GenerateSceneTest, SameSeedGivesIdenticalScene) {
  ExpectScenesEqual(GenerateScene(42), GenerateScene(42));
}

TEST(GenerateSceneTest, DifferentSeedsDiffer) {
  EXPECT_NE(GenerateScene(1).objects[0].center, GenerateScene(2).objects[0].center);
}

TEST(GenerateSceneTest, ZeroObjectsGivesGroundOnlyScene) {
  SceneParams params;
  params.vehicles = params.humans = params.movable_objects = 0;
  const Scene scene = GenerateScene(5, params);
  EXPECT_TRUE(scene.objects.empty());
  EXPECT_TRUE(scene.ground_plane);
  EXPECT_EQ(scene.ground_regions.size(), 3u);
}

TEST(GenerateSceneTest, ObjectCountsPerClass) {
  SceneParams params;
  params.vehicles = 10;
  params.humans = 3;
  params.movable_objects = 4;
  const Scene scene = GenerateScene(9, params);
  auto count = [&](int id) {
    return std::count_if(scene.objects.begin(), scene.objects.end(),
                         [&](const eval::Cuboid& b) { return b.class_id == id; });
  };
  EXPECT_EQ(count(kVehicle), 10);
  EXPECT_EQ(count(kHuman), 3);
  EXPECT_EQ(count(kMovableObject), 4);
  EXPECT_EQ(scene.seed, 9u);
}

TEST(GenerateSceneTest, ObjectsStayInsideTheDefaultGrid) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Scene scene = GenerateScene(seed);
    for (const eval::Cuboid& box : scene.objects) {
      EXPECT_LE(std::abs(box.center.x()), 45.);
      EXPECT_LE(std::abs(box.center.y()), 45.);
      EXPECT_GE(box.center.head<2>().norm(), 6.);
      EXPECT_NO_THROW(box.Validate());
    }
    for (const eval::Polygon2D& region : scene.ground_regions) {
      EXPECT_NO_THROW(region.Validate());
    }
  }
}

TEST(CastRayTest, HitsGroundAndBox) {
  Scene scene;
  eval::Cuboid box;
  box.center = Vec3(10., 0., 1.);
  box.size = Vec3(2., 2., 2.);
  box.class_id = kVehicle;
  scene.objects.push_back(box);
  const auto forward = CastRay(scene, Vec3(0., 0., 1.), Vec3(1., 0., 0.));
  ASSERT_TRUE(forward);
  EXPECT_NEAR(forward->t, 9., 1e-12);
  EXPECT_EQ(forward->class_id, kVehicle);
  const auto down = CastRay(scene, Vec3(0., 0., 2.), Vec3(1., 0., -1.));
  ASSERT_TRUE(down);
  EXPECT_NEAR(down->t, 2., 1e-12);
  EXPECT_EQ(down->class_id, kBackground);
  EXPECT_FALSE(CastRay(scene, Vec3(0., 0., 1.), Vec3(0., 1., 0.)));
  EXPECT_FALSE(CastRay(scene, Vec3(0., 0., 1.), Vec3(1., 0., 0.), 8.));
}

TEST(RenderViewsTest, EmptySceneSplitsAtHorizon) {
  Scene scene;
  scene.ground_regions.push_back(
      {{Eigen::Vector2d(-5000, -5000), Eigen::Vector2d(5000, -5000),
        Eigen::Vector2d(5000, 5000), Eigen::Vector2d(-5000, 5000)},
       kDrivableArea});
  geometry::CameraRig rig = DefaultRig();
  rig.cameras.resize(1);
  const RenderedView view = RenderViews(scene, rig)[0];
  const auto& k = rig.cameras[0].intrinsics;
  for (int v = 0; v < k.height; ++v) {
    const bool below = v + 0.5 > k.cy;
    for (int u = 0; u < k.width; u += 7) {
      EXPECT_EQ(view.semantic.at(v, u), below ? kDrivableArea : kBackground);
      EXPECT_EQ(view.depth.has(u, v), below);
      if (below) {
        // Camera 1.5 m above a flat ground, zero pitch.
        EXPECT_NEAR(view.depth.value(u, v), 1.5 * k.fy / (v + 0.5 - k.cy), 1e-9);
      }
    }
  }
}

TEST(RenderViewsTest, BoxFillingTheFrame) {
  Scene scene;
  eval::Cuboid wall;
  wall.center = Vec3(5., 0., 1.5);
  wall.size = Vec3(2., 100., 100.);
  wall.class_id = kVehicle;
  scene.objects.push_back(wall);
  geometry::CameraRig rig = DefaultRig();
  rig.cameras.resize(1);  // at x = 1 looking along +x; the face is at x = 4
  const RenderedView view = RenderViews(scene, rig)[0];
  for (int v = 0; v < view.depth.height(); ++v) {
    for (int u = 0; u < view.depth.width(); ++u) {
      ASSERT_EQ(view.semantic.at(v, u), kVehicle);
      ASSERT_NEAR(view.depth.value(u, v), 3., 1e-9);
    }
  }
  const Rgb8 color = ClassColor(kVehicle);
  EXPECT_NEAR(view.rgb.at(0, 10, 10), color.r / 255., 1e-12);
}

TEST(RenderViewsTest, BackProjectedDepthLiesOnHitSurface) {
  const Scene scene = GenerateScene(3);
  const geometry::CameraRig rig = DefaultRig();
  const std::vector<RenderedView> views = RenderViews(scene, rig);
  int checked = 0;
  for (std::size_t k = 0; k < rig.cameras.size(); ++k) {
    const geometry::Camera& camera = rig.cameras[k];
    for (int v = 0; v < camera.intrinsics.height; v += 3) {
      for (int u = 0; u < camera.intrinsics.width; u += 3) {
        if (!views[k].depth.has(u, v)) continue;
        const Vec3 p = geometry::CameraToVehicle(
            geometry::BackProjectPixel(u + 0.5, v + 0.5, views[k].depth.value(u, v),
                                       camera.intrinsics),
            camera.camera_from_vehicle);
        ASSERT_TRUE(OnSceneSurface(scene, p, 1e-6)) << p.transpose();
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 10000);
}

TEST(SampleLidarTest, DownwardRingHitsGroundAtClosedFormRadius) {
  Scene scene;
  const double elevation = -10.;
  const LidarPattern pattern = LidarPattern::Uniform(1, elevation, elevation, 720, 200.);
  const double height = 1.84;
  const auto lidar_from_vehicle =
      geometry::RigidTransform::Translation(Vec3(0., 0., -height));
  const auto cloud = SampleLidar(scene, pattern, lidar_from_vehicle);
  ASSERT_EQ(cloud.size(), 720u);
  const double radius = height / std::tan(-elevation * M_PI / 180.);
  for (const Vec3& p : cloud) {
    EXPECT_NEAR(p.head<2>().norm(), radius, 1e-6);
    EXPECT_NEAR(p.z(), -height, 1e-9);
  }
}

TEST(SampleLidarTest, NoSurfacesGivesEmptyCloud) {
  Scene scene;
  scene.ground_plane = false;
  EXPECT_TRUE(SampleLidar(scene, LidarPattern::Default(), geometry::RigidTransform())
                  .empty());
}

TEST(SampleLidarTest, RangeLimitDropsFarReturns) {
  Scene scene;
  const LidarPattern pattern = LidarPattern::Uniform(1, -1., -1., 36, 50.);
  const auto lidar_from_vehicle =
      geometry::RigidTransform::Translation(Vec3(0., 0., -1.84));
  // The ground is 105 m away along a -1 degree ray.
  EXPECT_TRUE(SampleLidar(scene, pattern, lidar_from_vehicle).empty());
}

TEST(SampleLidarTest, PatternValidation) {
  EXPECT_THROW(LidarPattern::Uniform(0, -10., 10., 100, 70.).Validate(),
               InvalidArgument);
  EXPECT_THROW(LidarPattern::Uniform(4, -10., 10., 100, 0.).Validate(),
               InvalidArgument);
  EXPECT_NO_THROW(LidarPattern::Default().Validate());
}

TEST(SampleLidarTest, EveryReturnLiesOnASurface) {
  const geometry::CameraRig rig = DefaultRig();
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Scene scene = GenerateScene(seed);
    const auto cloud = SampleLidar(scene, LidarPattern::Default(), rig.lidar_from_vehicle);
    EXPECT_GT(cloud.size(), 10000u);
    const geometry::RigidTransform vehicle_from_lidar = rig.lidar_from_vehicle.inverse();
    for (const Vec3& p : cloud) {
      ASSERT_TRUE(OnSceneSurface(scene, vehicle_from_lidar * p, 1e-6));
    }
  }
}

TEST(SampleLidarTest, CameraSeesNoFartherThanLidarAlongMatchedRays) {
  const Scene scene = GenerateScene(4);
  const geometry::CameraRig rig = DefaultRig();
  const auto cloud = SampleLidar(scene, LidarPattern::Default(), rig.lidar_from_vehicle);
  int checked = 0;
  for (const geometry::Camera& camera : rig.cameras) {
    const auto points = geometry::LidarToCamera(cloud, rig.lidar_from_vehicle,
                                                camera.camera_from_vehicle);
    for (const auto& p : geometry::ProjectToPixels(points, camera.intrinsics)) {
      const auto hit = CastCameraRay(scene, camera, p.u, p.v);
      ASSERT_TRUE(hit);
      ASSERT_LE(hit->t, p.depth + 1e-6);
      ++checked;
    }
  }
  EXPECT_GT(checked, 5000);
}

TEST(SampleLidarTest, RasterizedLidarDepthAgreesWithRenderWhereUnoccluded) {
  // Where the camera ray through the LiDAR point reaches that point, both
  // depths agree; occluded points are farther, never nearer.
  const Scene scene = GenerateScene(8);
  const geometry::CameraRig rig = DefaultRig();
  const auto cloud = SampleLidar(scene, LidarPattern::Default(), rig.lidar_from_vehicle);
  const geometry::Camera& camera = rig.cameras[0];
  const auto points = geometry::LidarToCamera(cloud, rig.lidar_from_vehicle,
                                              camera.camera_from_vehicle);
  int agreeing = 0;
  for (const auto& p : geometry::ProjectToPixels(points, camera.intrinsics)) {
    const auto hit = CastCameraRay(scene, camera, p.u, p.v);
    ASSERT_TRUE(hit);
    if (std::abs(hit->t - p.depth) <= 1e-6) ++agreeing;
  }
  EXPECT_GT(agreeing, 1000);
}

TEST(AnalyticBevTest, EmptySceneGivesZeroGrids) {
  const Scene scene;
  const auto classes = AllClassIds();
  const eval::SemanticGrid grid = AnalyticBev(scene, bev::GridSpec(), classes);
  ASSERT_EQ(grid.channels.size(), classes.size());
  for (const auto& channel : grid.channels) EXPECT_EQ(channel.Count(), 0u);
}

TEST(AnalyticBevTest, SingleCentredBoxMatchesRasterizer) {
  Scene scene;
  eval::Cuboid box;
  box.size = Vec3(3., 2., 1.5);
  box.center = Vec3(0., 0., 0.75);
  box.yaw = 0.3;
  box.class_id = kVehicle;
  scene.objects.push_back(box);
  const int classes[] = {kVehicle};
  const eval::SemanticGrid grid = AnalyticBev(scene, bev::GridSpec(), classes);
  EXPECT_TRUE(grid.channels[0] ==
              eval::RasterizeCuboids(scene.objects, bev::GridSpec(), kVehicle));
  EXPECT_GT(grid.channels[0].Count(), 0u);
}

TEST(AnalyticBevTest, RandomSceneEqualsEvalRasterization) {
  const bev::GridSpec spec;
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const Scene scene = GenerateScene(seed);
    const auto classes = AllClassIds();
    const eval::SemanticGrid grid = AnalyticBev(scene, spec, classes);
    for (std::size_t i = 0; i < classes.size(); ++i) {
      eval::BinaryMask expected =
          eval::RasterizeCuboids(scene.objects, spec, classes[i]);
      expected |= eval::RasterizePolygons(scene.ground_regions, spec, classes[i]);
      EXPECT_TRUE(grid.channels[i] == expected) << "class " << classes[i];
    }
  }
}

TEST(DefaultRigTest, SixCamerasAroundTheVehicle) {
  const geometry::CameraRig rig = DefaultRig();
  ASSERT_EQ(rig.cameras.size(), 6u);
  EXPECT_NO_THROW(rig.Validate());
  for (const geometry::Camera& camera : rig.cameras) {
    EXPECT_EQ(camera.intrinsics.width, 352);
    EXPECT_EQ(camera.intrinsics.height, 128);
    // Horizontal field of view of 70 degrees.
    EXPECT_NEAR(2. * std::atan(camera.intrinsics.width / 2. / camera.intrinsics.fx),
                70. * M_PI / 180., 1e-12);
    const Vec3 centre = camera.camera_from_vehicle.inverse().translation();
    EXPECT_NEAR(centre.z(), 1.5, 1e-12);
  }
  EXPECT_NEAR(rig.lidar_from_vehicle.inverse().translation().z(), 1.84, 1e-12);
}

}  // namespace
}  // namespace sim
}  // namespace lapt
