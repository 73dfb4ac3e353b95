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

#ifndef LAPT_GEOMETRY_H_
#define LAPT_GEOMETRY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "Eigen/Core"

namespace lapt {
namespace geometry {

// A point in meters. Which frame it lives in is carried by the variable name
// (lidar, vehicle, camera); the vehicle frame is +x forward, +y left, +z up and
// camera frames are +z forward, +x right, +y down.
using Vec3 = Eigen::Vector3d;

// Points closer to the image plane than this are not projected.
inline constexpr double kNearPlane = 1e-3;

// Rigid-body transform stored as a 4x4 homogeneous matrix. Construction
// validates that the rotation block is orthonormal within 1e-6 with
// determinant +1 and that the bottom row is exactly [0 0 0 1]; a
// RigidTransform therefore always has a closed-form inverse.
class RigidTransform {
 public:
  static constexpr double kOrthonormalityTolerance = 1e-6;

  RigidTransform() : matrix_(Eigen::Matrix4d::Identity()) {}

  // Throws CalibrationError if `matrix` is not a rigid transform.
  static RigidTransform FromMatrix(const Eigen::Matrix4d& matrix);
  static RigidTransform FromRotationTranslation(const Eigen::Matrix3d& rotation,
                                                const Vec3& translation);
  static RigidTransform Translation(const Vec3& translation);
  // Rotation about +z by `yaw` radians followed by the translation.
  static RigidTransform FromYaw(double yaw, const Vec3& translation);

  const Eigen::Matrix4d& matrix() const { return matrix_; }
  Eigen::Matrix3d rotation() const { return matrix_.topLeftCorner<3, 3>(); }
  Vec3 translation() const { return matrix_.topRightCorner<3, 1>(); }

  RigidTransform inverse() const;
  Vec3 operator*(const Vec3& point) const {
    return matrix_.topLeftCorner<3, 3>() * point +
           matrix_.topRightCorner<3, 1>();
  }
  RigidTransform operator*(const RigidTransform& other) const;

 private:
  explicit RigidTransform(const Eigen::Matrix4d& matrix) : matrix_(matrix) {}

  Eigen::Matrix4d matrix_;
};

// Zero-skew pinhole intrinsics for a W x H image.
struct CameraIntrinsics {
  double fx = 1.;
  double fy = 1.;
  double cx = 0.;
  double cy = 0.;
  int width = 1;
  int height = 1;

  // Throws CalibrationError unless fx, fy > 0 and the principal point lies
  // inside [0, W) x [0, H).
  void Validate() const;
  Eigen::Matrix3d matrix() const;
};

struct Camera {
  CameraIntrinsics intrinsics;
  // Maps vehicle-frame points into this camera's frame (E_k).
  RigidTransform camera_from_vehicle;
};

struct CameraRig {
  std::vector<Camera> cameras;
  // Maps vehicle-frame points into the LiDAR frame (E_P).
  RigidTransform lidar_from_vehicle;

  // Throws CalibrationError on an empty rig or invalid intrinsics.
  void Validate() const;
};

struct PixelProjection {
  double u = 0.;
  double v = 0.;
  double depth = 0.;
  std::size_t source_index = 0;
};

// Maps LiDAR-frame points into the camera frame: E_k * E_P^-1 * p.
std::vector<Vec3> LidarToCamera(std::span<const Vec3> lidar_points,
                                const RigidTransform& lidar_from_vehicle,
                                const RigidTransform& camera_from_vehicle);

// Pinhole projection. Points with z <= kNearPlane or landing outside
// [0, W) x [0, H) are dropped; the survivors keep their input index.
std::vector<PixelProjection> ProjectToPixels(
    std::span<const Vec3> camera_points, const CameraIntrinsics& intrinsics);

// Inverse pinhole: delta * I^-1 * (u, v, 1). Throws InvalidArgument unless
// delta > 0.
Vec3 BackProjectPixel(double u, double v, double delta,
                      const CameraIntrinsics& intrinsics);

// Applies E_k^-1.
Vec3 CameraToVehicle(const Vec3& camera_point,
                     const RigidTransform& camera_from_vehicle);

}  // namespace geometry
}  // namespace lapt

#endif  // LAPT_GEOMETRY_H_
