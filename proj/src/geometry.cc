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

#include "lapt/geometry.h"

#include <cmath>
#include <sstream>

#include "Eigen/Geometry"
#include "lapt/errors.h"

namespace lapt {
namespace geometry {

RigidTransform RigidTransform::FromMatrix(const Eigen::Matrix4d& matrix) {
  if (!matrix.allFinite()) {
    throw CalibrationError("transform has non-finite entries");
  }
  if (matrix(3, 0) != 0. || matrix(3, 1) != 0. || matrix(3, 2) != 0. ||
      matrix(3, 3) != 1.) {
    throw CalibrationError("transform bottom row must be exactly [0 0 0 1]");
  }
  const Eigen::Matrix3d rotation = matrix.topLeftCorner<3, 3>();
  const double orthonormality_error =
      (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
          .cwiseAbs()
          .maxCoeff();
  if (orthonormality_error > kOrthonormalityTolerance) {
    std::ostringstream message;
    message << "rotation block is not orthonormal (max |R^T R - I| = "
            << orthonormality_error << ")";
    throw CalibrationError(message.str());
  }
  if (std::abs(rotation.determinant() - 1.) > kOrthonormalityTolerance) {
    throw CalibrationError("rotation block has determinant != +1");
  }
  return RigidTransform(matrix);
}

RigidTransform RigidTransform::FromRotationTranslation(
    const Eigen::Matrix3d& rotation, const Vec3& translation) {
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Identity();
  matrix.topLeftCorner<3, 3>() = rotation;
  matrix.topRightCorner<3, 1>() = translation;
  return FromMatrix(matrix);
}

RigidTransform RigidTransform::Translation(const Vec3& translation) {
  return FromRotationTranslation(Eigen::Matrix3d::Identity(), translation);
}

RigidTransform RigidTransform::FromYaw(double yaw, const Vec3& translation) {
  return FromRotationTranslation(
      Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix(), translation);
}

RigidTransform RigidTransform::inverse() const {
  const Eigen::Matrix3d rotation_t = rotation().transpose();
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Identity();
  matrix.topLeftCorner<3, 3>() = rotation_t;
  matrix.topRightCorner<3, 1>() = -rotation_t * translation();
  return RigidTransform(matrix);
}

RigidTransform RigidTransform::operator*(const RigidTransform& other) const {
  Eigen::Matrix4d product = matrix_ * other.matrix_;
  product.row(3) << 0., 0., 0., 1.;
  return RigidTransform(product);
}

void CameraIntrinsics::Validate() const {
  if (!(fx > 0.) || !(fy > 0.)) {
    throw CalibrationError("focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw CalibrationError("image size must be positive");
  }
  if (!(cx >= 0. && cx < width && cy >= 0. && cy < height)) {
    throw CalibrationError("principal point lies outside the image");
  }
}

Eigen::Matrix3d CameraIntrinsics::matrix() const {
  Eigen::Matrix3d k;
  k << fx, 0., cx, 0., fy, cy, 0., 0., 1.;
  return k;
}

void CameraRig::Validate() const {
  if (cameras.empty()) {
    throw CalibrationError("camera rig has no cameras");
  }
  for (const Camera& camera : cameras) {
    camera.intrinsics.Validate();
  }
}

std::vector<Vec3> LidarToCamera(std::span<const Vec3> lidar_points,
                                const RigidTransform& lidar_from_vehicle,
                                const RigidTransform& camera_from_vehicle) {
  const RigidTransform camera_from_lidar =
      camera_from_vehicle * lidar_from_vehicle.inverse();
  const Eigen::Matrix3d rotation = camera_from_lidar.rotation();
  const Vec3 translation = camera_from_lidar.translation();
  std::vector<Vec3> camera_points;
  camera_points.reserve(lidar_points.size());
  for (const Vec3& point : lidar_points) {
    camera_points.push_back(rotation * point + translation);
  }
  return camera_points;
}

std::vector<PixelProjection> ProjectToPixels(
    std::span<const Vec3> camera_points, const CameraIntrinsics& intrinsics) {
  std::vector<PixelProjection> projections;
  const double width = intrinsics.width;
  const double height = intrinsics.height;
  for (std::size_t i = 0; i < camera_points.size(); ++i) {
    const Vec3& point = camera_points[i];
    if (!(point.z() > kNearPlane)) continue;
    const double u = intrinsics.fx * point.x() / point.z() + intrinsics.cx;
    const double v = intrinsics.fy * point.y() / point.z() + intrinsics.cy;
    if (!(u >= 0. && u < width && v >= 0. && v < height)) continue;
    projections.push_back({u, v, point.z(), i});
  }
  return projections;
}

Vec3 BackProjectPixel(double u, double v, double delta,
                      const CameraIntrinsics& intrinsics) {
  if (!(delta > 0.) || !std::isfinite(delta)) {
    throw InvalidArgument("back-projection depth must be positive and finite");
  }
  return Vec3(delta * (u - intrinsics.cx) / intrinsics.fx,
              delta * (v - intrinsics.cy) / intrinsics.fy, delta);
}

Vec3 CameraToVehicle(const Vec3& camera_point,
                     const RigidTransform& camera_from_vehicle) {
  const Eigen::Matrix3d rotation = camera_from_vehicle.rotation();
  return rotation.transpose() *
         (camera_point - camera_from_vehicle.translation());
}

}  // namespace geometry
}  // namespace lapt
