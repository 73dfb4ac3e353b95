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

#ifndef LAPT_IO_H_
#define LAPT_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lapt/bev.h"
#include "lapt/depth.h"
#include "lapt/eval.h"
#include "lapt/features.h"
#include "lapt/geometry.h"
#include "lapt/sim.h"

// On-disk formats. All binary values are little-endian; 32-bit floats on disk,
// 64-bit doubles in memory. Byte layouts are documented in docs/formats.md.
//
// Readers throw IoError when a file cannot be opened and FormatError when its
// content is malformed; nothing is silently repaired or truncated.
namespace lapt {
namespace io {

namespace fs = std::filesystem;

// Magic prefixes (8 bytes each).
inline constexpr char kCloudMagic[8] = {'L', 'A', 'P', 'T', 'P', 'C', 'L', '1'};
inline constexpr char kGridMagic[8] = {'L', 'A', 'P', 'T', 'G', 'R', 'D', '1'};
inline constexpr char kDepthMagic[8] = {'L', 'A', 'P', 'T', 'D', 'E', 'P', '1'};
inline constexpr char kFeatureMagic[8] = {'L', 'A', 'P', 'T', 'F', 'E', 'A', '1'};

// JSON calibration with explicit frame-direction keys. Validation rejects
// rotations that are not orthonormal within 1e-6.
geometry::CameraRig ReadCalibration(const fs::path& path);
void WriteCalibration(const fs::path& path, const geometry::CameraRig& rig);
geometry::CameraRig ParseCalibration(const std::string& json_text);
std::string FormatCalibration(const geometry::CameraRig& rig);

// magic | uint32 count | count * (float32 x, y, z)
std::vector<geometry::Vec3> ReadCloud(const fs::path& path);
void WriteCloud(const fs::path& path, const std::vector<geometry::Vec3>& cloud);

// magic | uint32 channels, X, Y | float32 resolution, x_extent, y_extent,
// z_min, z_max | channels * Y * X float32, channel-major then row-major.
bev::BevGrid ReadGrid(const fs::path& path);
void WriteGrid(const fs::path& path, const bev::BevGrid& grid);
// Semantic grids share the grid layout with 0/1 payload values; channel i
// holds class id i + 1. Reading rejects any other value.
eval::SemanticGrid ReadSemanticGrid(const fs::path& path);
void WriteSemanticGrid(const fs::path& path, const eval::SemanticGrid& grid);

// magic | uint32 channels (= 1), width, height | float32 payload, +inf marks
// an empty cell.
depth::DepthImage ReadDepthImage(const fs::path& path);
void WriteDepthImage(const fs::path& path, const depth::DepthImage& image);

// magic | uint32 channels, height, width, factor, camera | float32 payload.
features::FeatureMap ReadFeatureMap(const fs::path& path);
void WriteFeatureMap(const fs::path& path, const features::FeatureMap& map);

// Binary PPM (P6, maxval 255). Values are quantized to round(255 * value).
features::Image ReadImage(const fs::path& path);
void WriteImage(const fs::path& path, const features::Image& image);
// Binary PGM (P5, maxval 255) holding class ids.
features::SemanticImage ReadSemanticImage(const fs::path& path);
void WriteSemanticImage(const fs::path& path,
                        const features::SemanticImage& image);

// Scene contents as JSON: ground regions, cuboids, ground-plane flag, seed.
sim::Scene ReadAnnotations(const fs::path& path);
void WriteAnnotations(const fs::path& path, const sim::Scene& scene);

// Directory layout of one synchronized keyframe:
//   calibration.json           rig (required)
//   cloud.bin                  LiDAR sweep (required)
//   camera_<k>.ppm             RGB image per camera (required)
//   camera_<k>_semantic.pgm    semantic image per camera (optional)
//   camera_<k>_depth.bin       rendered exact depth per camera (optional)
//   features/camera_<k>_f<d>.bin  precomputed feature maps (optional)
//   annotations.json           scene annotations (optional)
//   gt/semantic.grid           ground-truth semantic grid (optional)
struct Sample {
  geometry::CameraRig rig;
  std::vector<geometry::Vec3> cloud;
  std::vector<features::Image> images;
  std::vector<features::SemanticImage> semantic_images;  // empty if absent
  std::vector<depth::DepthImage> exact_depth;            // empty if absent
  std::vector<features::FeaturePyramid> features;        // empty if absent
  std::optional<sim::Scene> annotations;
  std::optional<eval::SemanticGrid> ground_truth;

  // Throws InvalidArgument when the camera count or image sizes disagree with
  // the calibration.
  void Validate() const;
};

fs::path CameraImagePath(const fs::path& dir, int camera);
fs::path SemanticImagePath(const fs::path& dir, int camera);
fs::path ExactDepthPath(const fs::path& dir, int camera);
fs::path FeatureMapPath(const fs::path& dir, int camera, int factor);
fs::path GroundTruthPath(const fs::path& dir);

// Reads every present file of the layout. Throws IoError if a required file
// is missing.
Sample ReadSample(const fs::path& dir);
// Creates `dir` if needed and writes every populated member.
void WriteSample(const fs::path& dir, const Sample& sample);

}  // namespace io
}  // namespace lapt

#endif  // LAPT_IO_H_
