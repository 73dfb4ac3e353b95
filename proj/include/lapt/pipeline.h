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

#ifndef LAPT_PIPELINE_H_
#define LAPT_PIPELINE_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lapt/bev.h"
#include "lapt/depth.h"
#include "lapt/eval.h"
#include "lapt/features.h"
#include "lapt/geometry.h"

namespace lapt {
namespace pipeline {

// Environment variable overriding the worker count when
// PipelineConfig::workers is 0.
inline constexpr const char* kWorkersEnv = "LAPT_NUM_WORKERS";

// Resolves a requested worker count: explicit > environment > hardware.
int ResolveWorkers(int requested);

// Runs fn(0) .. fn(count - 1) on up to `workers` threads. Each index runs
// exactly once; callers write results into per-index slots, so the outcome
// does not depend on scheduling. The first exception is rethrown.
void ParallelFor(int count, int workers, const std::function<void(int)>& fn);

struct PipelineConfig {
  // Feature scales; {16} is the single-scale variant, {8, 16} the
  // multi-scale one.
  std::vector<int> scales{8, 16};
  bev::GridSpec grid;
  // Project the coarsest scale into a half-resolution grid, then upsample.
  bool coarse_bev = false;
  bool lidar_bev = false;
  bev::FusionMethod fusion = bev::FusionMethod::kSum;
  double threshold = 0.5;
  // Class ids of the first channels of the fused grid, one binary channel
  // each in the semantic output. Empty skips binarization.
  std::vector<int> class_ids;
  int workers = 0;
};

// Throws InvalidArgument on empty or non-increasing scales, or an odd grid
// when coarse_bev is set.
void ValidateConfig(const PipelineConfig& config);

struct StageTiming {
  std::string stage;
  double milliseconds;
};

struct PipelineResult {
  std::vector<depth::DepthImage> depth_images;  // per camera, full resolution
  std::vector<bev::BevGrid> scale_bevs;         // per scale, cameras summed
  bev::BevGrid camera_bev;                      // scales fused
  std::optional<bev::BevGrid> lidar_bev;
  bev::BevGrid fused_bev;  // camera_bev, or the modality fusion
  std::optional<eval::SemanticGrid> semantic;
  std::vector<StageTiming> timings;
  // Number of feature pixels that landed in the grid, per scale.
  std::vector<std::size_t> splatted_pixels;
};

// Projection, z-buffering and min-pooling for one camera; returns the full
// resolution depth image and its pooled copies for `factors`.
struct CameraDepth {
  depth::DepthImage full;
  std::vector<depth::DepthImage> pooled;
};
CameraDepth ComputeCameraDepth(std::span<const geometry::Vec3> lidar_points,
                               const geometry::RigidTransform& lidar_from_vehicle,
                               const geometry::Camera& camera,
                               std::span<const int> factors);

// Full pipeline on one keyframe. Cameras are processed in parallel; per-scale
// BEV accumulation runs in rig order and row-major pixel order, so results
// are bit-identical for any worker count.
PipelineResult Run(const geometry::CameraRig& rig,
                   std::span<const geometry::Vec3> lidar_points,
                   const features::FeatureProvider& provider,
                   const PipelineConfig& config);

}  // namespace pipeline
}  // namespace lapt

#endif  // LAPT_PIPELINE_H_
