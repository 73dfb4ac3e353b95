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

#include "lapt/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "lapt/errors.h"

namespace lapt {
namespace pipeline {
namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& timings) : timings_(timings) {}

  void Lap(const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    timings_.push_back(
        {stage, std::chrono::duration<double, std::milli>(now - start_).count()});
    start_ = now;
  }

 private:
  std::vector<StageTiming>& timings_;
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

}  // namespace

int ResolveWorkers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) {
      return static_cast<int>(std::min(value, 256L));
    }
    throw InvalidArgument(std::string(kWorkersEnv) +
                          " must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void ParallelFor(int count, int workers, const std::function<void(int)>& fn) {
  const int threads = std::min(count, std::max(1, workers));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);
}

void ValidateConfig(const PipelineConfig& config) {
  if (config.scales.empty()) {
    throw InvalidArgument("at least one feature scale is required");
  }
  for (std::size_t i = 0; i < config.scales.size(); ++i) {
    if (config.scales[i] < 1 ||
        (i > 0 && config.scales[i] <= config.scales[i - 1])) {
      throw InvalidArgument("scales must be positive and strictly increasing");
    }
  }
  if (config.coarse_bev) config.grid.Coarsened();
}

CameraDepth ComputeCameraDepth(std::span<const geometry::Vec3> lidar_points,
                               const geometry::RigidTransform& lidar_from_vehicle,
                               const geometry::Camera& camera,
                               std::span<const int> factors) {
  const std::vector<geometry::Vec3> camera_points = geometry::LidarToCamera(
      lidar_points, lidar_from_vehicle, camera.camera_from_vehicle);
  const std::vector<geometry::PixelProjection> projected =
      geometry::ProjectToPixels(camera_points, camera.intrinsics);
  CameraDepth result{depth::RasterizeDepth(projected, camera.intrinsics.width,
                                           camera.intrinsics.height),
                     {}};
  for (const int factor : factors) {
    result.pooled.push_back(depth::MinPool(result.full, factor));
  }
  return result;
}

PipelineResult Run(const geometry::CameraRig& rig,
                   std::span<const geometry::Vec3> lidar_points,
                   const features::FeatureProvider& provider,
                   const PipelineConfig& config) {
  ValidateConfig(config);
  rig.Validate();
  const int cameras = static_cast<int>(rig.cameras.size());
  if (provider.num_cameras() != cameras) {
    throw InvalidArgument("feature provider has " +
                          std::to_string(provider.num_cameras()) +
                          " cameras, calibration has " +
                          std::to_string(cameras));
  }
  const int workers = ResolveWorkers(config.workers);
  const int num_scales = static_cast<int>(config.scales.size());
  const std::span<const int> scales(config.scales);

  PipelineResult result;
  StageClock clock(result.timings);

  std::vector<CameraDepth> depths(cameras);
  ParallelFor(cameras, workers, [&](int k) {
    depths[k] = ComputeCameraDepth(lidar_points, rig.lidar_from_vehicle,
                                   rig.cameras[k], scales);
  });
  clock.Lap("depth");

  std::vector<features::FeaturePyramid> pyramids(cameras);
  ParallelFor(cameras, workers, [&](int k) {
    pyramids[k] = provider.Extract(k, scales);
    pyramids[k].Validate(rig.cameras[k].intrinsics.width,
                         rig.cameras[k].intrinsics.height);
  });
  const int channels = pyramids.front().levels.front().channels;
  for (const features::FeaturePyramid& pyramid : pyramids) {
    for (const features::FeatureMap& level : pyramid.levels) {
      if (level.channels != channels) {
        throw InvalidArgument("feature maps disagree on channel count");
      }
    }
  }
  clock.Lap("features");

  auto scale_spec = [&](int s) {
    return config.coarse_bev && s == num_scales - 1 ? config.grid.Coarsened()
                                                    : config.grid;
  };
  std::vector<std::vector<bev::SplatTarget>> targets(
      static_cast<std::size_t>(cameras) * num_scales);
  ParallelFor(cameras * num_scales, workers, [&](int job) {
    const int k = job / num_scales;
    const int s = job % num_scales;
    targets[job] = bev::ComputeSplatTargets(
        pyramids[k].levels[s], depths[k].pooled[s], rig.cameras[k].intrinsics,
        rig.cameras[k].camera_from_vehicle, scale_spec(s));
  });
  clock.Lap("splat");

  for (int s = 0; s < num_scales; ++s) {
    bev::BevGrid grid(scale_spec(s), channels);
    std::size_t splatted = 0;
    for (int k = 0; k < cameras; ++k) {
      const auto& scale_targets = targets[k * num_scales + s];
      bev::AccumulateSplat(pyramids[k].levels[s], scale_targets, grid);
      splatted += scale_targets.size();
    }
    if (!(grid.spec() == config.grid)) {
      grid = bev::UpsampleBilinear2x(grid, config.grid);
    }
    result.splatted_pixels.push_back(splatted);
    result.scale_bevs.push_back(std::move(grid));
  }
  result.camera_bev = bev::FuseScales(result.scale_bevs);
  clock.Lap("accumulate");

  if (config.lidar_bev) {
    result.lidar_bev = bev::LidarOccupancyBev(
        lidar_points, rig.lidar_from_vehicle, config.grid);
    result.fused_bev = bev::FuseModalities(result.camera_bev,
                                           *result.lidar_bev, config.fusion);
    clock.Lap("lidar_fusion");
  } else {
    result.fused_bev = result.camera_bev;
  }

  if (!config.class_ids.empty()) {
    if (static_cast<int>(config.class_ids.size()) >
        result.fused_bev.channels()) {
      throw InvalidArgument("more classes requested than BEV channels");
    }
    eval::SemanticGrid semantic;
    semantic.spec = config.grid;
    for (std::size_t i = 0; i < config.class_ids.size(); ++i) {
      semantic.class_ids.push_back(config.class_ids[i]);
      semantic.channels.push_back(eval::Binarize(
          result.fused_bev, static_cast<int>(i), config.threshold));
    }
    result.semantic = std::move(semantic);
    clock.Lap("binarize");
  }

  result.depth_images.reserve(cameras);
  for (CameraDepth& camera_depth : depths) {
    result.depth_images.push_back(std::move(camera_depth.full));
  }
  return result;
}

}  // namespace pipeline
}  // namespace lapt
