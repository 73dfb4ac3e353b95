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

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "gtest/gtest.h"
#include "lapt/errors.h"
#include "lapt/sim.h"

namespace lapt {
namespace pipeline {
namespace {

struct SimSample {
  sim::Scene scene;
  geometry::CameraRig rig;
  std::vector<geometry::Vec3> cloud;
  std::vector<features::SemanticImage> semantic;
  std::vector<features::Image> rgb;
};

SimSample MakeSample(std::uint64_t seed) {
  SimSample sample;
  sample.scene = sim::GenerateScene(seed);
  sample.rig = sim::DefaultRig();
  sample.cloud = sim::SampleLidar(sample.scene, sim::LidarPattern::Default(),
                                  sample.rig.lidar_from_vehicle);
  for (sim::RenderedView& view : sim::RenderViews(sample.scene, sample.rig)) {
    sample.semantic.push_back(std::move(view.semantic));
    sample.rgb.push_back(std::move(view.rgb));
  }
  return sample;
}

const SimSample& SharedSample() {
  static const SimSample sample = MakeSample(5);
  return sample;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    setenv(name, value, 1);
  }
  ~ScopedEnv() {
    if (old_.empty()) {
      unsetenv(name_);
    } else {
      setenv(name_, old_.c_str(), 1);
    }
  }

 private:
  const char* name_;
  std::string old_;
};

TEST(ResolveWorkersTest, ExplicitBeatsEnvironment) {
  ScopedEnv env(kWorkersEnv, "3");
  EXPECT_EQ(ResolveWorkers(2), 2);
  EXPECT_EQ(ResolveWorkers(0), 3);
}

TEST(ResolveWorkersTest, InvalidEnvironmentIsRejected) {
  ScopedEnv env(kWorkersEnv, "many");
  EXPECT_THROW(ResolveWorkers(0), InvalidArgument);
}

TEST(ResolveWorkersTest, FallsBackToHardware) {
  unsetenv(kWorkersEnv);
  EXPECT_GE(ResolveWorkers(0), 1);
}

TEST(ParallelForTest, RunsEveryIndexOnce) {
  for (const int workers : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(50);
    ParallelFor(50, workers, [&](int i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelForTest, PropagatesExceptions) {
  EXPECT_THROW(ParallelFor(10, 4,
                           [](int i) {
                             if (i == 7) throw InvalidArgument("seven");
                           }),
               InvalidArgument);
}

TEST(ValidateConfigTest, RejectsBadScalesAndOddCoarseGrid) {
  PipelineConfig config;
  config.scales = {};
  EXPECT_THROW(ValidateConfig(config), InvalidArgument);
  config.scales = {16, 8};
  EXPECT_THROW(ValidateConfig(config), InvalidArgument);
  config.scales = {0, 8};
  EXPECT_THROW(ValidateConfig(config), InvalidArgument);
  config.scales = {8, 16};
  config.grid = bev::GridSpec(3., 3., 1., -2., 4.);
  config.coarse_bev = true;
  EXPECT_THROW(ValidateConfig(config), InvalidArgument);
}

TEST(RunTest, MatchesManualComposition) {
  const SimSample& sample = SharedSample();
  const features::SemanticFeatureProvider provider(sample.semantic,
                                                   sim::kNumClasses);
  PipelineConfig config;
  config.workers = 2;
  const PipelineResult result = pipeline::Run(sample.rig, sample.cloud, provider, config);

  std::vector<bev::BevGrid> per_scale;
  for (std::size_t s = 0; s < config.scales.size(); ++s) {
    bev::BevGrid sum(config.grid, sim::kNumClasses);
    for (std::size_t k = 0; k < sample.rig.cameras.size(); ++k) {
      const geometry::Camera& camera = sample.rig.cameras[k];
      const auto points = geometry::LidarToCamera(
          sample.cloud, sample.rig.lidar_from_vehicle, camera.camera_from_vehicle);
      const auto image = depth::RasterizeDepth(
          geometry::ProjectToPixels(points, camera.intrinsics),
          camera.intrinsics.width, camera.intrinsics.height);
      EXPECT_TRUE(image == result.depth_images[k]);
      const int factor = config.scales[s];
      const int factors[] = {factor};
      const bev::BevGrid grid = bev::SplatFeatures(
          features::OneHotSemanticPyramid(sample.semantic[k], sim::kNumClasses,
                                          factors)
              .levels[0],
          depth::MinPool(image, factor), camera.intrinsics,
          camera.camera_from_vehicle, config.grid);
      for (std::size_t i = 0; i < grid.data().size(); ++i) {
        sum.data()[i] += grid.data()[i];
      }
    }
    EXPECT_TRUE(sum == result.scale_bevs[s]) << "scale " << s;
    per_scale.push_back(std::move(sum));
  }
  EXPECT_TRUE(bev::FuseScales(per_scale) == result.camera_bev);
  EXPECT_TRUE(result.fused_bev == result.camera_bev);
  EXPECT_FALSE(result.semantic);
  EXPECT_GT(result.camera_bev.NonZeroCells(), 100u);
}

TEST(RunTest, BitIdenticalAcrossWorkerCounts) {
  const SimSample& sample = SharedSample();
  const features::RgbFeatureProvider provider(sample.rgb);
  PipelineConfig config;
  config.lidar_bev = true;
  config.fusion = bev::FusionMethod::kConcat;
  config.class_ids = {1, 2, 3};
  config.workers = 1;
  const PipelineResult one = pipeline::Run(sample.rig, sample.cloud, provider, config);
  for (const int workers : {2, 4, 7}) {
    config.workers = workers;
    const PipelineResult many = pipeline::Run(sample.rig, sample.cloud, provider, config);
    EXPECT_TRUE(many.fused_bev == one.fused_bev);
    EXPECT_TRUE(*many.semantic == *one.semantic);
  }
}

TEST(RunTest, CoarseBevUpsamplesOnlyTheCoarsestScale) {
  const SimSample& sample = SharedSample();
  const features::SemanticFeatureProvider provider(sample.semantic,
                                                   sim::kNumClasses);
  PipelineConfig fine;
  PipelineConfig coarse;
  coarse.coarse_bev = true;
  const PipelineResult a = pipeline::Run(sample.rig, sample.cloud, provider, fine);
  const PipelineResult b = pipeline::Run(sample.rig, sample.cloud, provider, coarse);
  EXPECT_TRUE(a.scale_bevs[0] == b.scale_bevs[0]);
  EXPECT_FALSE(a.scale_bevs[1] == b.scale_bevs[1]);
  EXPECT_TRUE(b.scale_bevs[1].spec() == fine.grid);
  // Bilinear x2 upsampling with clamped borders spreads each coarse cell
  // over four fine cells with unit weight apiece.
  EXPECT_NEAR(b.scale_bevs[1].Total(), 4. * a.scale_bevs[1].Total(),
              1e-9 * a.scale_bevs[1].Total());
}

TEST(RunTest, MultiScaleCoversAtLeastSingleScale) {
  for (std::uint64_t seed = 20; seed < 23; ++seed) {
    const SimSample sample = MakeSample(seed);
    const features::SemanticFeatureProvider provider(sample.semantic,
                                                     sim::kNumClasses);
    PipelineConfig single;
    single.scales = {16};
    PipelineConfig multi;
    const auto a = pipeline::Run(sample.rig, sample.cloud, provider, single);
    const auto b = pipeline::Run(sample.rig, sample.cloud, provider, multi);
    EXPECT_LE(a.camera_bev.NonZeroCells(), b.camera_bev.NonZeroCells());
    EXPECT_GT(b.splatted_pixels[0], b.splatted_pixels[1]);
  }
}

TEST(RunTest, LidarFusionShapes) {
  const SimSample& sample = SharedSample();
  const features::SemanticFeatureProvider provider(sample.semantic,
                                                   sim::kNumClasses);
  PipelineConfig config;
  config.lidar_bev = true;
  config.fusion = bev::FusionMethod::kConcat;
  const auto result = pipeline::Run(sample.rig, sample.cloud, provider, config);
  ASSERT_TRUE(result.lidar_bev);
  EXPECT_EQ(result.fused_bev.channels(), sim::kNumClasses + bev::kLidarBevChannels);
  config.fusion = bev::FusionMethod::kSum;
  EXPECT_THROW(pipeline::Run(sample.rig, sample.cloud, provider, config), InvalidArgument);

  const features::RgbFeatureProvider rgb(sample.rgb);
  config.fusion = bev::FusionMethod::kMaxPool;
  EXPECT_EQ(pipeline::Run(sample.rig, sample.cloud, rgb, config).fused_bev.channels(), 3);
}

TEST(RunTest, RejectsInconsistentInputs) {
  const SimSample& sample = SharedSample();
  const features::SemanticFeatureProvider two_cameras(
      {sample.semantic[0], sample.semantic[1]}, sim::kNumClasses);
  EXPECT_THROW(pipeline::Run(sample.rig, sample.cloud, two_cameras, PipelineConfig{}),
               InvalidArgument);
  const features::RgbFeatureProvider rgb(sample.rgb);
  PipelineConfig config;
  config.class_ids = {1, 2, 3, 4};
  EXPECT_THROW(pipeline::Run(sample.rig, sample.cloud, rgb, config), InvalidArgument);
}

TEST(RunTest, RecordsStageTimings) {
  const SimSample& sample = SharedSample();
  const features::RgbFeatureProvider provider(sample.rgb);
  PipelineConfig config;
  config.class_ids = {1};
  const auto result = pipeline::Run(sample.rig, sample.cloud, provider, config);
  std::vector<std::string> stages;
  for (const auto& timing : result.timings) {
    stages.push_back(timing.stage);
    EXPECT_GE(timing.milliseconds, 0.);
  }
  EXPECT_EQ(stages, (std::vector<std::string>{"depth", "features", "splat",
                                              "accumulate", "binarize"}));
}

}  // namespace
}  // namespace pipeline
}  // namespace lapt
