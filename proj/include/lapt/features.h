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

#ifndef LAPT_FEATURES_H_
#define LAPT_FEATURES_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lapt {
namespace features {

// RGB image, planar channel-major storage, values in [0, 1].
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // 3 * height * width

  Image() = default;
  Image(int width, int height, double fill = 0.);

  double& at(int channel, int row, int col) {
    return data[(static_cast<std::size_t>(channel) * height + row) * width +
                col];
  }
  double at(int channel, int row, int col) const {
    return data[(static_cast<std::size_t>(channel) * height + row) * width +
                col];
  }
};

// Per-pixel class ids; 0 is background.
struct SemanticImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> labels;  // height * width, row-major

  SemanticImage() = default;
  SemanticImage(int width, int height, std::uint8_t fill = 0);

  std::uint8_t& at(int row, int col) {
    return labels[static_cast<std::size_t>(row) * width + col];
  }
  std::uint8_t at(int row, int col) const {
    return labels[static_cast<std::size_t>(row) * width + col];
  }
};

// N_f x (H / factor) x (W / factor) tensor, channel-major.
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  int factor = 1;
  int camera = 0;
  std::vector<double> data;

  FeatureMap() = default;
  FeatureMap(int channels, int height, int width, int factor, int camera = 0);

  double& at(int channel, int row, int col) {
    return data[(static_cast<std::size_t>(channel) * height + row) * width +
                col];
  }
  double at(int channel, int row, int col) const {
    return data[(static_cast<std::size_t>(channel) * height + row) * width +
                col];
  }
};

// Feature maps of one camera ordered by strictly increasing factor.
struct FeaturePyramid {
  std::vector<FeatureMap> levels;

  // Throws InvalidArgument unless factors strictly increase and every level
  // times its factor reproduces (image_height, image_width).
  void Validate(int image_width, int image_height) const;
  // Returns the level with `factor`; throws InvalidArgument if absent.
  const FeatureMap& Level(int factor) const;
};

inline constexpr int kDefaultFactors[] = {8, 16};

// Average-pools each RGB channel over factor x factor blocks. Throws
// InvalidArgument if a factor is not positive or does not divide the size.
FeaturePyramid RgbPyramid(const Image& image, std::span<const int> factors,
                          int camera = 0);

// One-hot of the block majority class (background excluded; ties go to the
// smallest class id). All-background blocks yield the zero vector. Channel
// c - 1 holds class c. Throws InvalidArgument for a non-dividing factor or a
// label above num_classes.
FeaturePyramid OneHotSemanticPyramid(const SemanticImage& semantic,
                                     int num_classes,
                                     std::span<const int> factors,
                                     int camera = 0);

// Source of per-camera feature pyramids. A learned backbone can be slotted in
// behind this interface.
class FeatureProvider {
 public:
  virtual ~FeatureProvider() = default;
  virtual int num_cameras() const = 0;
  virtual int channels() const = 0;
  virtual FeaturePyramid Extract(int camera,
                                 std::span<const int> factors) const = 0;
};

class RgbFeatureProvider : public FeatureProvider {
 public:
  explicit RgbFeatureProvider(std::vector<Image> images)
      : images_(std::move(images)) {}
  int num_cameras() const override { return static_cast<int>(images_.size()); }
  int channels() const override { return 3; }
  FeaturePyramid Extract(int camera,
                         std::span<const int> factors) const override;

 private:
  std::vector<Image> images_;
};

class SemanticFeatureProvider : public FeatureProvider {
 public:
  SemanticFeatureProvider(std::vector<SemanticImage> images, int num_classes)
      : images_(std::move(images)), num_classes_(num_classes) {}
  int num_cameras() const override { return static_cast<int>(images_.size()); }
  int channels() const override { return num_classes_; }
  FeaturePyramid Extract(int camera,
                         std::span<const int> factors) const override;

 private:
  std::vector<SemanticImage> images_;
  int num_classes_;
};

// Serves precomputed tensors (e.g. loaded from disk). Every requested factor
// must be present for the camera.
class PrecomputedFeatureProvider : public FeatureProvider {
 public:
  explicit PrecomputedFeatureProvider(std::vector<FeaturePyramid> pyramids);
  int num_cameras() const override {
    return static_cast<int>(pyramids_.size());
  }
  int channels() const override { return channels_; }
  FeaturePyramid Extract(int camera,
                         std::span<const int> factors) const override;

 private:
  std::vector<FeaturePyramid> pyramids_;
  int channels_ = 0;
};

}  // namespace features
}  // namespace lapt

#endif  // LAPT_FEATURES_H_
