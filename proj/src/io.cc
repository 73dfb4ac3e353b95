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

#include "lapt/io.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "lapt/errors.h"

namespace lapt {
namespace io {
namespace {

using nlohmann::json;

static_assert(std::numeric_limits<float>::is_iec559);

std::vector<std::uint8_t> ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::string ReadFileText(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void WriteFileText(const fs::path& path, const std::string& text) {
  WriteFileBytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

class ByteWriter {
 public:
  void Magic(const char (&magic)[8]) {
    bytes_.insert(bytes_.end(), magic, magic + 8);
  }
  void U32(std::uint32_t value) {
    for (int i = 0; i < 4; ++i) bytes_.push_back((value >> (8 * i)) & 0xffu);
  }
  void F32(double value) { U32(std::bit_cast<std::uint32_t>(static_cast<float>(value))); }
  std::vector<std::uint8_t> Take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  ByteReader(const std::vector<std::uint8_t>& bytes, const fs::path& path)
      : bytes_(bytes), path_(path) {}

  void ExpectMagic(const char (&magic)[8]) {
    Require(8);
    if (std::memcmp(bytes_.data() + offset_, magic, 8) != 0) {
      throw FormatError(path_.string() + ": bad magic");
    }
    offset_ += 8;
  }
  std::uint32_t U32() {
    Require(4);
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
      value |= static_cast<std::uint32_t>(bytes_[offset_ + i]) << (8 * i);
    }
    offset_ += 4;
    return value;
  }
  float F32() { return std::bit_cast<float>(U32()); }
  // The remaining payload must be exactly `count` float32 values.
  void ExpectPayloadFloats(std::uint64_t count) {
    if (bytes_.size() - offset_ != count * 4) {
      throw FormatError(path_.string() + ": payload size " +
                        std::to_string(bytes_.size() - offset_) +
                        " bytes does not match header (" +
                        std::to_string(count * 4) + " expected)");
    }
  }

 private:
  void Require(std::size_t count) const {
    if (bytes_.size() - offset_ < count) {
      throw FormatError(path_.string() + ": truncated header");
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  const fs::path& path_;
  std::size_t offset_ = 0;
};

json MatrixToJson(const Eigen::Matrix4d& m) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) {
    rows.push_back({m(r, 0), m(r, 1), m(r, 2), m(r, 3)});
  }
  return rows;
}

geometry::RigidTransform TransformFromJson(const json& rows) {
  if (!rows.is_array() || rows.size() != 4) {
    throw FormatError("transform must be a 4x4 array");
  }
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    if (!rows[r].is_array() || rows[r].size() != 4) {
      throw FormatError("transform must be a 4x4 array");
    }
    for (int c = 0; c < 4; ++c) m(r, c) = rows[r][c].get<double>();
  }
  return geometry::RigidTransform::FromMatrix(m);
}

// Reads one whitespace-separated header token of a PNM file, skipping
// comments.
std::string PnmToken(const std::vector<std::uint8_t>& bytes, std::size_t& pos,
                     const fs::path& path) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  std::string token;
  while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') {
    token.push_back(static_cast<char>(bytes[pos++]));
  }
  if (token.empty()) throw FormatError(path.string() + ": truncated header");
  return token;
}

int PnmNumber(const std::string& token, const fs::path& path) {
  if (token.empty() || token.size() > 9 ||
      token.find_first_not_of("0123456789") != std::string::npos) {
    throw FormatError(path.string() + ": bad header value '" + token + "'");
  }
  return std::stoi(token);
}

struct PnmPayload {
  int width;
  int height;
  const std::uint8_t* data;
};

PnmPayload ParsePnm(const std::vector<std::uint8_t>& bytes,
                    const std::string& expected_magic, int channels,
                    const fs::path& path) {
  std::size_t pos = 0;
  if (PnmToken(bytes, pos, path) != expected_magic) {
    throw FormatError(path.string() + ": unsupported header (expected " +
                      expected_magic + ")");
  }
  const int width = PnmNumber(PnmToken(bytes, pos, path), path);
  const int height = PnmNumber(PnmToken(bytes, pos, path), path);
  const int maxval = PnmNumber(PnmToken(bytes, pos, path), path);
  if (width <= 0 || height <= 0) {
    throw FormatError(path.string() + ": image size must be positive");
  }
  if (maxval != 255) {
    throw FormatError(path.string() + ": unsupported maxval " +
                      std::to_string(maxval));
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw FormatError(path.string() + ": truncated header");
  }
  ++pos;
  const std::size_t expected =
      static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - pos != expected) {
    throw FormatError(path.string() + ": pixel payload has " +
                      std::to_string(bytes.size() - pos) + " bytes, expected " +
                      std::to_string(expected));
  }
  return {width, height, bytes.data() + pos};
}

std::vector<std::uint8_t> PnmHeader(const std::string& magic, int width,
                                    int height) {
  const std::string header = magic + "\n" + std::to_string(width) + " " +
                             std::to_string(height) + "\n255\n";
  return std::vector<std::uint8_t>(header.begin(), header.end());
}

json Vec3ToJson(const geometry::Vec3& v) { return {v.x(), v.y(), v.z()}; }

geometry::Vec3 Vec3FromJson(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::string CameraStem(int camera) { return "camera_" + std::to_string(camera); }

}  // namespace

geometry::CameraRig ParseCalibration(const std::string& json_text) {
  try {
    const json root = json::parse(json_text);
    geometry::CameraRig rig;
    rig.lidar_from_vehicle =
        TransformFromJson(root.at("lidar").at("lidar_from_vehicle"));
    for (const json& entry : root.at("cameras")) {
      geometry::Camera camera;
      camera.intrinsics.width = entry.at("width").get<int>();
      camera.intrinsics.height = entry.at("height").get<int>();
      camera.intrinsics.fx = entry.at("fx").get<double>();
      camera.intrinsics.fy = entry.at("fy").get<double>();
      camera.intrinsics.cx = entry.at("cx").get<double>();
      camera.intrinsics.cy = entry.at("cy").get<double>();
      camera.camera_from_vehicle =
          TransformFromJson(entry.at("camera_from_vehicle"));
      rig.cameras.push_back(camera);
    }
    rig.Validate();
    return rig;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed calibration: ") + e.what());
  }
}

std::string FormatCalibration(const geometry::CameraRig& rig) {
  json root;
  root["format"] = "lapt-calibration/1";
  root["frames"] = {
      {"vehicle", "+x forward, +y left, +z up; origin at the grid centre"},
      {"camera", "+z forward along the optical axis, +x right, +y down"},
      {"lidar_from_vehicle",
       "4x4 homogeneous matrix mapping vehicle-frame points into the LiDAR "
       "frame"},
      {"camera_from_vehicle",
       "4x4 homogeneous matrix mapping vehicle-frame points into the camera "
       "frame"},
  };
  root["lidar"] = {{"lidar_from_vehicle",
                    MatrixToJson(rig.lidar_from_vehicle.matrix())}};
  json cameras = json::array();
  for (const geometry::Camera& camera : rig.cameras) {
    const geometry::CameraIntrinsics& k = camera.intrinsics;
    cameras.push_back({{"width", k.width},
                       {"height", k.height},
                       {"fx", k.fx},
                       {"fy", k.fy},
                       {"cx", k.cx},
                       {"cy", k.cy},
                       {"camera_from_vehicle",
                        MatrixToJson(camera.camera_from_vehicle.matrix())}});
  }
  root["cameras"] = std::move(cameras);
  return root.dump(2) + "\n";
}

geometry::CameraRig ReadCalibration(const fs::path& path) {
  try {
    return ParseCalibration(ReadFileText(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void WriteCalibration(const fs::path& path, const geometry::CameraRig& rig) {
  WriteFileText(path, FormatCalibration(rig));
}

std::vector<geometry::Vec3> ReadCloud(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  ByteReader reader(bytes, path);
  reader.ExpectMagic(kCloudMagic);
  const std::uint32_t count = reader.U32();
  reader.ExpectPayloadFloats(3ull * count);
  std::vector<geometry::Vec3> cloud(count);
  for (geometry::Vec3& point : cloud) {
    const float x = reader.F32();
    const float y = reader.F32();
    const float z = reader.F32();
    point = geometry::Vec3(x, y, z);
  }
  return cloud;
}

void WriteCloud(const fs::path& path, const std::vector<geometry::Vec3>& cloud) {
  ByteWriter writer;
  writer.Magic(kCloudMagic);
  writer.U32(static_cast<std::uint32_t>(cloud.size()));
  for (const geometry::Vec3& point : cloud) {
    writer.F32(point.x());
    writer.F32(point.y());
    writer.F32(point.z());
  }
  WriteFileBytes(path, writer.Take());
}

bev::BevGrid ReadGrid(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  ByteReader reader(bytes, path);
  reader.ExpectMagic(kGridMagic);
  const std::uint32_t channels = reader.U32();
  const std::uint32_t cells_x = reader.U32();
  const std::uint32_t cells_y = reader.U32();
  const float resolution = reader.F32();
  const float x_extent = reader.F32();
  const float y_extent = reader.F32();
  const float z_min = reader.F32();
  const float z_max = reader.F32();
  // float32 cannot hold resolutions such as 0.1 exactly; the double value is
  // recovered from the extent and the cell count.
  const double exact_resolution =
      cells_x == 0 ? 0. : static_cast<double>(x_extent) / cells_x;
  if (!(std::abs(exact_resolution - resolution) <= 1e-6 * resolution)) {
    throw FormatError(path.string() +
                      ": resolution disagrees with extent and cell count");
  }
  std::optional<bev::GridSpec> spec;
  try {
    spec.emplace(x_extent, y_extent, exact_resolution, z_min, z_max);
  } catch (const InvalidArgument& e) {
    throw FormatError(path.string() + ": bad grid geometry: " + e.what());
  }
  if (channels == 0 || static_cast<int>(cells_x) != spec->cells_x() ||
      static_cast<int>(cells_y) != spec->cells_y()) {
    throw FormatError(path.string() +
                      ": cell counts do not match extents/resolution");
  }
  reader.ExpectPayloadFloats(static_cast<std::uint64_t>(channels) * cells_x *
                             cells_y);
  bev::BevGrid grid(*spec, static_cast<int>(channels));
  for (double& value : grid.data()) value = reader.F32();
  return grid;
}

void WriteGrid(const fs::path& path, const bev::BevGrid& grid) {
  const bev::GridSpec& spec = grid.spec();
  ByteWriter writer;
  writer.Magic(kGridMagic);
  writer.U32(static_cast<std::uint32_t>(grid.channels()));
  writer.U32(static_cast<std::uint32_t>(spec.cells_x()));
  writer.U32(static_cast<std::uint32_t>(spec.cells_y()));
  writer.F32(spec.resolution());
  writer.F32(spec.x_extent());
  writer.F32(spec.y_extent());
  writer.F32(spec.z_min());
  writer.F32(spec.z_max());
  for (const double value : grid.data()) writer.F32(value);
  WriteFileBytes(path, writer.Take());
}

eval::SemanticGrid ReadSemanticGrid(const fs::path& path) {
  const bev::BevGrid grid = ReadGrid(path);
  eval::SemanticGrid semantic;
  semantic.spec = grid.spec();
  for (int c = 0; c < grid.channels(); ++c) {
    eval::BinaryMask mask(grid.cells_x(), grid.cells_y());
    for (int row = 0; row < grid.cells_y(); ++row) {
      for (int col = 0; col < grid.cells_x(); ++col) {
        const double value = grid.at(c, row, col);
        if (value != 0. && value != 1.) {
          throw FormatError(path.string() +
                            ": semantic grid cells must be 0 or 1");
        }
        mask.set(row, col, value == 1.);
      }
    }
    semantic.class_ids.push_back(c + 1);
    semantic.channels.push_back(std::move(mask));
  }
  return semantic;
}

void WriteSemanticGrid(const fs::path& path, const eval::SemanticGrid& grid) {
  if (grid.channels.empty()) {
    throw InvalidArgument("semantic grid has no channels");
  }
  for (std::size_t i = 0; i < grid.class_ids.size(); ++i) {
    if (grid.class_ids[i] != static_cast<int>(i) + 1) {
      throw InvalidArgument(
          "semantic grid files store classes 1..C in order");
    }
  }
  bev::BevGrid out(grid.spec, static_cast<int>(grid.channels.size()));
  for (int c = 0; c < out.channels(); ++c) {
    const eval::BinaryMask& mask = grid.channels[c];
    for (int row = 0; row < out.cells_y(); ++row) {
      for (int col = 0; col < out.cells_x(); ++col) {
        out.at(c, row, col) = mask.at(row, col) ? 1. : 0.;
      }
    }
  }
  WriteGrid(path, out);
}

depth::DepthImage ReadDepthImage(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  ByteReader reader(bytes, path);
  reader.ExpectMagic(kDepthMagic);
  const std::uint32_t channels = reader.U32();
  const std::uint32_t width = reader.U32();
  const std::uint32_t height = reader.U32();
  if (channels != 1 || width == 0 || height == 0 || width > (1u << 20) ||
      height > (1u << 20)) {
    throw FormatError(path.string() + ": bad depth image header");
  }
  reader.ExpectPayloadFloats(static_cast<std::uint64_t>(width) * height);
  depth::DepthImage image(static_cast<int>(width), static_cast<int>(height));
  for (int v = 0; v < image.height(); ++v) {
    for (int u = 0; u < image.width(); ++u) {
      const float value = reader.F32();
      if (std::isinf(value) && value > 0.f) continue;
      if (!(value > 0.f) || !std::isfinite(value)) {
        throw FormatError(path.string() + ": invalid depth value");
      }
      image.KeepNearest(u, v, value);
    }
  }
  return image;
}

void WriteDepthImage(const fs::path& path, const depth::DepthImage& image) {
  ByteWriter writer;
  writer.Magic(kDepthMagic);
  writer.U32(1);
  writer.U32(static_cast<std::uint32_t>(image.width()));
  writer.U32(static_cast<std::uint32_t>(image.height()));
  for (int v = 0; v < image.height(); ++v) {
    for (int u = 0; u < image.width(); ++u) {
      writer.F32(image.has(u, v) ? image.value(u, v)
                                 : std::numeric_limits<double>::infinity());
    }
  }
  WriteFileBytes(path, writer.Take());
}

features::FeatureMap ReadFeatureMap(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  ByteReader reader(bytes, path);
  reader.ExpectMagic(kFeatureMagic);
  const std::uint32_t channels = reader.U32();
  const std::uint32_t height = reader.U32();
  const std::uint32_t width = reader.U32();
  const std::uint32_t factor = reader.U32();
  const std::uint32_t camera = reader.U32();
  if (channels == 0 || height == 0 || width == 0 || factor == 0 ||
      channels > (1u << 16) || height > (1u << 16) || width > (1u << 16)) {
    throw FormatError(path.string() + ": bad feature map header");
  }
  reader.ExpectPayloadFloats(static_cast<std::uint64_t>(channels) * height *
                             width);
  features::FeatureMap map(static_cast<int>(channels), static_cast<int>(height),
                           static_cast<int>(width), static_cast<int>(factor),
                           static_cast<int>(camera));
  for (double& value : map.data) {
    value = reader.F32();
    if (!std::isfinite(value)) {
      throw FormatError(path.string() + ": non-finite feature value");
    }
  }
  return map;
}

void WriteFeatureMap(const fs::path& path, const features::FeatureMap& map) {
  ByteWriter writer;
  writer.Magic(kFeatureMagic);
  writer.U32(static_cast<std::uint32_t>(map.channels));
  writer.U32(static_cast<std::uint32_t>(map.height));
  writer.U32(static_cast<std::uint32_t>(map.width));
  writer.U32(static_cast<std::uint32_t>(map.factor));
  writer.U32(static_cast<std::uint32_t>(map.camera));
  for (const double value : map.data) writer.F32(value);
  WriteFileBytes(path, writer.Take());
}

features::Image ReadImage(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  const PnmPayload payload = ParsePnm(bytes, "P6", 3, path);
  features::Image image(payload.width, payload.height);
  for (int row = 0; row < image.height; ++row) {
    for (int col = 0; col < image.width; ++col) {
      const std::uint8_t* pixel =
          payload.data + 3 * (static_cast<std::size_t>(row) * image.width + col);
      for (int c = 0; c < 3; ++c) image.at(c, row, col) = pixel[c] / 255.;
    }
  }
  return image;
}

void WriteImage(const fs::path& path, const features::Image& image) {
  std::vector<std::uint8_t> bytes = PnmHeader("P6", image.width, image.height);
  for (int row = 0; row < image.height; ++row) {
    for (int col = 0; col < image.width; ++col) {
      for (int c = 0; c < 3; ++c) {
        const double value = std::clamp(image.at(c, row, col), 0., 1.);
        bytes.push_back(static_cast<std::uint8_t>(std::lround(value * 255.)));
      }
    }
  }
  WriteFileBytes(path, bytes);
}

features::SemanticImage ReadSemanticImage(const fs::path& path) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  const PnmPayload payload = ParsePnm(bytes, "P5", 1, path);
  features::SemanticImage image(payload.width, payload.height);
  std::copy(payload.data, payload.data + image.labels.size(),
            image.labels.begin());
  return image;
}

void WriteSemanticImage(const fs::path& path,
                        const features::SemanticImage& image) {
  std::vector<std::uint8_t> bytes = PnmHeader("P5", image.width, image.height);
  bytes.insert(bytes.end(), image.labels.begin(), image.labels.end());
  WriteFileBytes(path, bytes);
}

sim::Scene ReadAnnotations(const fs::path& path) {
  try {
    const json root = json::parse(ReadFileText(path));
    sim::Scene scene;
    scene.seed = root.value("seed", std::uint64_t{0});
    scene.ground_plane = root.value("ground_plane", true);
    for (const json& entry : root.at("cuboids")) {
      eval::Cuboid box;
      box.center = Vec3FromJson(entry.at("center"));
      box.size = Vec3FromJson(entry.at("size"));
      box.yaw = entry.at("yaw").get<double>();
      box.class_id = entry.at("class_id").get<int>();
      box.Validate();
      scene.objects.push_back(box);
    }
    for (const json& entry : root.at("polygons")) {
      eval::Polygon2D polygon;
      polygon.class_id = entry.at("class_id").get<int>();
      for (const json& vertex : entry.at("vertices")) {
        if (!vertex.is_array() || vertex.size() != 2) {
          throw FormatError("polygon vertex must be [x, y]");
        }
        polygon.vertices.emplace_back(vertex[0].get<double>(),
                                      vertex[1].get<double>());
      }
      polygon.Validate();
      scene.ground_regions.push_back(std::move(polygon));
    }
    return scene;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": malformed annotations: " + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void WriteAnnotations(const fs::path& path, const sim::Scene& scene) {
  json root;
  root["format"] = "lapt-annotations/1";
  root["seed"] = scene.seed;
  root["ground_plane"] = scene.ground_plane;
  json classes = json::object();
  for (const int id : sim::AllClassIds()) {
    classes[std::to_string(id)] = sim::ClassName(id);
  }
  root["classes"] = std::move(classes);
  json cuboids = json::array();
  for (const eval::Cuboid& box : scene.objects) {
    cuboids.push_back({{"center", Vec3ToJson(box.center)},
                       {"size", Vec3ToJson(box.size)},
                       {"yaw", box.yaw},
                       {"class_id", box.class_id}});
  }
  root["cuboids"] = std::move(cuboids);
  json polygons = json::array();
  for (const eval::Polygon2D& polygon : scene.ground_regions) {
    json vertices = json::array();
    for (const Eigen::Vector2d& v : polygon.vertices) {
      vertices.push_back({v.x(), v.y()});
    }
    polygons.push_back(
        {{"class_id", polygon.class_id}, {"vertices", std::move(vertices)}});
  }
  root["polygons"] = std::move(polygons);
  WriteFileText(path, root.dump(2) + "\n");
}

void Sample::Validate() const {
  rig.Validate();
  const std::size_t cameras = rig.cameras.size();
  if (images.size() != cameras) {
    throw InvalidArgument("sample has " + std::to_string(images.size()) +
                          " images for " + std::to_string(cameras) +
                          " calibrated cameras");
  }
  for (std::size_t k = 0; k < cameras; ++k) {
    const geometry::CameraIntrinsics& intrinsics = rig.cameras[k].intrinsics;
    if (images[k].width != intrinsics.width ||
        images[k].height != intrinsics.height) {
      throw InvalidArgument("image " + std::to_string(k) +
                            " size disagrees with its calibration");
    }
    if (!semantic_images.empty() &&
        (semantic_images.size() != cameras ||
         semantic_images[k].width != intrinsics.width ||
         semantic_images[k].height != intrinsics.height)) {
      throw InvalidArgument("semantic image " + std::to_string(k) +
                            " disagrees with its calibration");
    }
  }
  if (!exact_depth.empty() && exact_depth.size() != cameras) {
    throw InvalidArgument("exact depth count disagrees with the camera count");
  }
  if (!features.empty()) {
    if (features.size() != cameras) {
      throw InvalidArgument("feature pyramid count disagrees with the rig");
    }
    for (std::size_t k = 0; k < cameras; ++k) {
      features[k].Validate(rig.cameras[k].intrinsics.width,
                           rig.cameras[k].intrinsics.height);
    }
  }
}

fs::path CameraImagePath(const fs::path& dir, int camera) {
  return dir / (CameraStem(camera) + ".ppm");
}
fs::path SemanticImagePath(const fs::path& dir, int camera) {
  return dir / (CameraStem(camera) + "_semantic.pgm");
}
fs::path ExactDepthPath(const fs::path& dir, int camera) {
  return dir / (CameraStem(camera) + "_depth.bin");
}
fs::path FeatureMapPath(const fs::path& dir, int camera, int factor) {
  return dir / "features" /
         (CameraStem(camera) + "_f" + std::to_string(factor) + ".bin");
}
fs::path GroundTruthPath(const fs::path& dir) {
  return dir / "gt" / "semantic.grid";
}

Sample ReadSample(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("sample directory " + dir.string() + " does not exist");
  }
  Sample sample;
  sample.rig = ReadCalibration(dir / "calibration.json");
  sample.cloud = ReadCloud(dir / "cloud.bin");
  const int cameras = static_cast<int>(sample.rig.cameras.size());
  for (int k = 0; k < cameras; ++k) {
    sample.images.push_back(ReadImage(CameraImagePath(dir, k)));
  }
  if (fs::exists(SemanticImagePath(dir, 0))) {
    for (int k = 0; k < cameras; ++k) {
      sample.semantic_images.push_back(
          ReadSemanticImage(SemanticImagePath(dir, k)));
    }
  }
  if (fs::exists(ExactDepthPath(dir, 0))) {
    for (int k = 0; k < cameras; ++k) {
      sample.exact_depth.push_back(ReadDepthImage(ExactDepthPath(dir, k)));
    }
  }
  if (fs::is_directory(dir / "features")) {
    for (int k = 0; k < cameras; ++k) {
      features::FeaturePyramid pyramid;
      for (int factor = 1; factor <= 64; ++factor) {
        const fs::path path = FeatureMapPath(dir, k, factor);
        if (fs::exists(path)) pyramid.levels.push_back(ReadFeatureMap(path));
      }
      if (pyramid.levels.empty()) {
        throw IoError("no feature maps for camera " + std::to_string(k) +
                      " in " + (dir / "features").string());
      }
      sample.features.push_back(std::move(pyramid));
    }
  }
  if (fs::exists(dir / "annotations.json")) {
    sample.annotations = ReadAnnotations(dir / "annotations.json");
  }
  if (fs::exists(GroundTruthPath(dir))) {
    sample.ground_truth = ReadSemanticGrid(GroundTruthPath(dir));
  }
  sample.Validate();
  return sample;
}

void WriteSample(const fs::path& dir, const Sample& sample) {
  sample.Validate();
  std::error_code error;
  fs::create_directories(dir, error);
  if (error || !fs::is_directory(dir)) {
    throw IoError("cannot create sample directory " + dir.string());
  }
  WriteCalibration(dir / "calibration.json", sample.rig);
  WriteCloud(dir / "cloud.bin", sample.cloud);
  for (std::size_t k = 0; k < sample.images.size(); ++k) {
    WriteImage(CameraImagePath(dir, static_cast<int>(k)), sample.images[k]);
  }
  for (std::size_t k = 0; k < sample.semantic_images.size(); ++k) {
    WriteSemanticImage(SemanticImagePath(dir, static_cast<int>(k)),
                       sample.semantic_images[k]);
  }
  for (std::size_t k = 0; k < sample.exact_depth.size(); ++k) {
    WriteDepthImage(ExactDepthPath(dir, static_cast<int>(k)),
                    sample.exact_depth[k]);
  }
  if (!sample.features.empty()) {
    fs::create_directories(dir / "features", error);
    if (error) throw IoError("cannot create " + (dir / "features").string());
    for (std::size_t k = 0; k < sample.features.size(); ++k) {
      for (const features::FeatureMap& level : sample.features[k].levels) {
        WriteFeatureMap(FeatureMapPath(dir, static_cast<int>(k), level.factor),
                        level);
      }
    }
  }
  if (sample.annotations) {
    WriteAnnotations(dir / "annotations.json", *sample.annotations);
  }
  if (sample.ground_truth) {
    fs::create_directories(dir / "gt", error);
    if (error) throw IoError("cannot create " + (dir / "gt").string());
    WriteSemanticGrid(GroundTruthPath(dir), *sample.ground_truth);
  }
}

}  // namespace io
}  // namespace lapt
