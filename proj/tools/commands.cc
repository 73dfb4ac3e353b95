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

#include "commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lapt/errors.h"
#include "lapt/sim.h"

namespace lapt {
namespace cli {
namespace {

using nlohmann::json;

void EnsureDirectory(const fs::path& dir) {
  std::error_code error;
  fs::create_directories(dir, error);
  if (error || !fs::is_directory(dir)) {
    throw IoError("cannot create directory " + dir.string());
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  file << text;
  if (!file) throw IoError("cannot write " + path.string());
}

// A prediction or ground-truth argument may name a grid file or a directory
// holding one.
fs::path ResolveGridPath(const fs::path& path, bool ground_truth) {
  if (!fs::is_directory(path)) return path;
  if (ground_truth && fs::exists(io::GroundTruthPath(path))) {
    return io::GroundTruthPath(path);
  }
  return path / "semantic.grid";
}

std::string FormatFixed(double value, int digits) {
  std::ostringstream stream;
  stream << std::fixed << std::setprecision(digits) << value;
  return stream.str();
}

void AddGridOptions(CLI::App* command, GridOptions& grid) {
  command->add_option("--extent", grid.extent, "grid side length in meters")
      ->check(CLI::PositiveNumber);
  command->add_option("--resolution", grid.resolution, "cell size in meters")
      ->check(CLI::PositiveNumber);
  command->add_option("--z-min", grid.z_min, "lower slab bound in meters");
  command->add_option("--z-max", grid.z_max, "upper slab bound in meters");
}

void AddPipelineOptions(CLI::App* command, PipelineOptions& options,
                        std::string& scales) {
  command->add_option("--sample", options.sample, "sample directory")
      ->required();
  command->add_option("--scales", scales, "comma-separated feature factors")
      ->default_val("8,16");
  command->add_option("--fusion", options.fusion, "sum, concat or maxpool")
      ->check(CLI::IsMember({"sum", "concat", "maxpool"}));
  command->add_flag("--ms-b", options.ms_b,
                    "splat the coarsest scale into a half-resolution grid");
  command->add_flag("--lidar-bev", options.lidar_bev,
                    "fuse a LiDAR occupancy grid");
  command->add_option("--threshold", options.threshold,
                      "binarization threshold");
  command->add_option("--features", options.features,
                      "auto, semantic, rgb or file")
      ->check(CLI::IsMember({"auto", "semantic", "rgb", "file"}));
  command->add_option("--classes", options.classes,
                      "binarized channels (default depends on --features)");
  command->add_option("--workers", options.workers,
                      "worker threads (0: environment or hardware)")
      ->check(CLI::NonNegativeNumber);
  AddGridOptions(command, options.grid);
}

}  // namespace

bev::GridSpec GridOptions::Spec() const {
  return bev::GridSpec(extent, extent, resolution, z_min, z_max);
}

FeatureSource ParseFeatureSource(const std::string& name) {
  if (name == "auto") return FeatureSource::kAuto;
  if (name == "semantic") return FeatureSource::kSemantic;
  if (name == "rgb") return FeatureSource::kRgb;
  if (name == "file") return FeatureSource::kFile;
  throw InvalidArgument("unknown feature source '" + name + "'");
}

std::vector<int> ParseScales(const std::string& text) {
  std::vector<int> scales;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("malformed scale list '" + text + "'");
    }
    if (used != item.size()) {
      throw InvalidArgument("malformed scale list '" + text + "'");
    }
    scales.push_back(value);
  }
  if (scales.empty()) throw InvalidArgument("empty scale list");
  return scales;
}

bool CropToMultiple(io::Sample& sample, int multiple) {
  if (multiple < 1) throw InvalidArgument("crop multiple must be positive");
  bool cropped = false;
  for (std::size_t k = 0; k < sample.rig.cameras.size(); ++k) {
    geometry::CameraIntrinsics& intrinsics = sample.rig.cameras[k].intrinsics;
    const int width = intrinsics.width / multiple * multiple;
    const int height = intrinsics.height / multiple * multiple;
    if (width == 0 || height == 0) {
      throw InvalidArgument("camera " + std::to_string(k) +
                            " is smaller than one feature block");
    }
    if (width == intrinsics.width && height == intrinsics.height) continue;
    cropped = true;
    features::Image image(width, height);
    for (int c = 0; c < 3; ++c) {
      for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
          image.at(c, row, col) = sample.images[k].at(c, row, col);
        }
      }
    }
    sample.images[k] = std::move(image);
    if (!sample.semantic_images.empty()) {
      features::SemanticImage semantic(width, height);
      for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
          semantic.at(row, col) = sample.semantic_images[k].at(row, col);
        }
      }
      sample.semantic_images[k] = std::move(semantic);
    }
    intrinsics.width = width;
    intrinsics.height = height;
  }
  if (cropped) {
    sample.exact_depth.clear();
    sample.features.clear();
  }
  return cropped;
}

PreparedRun PrepareRun(const PipelineOptions& options) {
  PreparedRun run;
  run.config.scales = options.scales;
  run.config.grid = options.grid.Spec();
  run.config.coarse_bev = options.ms_b;
  run.config.lidar_bev = options.lidar_bev;
  run.config.fusion = bev::ParseFusionMethod(options.fusion);
  run.config.threshold = options.threshold;
  run.config.workers = options.workers;
  pipeline::ValidateConfig(run.config);

  run.sample = io::ReadSample(options.sample);
  FeatureSource source = ParseFeatureSource(options.features);
  if (source == FeatureSource::kAuto) {
    source = !run.sample.features.empty()          ? FeatureSource::kFile
             : !run.sample.semantic_images.empty() ? FeatureSource::kSemantic
                                                   : FeatureSource::kRgb;
  }
  if (source != FeatureSource::kFile) {
    run.cropped = CropToMultiple(run.sample, run.config.scales.back());
  }

  int default_classes = 0;
  switch (source) {
    case FeatureSource::kSemantic:
      if (run.sample.semantic_images.empty()) {
        throw InvalidArgument("sample has no semantic images");
      }
      run.provider = std::make_unique<features::SemanticFeatureProvider>(
          run.sample.semantic_images, sim::kNumClasses);
      default_classes = sim::kNumClasses;
      break;
    case FeatureSource::kRgb:
      run.provider =
          std::make_unique<features::RgbFeatureProvider>(run.sample.images);
      break;
    case FeatureSource::kFile:
      if (run.sample.features.empty()) {
        throw InvalidArgument("sample has no feature maps");
      }
      run.provider = std::make_unique<features::PrecomputedFeatureProvider>(
          run.sample.features);
      default_classes = run.provider->channels();
      break;
    case FeatureSource::kAuto:
      break;
  }
  const int classes = options.classes < 0 ? default_classes : options.classes;
  for (int id = 1; id <= classes; ++id) run.config.class_ids.push_back(id);
  return run;
}

std::string FormatSummary(const PreparedRun& run,
                          const pipeline::PipelineResult& result) {
  const bev::GridSpec& spec = run.config.grid;
  json summary;
  summary["scales"] = run.config.scales;
  summary["ms_b"] = run.config.coarse_bev;
  summary["lidar_bev"] = run.config.lidar_bev;
  summary["fusion"] = std::string(bev::FusionMethodName(run.config.fusion));
  summary["threshold"] = run.config.threshold;
  summary["cropped"] = run.cropped;
  summary["grid"] = {{"cells_x", spec.cells_x()},
                     {"cells_y", spec.cells_y()},
                     {"resolution", spec.resolution()},
                     {"x_extent", spec.x_extent()},
                     {"y_extent", spec.y_extent()},
                     {"z_min", spec.z_min()},
                     {"z_max", spec.z_max()}};
  summary["cloud_points"] = run.sample.cloud.size();
  json cameras = json::array();
  for (const depth::DepthImage& image : result.depth_images) {
    cameras.push_back({{"depth_pixels", image.occupancy_count()}});
  }
  summary["cameras"] = cameras;
  json scales = json::array();
  for (std::size_t s = 0; s < result.scale_bevs.size(); ++s) {
    scales.push_back({{"factor", run.config.scales[s]},
                      {"splatted_pixels", result.splatted_pixels[s]},
                      {"nonzero_cells", result.scale_bevs[s].NonZeroCells()}});
  }
  summary["per_scale"] = scales;
  summary["camera_bev_nonzero_cells"] = result.camera_bev.NonZeroCells();
  summary["fused_channels"] = result.fused_bev.channels();
  if (result.semantic) {
    json classes = json::array();
    for (std::size_t i = 0; i < result.semantic->class_ids.size(); ++i) {
      classes.push_back({{"class_id", result.semantic->class_ids[i]},
                         {"positive_cells",
                          result.semantic->channels[i].Count()}});
    }
    summary["classes"] = classes;
  }
  return summary.dump(2) + "\n";
}

double Percentile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("percentile of an empty sample");
  if (!(p > 0. && p <= 100.)) {
    throw InvalidArgument("percentile must be in (0, 100]");
  }
  std::sort(values.begin(), values.end());
  const auto rank =
      static_cast<std::size_t>(std::ceil(p / 100. * values.size()));
  return values[std::max<std::size_t>(rank, 1) - 1];
}

void CmdRig(const RigOptions& options, std::ostream& out) {
  const geometry::CameraRig rig = sim::DefaultRig(options.width, options.height);
  if (options.out.has_parent_path()) EnsureDirectory(options.out.parent_path());
  io::WriteCalibration(options.out, rig);
  out << "wrote " << rig.cameras.size() << "-camera rig to "
      << options.out.string() << "\n";
}

void CmdSimulate(const SimulateOptions& options, std::ostream& out) {
  const bev::GridSpec spec = options.grid.Spec();
  const geometry::CameraRig rig =
      options.rig ? io::ReadCalibration(*options.rig) : sim::DefaultRig();
  rig.Validate();
  sim::SceneParams params;
  params.vehicles = options.vehicles;
  params.humans = options.humans;
  params.movable_objects = options.movables;
  if (params.vehicles < 0 || params.humans < 0 || params.movable_objects < 0) {
    throw InvalidArgument("object counts must be non-negative");
  }
  const sim::LidarPattern pattern = sim::LidarPattern::Uniform(
      options.rings, options.min_elevation, options.max_elevation,
      options.azimuth_steps, options.max_range);
  pattern.Validate();

  const sim::Scene scene = sim::GenerateScene(options.seed, params);
  io::Sample sample;
  sample.rig = rig;
  sample.cloud = sim::SampleLidar(scene, pattern, rig.lidar_from_vehicle);
  for (sim::RenderedView& view : sim::RenderViews(scene, rig)) {
    sample.images.push_back(std::move(view.rgb));
    sample.semantic_images.push_back(std::move(view.semantic));
    sample.exact_depth.push_back(std::move(view.depth));
  }
  sample.annotations = scene;
  sample.ground_truth = sim::AnalyticBev(scene, spec, sim::AllClassIds());
  io::WriteSample(options.out, sample);
  out << "seed " << options.seed << ": " << scene.objects.size()
      << " objects, " << sample.cloud.size() << " LiDAR points, "
      << rig.cameras.size() << " cameras -> " << options.out.string() << "\n";
}

void CmdProject(const ProjectOptions& options, std::ostream& out) {
  const io::Sample sample = io::ReadSample(options.sample);
  EnsureDirectory(options.out);
  for (std::size_t k = 0; k < sample.rig.cameras.size(); ++k) {
    const pipeline::CameraDepth depth = pipeline::ComputeCameraDepth(
        sample.cloud, sample.rig.lidar_from_vehicle, sample.rig.cameras[k],
        options.scales);
    const std::string stem = "camera_" + std::to_string(k) + "_depth";
    io::WriteDepthImage(options.out / (stem + ".bin"), depth.full);
    out << "camera " << k << ": " << depth.full.occupancy_count()
        << " depth pixels";
    for (std::size_t s = 0; s < options.scales.size(); ++s) {
      io::WriteDepthImage(options.out / (stem + "_f" +
                                         std::to_string(options.scales[s]) +
                                         ".bin"),
                          depth.pooled[s]);
      out << ", f" << options.scales[s] << " " << depth.pooled[s].occupancy_count();
    }
    out << "\n";
  }
}

void CmdPipeline(const PipelineOptions& options, std::ostream& out) {
  const PreparedRun run = PrepareRun(options);
  const pipeline::PipelineResult result = pipeline::Run(
      run.sample.rig, run.sample.cloud, *run.provider, run.config);
  EnsureDirectory(options.out);
  io::WriteGrid(options.out / "bev.grid", result.fused_bev);
  if (result.semantic) {
    io::WriteSemanticGrid(options.out / "semantic.grid", *result.semantic);
  }
  WriteText(options.out / "summary.json", FormatSummary(run, result));
  double total = 0.;
  for (const pipeline::StageTiming& timing : result.timings) {
    out << std::left << std::setw(14) << timing.stage << std::right
        << FormatFixed(timing.milliseconds, 3) << " ms\n";
    total += timing.milliseconds;
  }
  out << std::left << std::setw(14) << "total" << std::right
      << FormatFixed(total, 3) << " ms\n";
}

void CmdEval(const EvalOptions& options, std::ostream& out) {
  const eval::SemanticGrid pred =
      io::ReadSemanticGrid(ResolveGridPath(options.pred, false));
  const eval::SemanticGrid gt =
      io::ReadSemanticGrid(ResolveGridPath(options.gt, true));
  if (!(pred.spec == gt.spec)) {
    throw InvalidArgument("prediction and ground truth grids differ");
  }
  std::ofstream jsonl;
  if (options.jsonl) {
    jsonl.open(*options.jsonl, std::ios::binary);
    if (!jsonl) throw IoError("cannot write " + options.jsonl->string());
  }
  out << std::left << std::setw(6) << "class" << std::setw(16) << "name"
      << std::right << std::setw(10) << "pred" << std::setw(10) << "gt"
      << std::setw(10) << "iou" << "\n";
  double sum = 0.;
  int evaluated = 0;
  for (std::size_t i = 0; i < pred.class_ids.size(); ++i) {
    const int id = pred.class_ids[i];
    if (std::find(gt.class_ids.begin(), gt.class_ids.end(), id) ==
        gt.class_ids.end()) {
      continue;
    }
    const eval::BinaryMask& p = pred.channels[i];
    const eval::BinaryMask& g = gt.Channel(id);
    const double iou = eval::Iou(p, g);
    sum += iou;
    ++evaluated;
    out << std::left << std::setw(6) << id << std::setw(16)
        << sim::ClassName(id) << std::right << std::setw(10) << p.Count()
        << std::setw(10) << g.Count() << std::setw(10) << FormatFixed(iou, 4)
        << "\n";
    if (jsonl.is_open()) {
      jsonl << json{{"class_id", id},
                    {"name", sim::ClassName(id)},
                    {"pred_cells", p.Count()},
                    {"gt_cells", g.Count()},
                    {"iou", iou}}
                   .dump()
            << "\n";
    }
  }
  if (evaluated == 0) throw InvalidArgument("no common classes to evaluate");
  out << std::left << std::setw(22) << "mean" << std::right << std::setw(30)
      << FormatFixed(sum / evaluated, 4) << "\n";
  if (jsonl.is_open()) {
    jsonl << json{{"class_id", "mean"}, {"iou", sum / evaluated}}.dump()
          << "\n";
    if (!jsonl) throw IoError("cannot write " + options.jsonl->string());
  }
}

void CmdBench(const BenchOptions& options, std::ostream& out) {
  if (options.iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (options.warmup < 0) throw InvalidArgument("warmup must be >= 0");
  const PreparedRun run = PrepareRun(options.pipeline);
  std::map<std::string, std::vector<double>> stages;
  std::vector<std::string> order;
  std::vector<double> totals;
  for (int i = 0; i < options.warmup + options.iterations; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const pipeline::PipelineResult result = pipeline::Run(
        run.sample.rig, run.sample.cloud, *run.provider, run.config);
    const double elapsed = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (i < options.warmup) continue;
    totals.push_back(elapsed);
    for (const pipeline::StageTiming& timing : result.timings) {
      if (!stages.count(timing.stage)) order.push_back(timing.stage);
      stages[timing.stage].push_back(timing.milliseconds);
    }
  }
  std::ofstream jsonl;
  if (options.jsonl) {
    jsonl.open(*options.jsonl, std::ios::binary);
    if (!jsonl) throw IoError("cannot write " + options.jsonl->string());
  }
  auto mean_of = [](const std::vector<double>& values) {
    double sum = 0.;
    for (const double v : values) sum += v;
    return sum / values.size();
  };
  out << std::left << std::setw(14) << "stage" << std::right << std::setw(10)
      << "p50 ms" << std::setw(10) << "p95 ms" << std::setw(10) << "mean ms"
      << "\n";
  auto report = [&](const std::string& name, const std::vector<double>& ms) {
    const double p50 = Percentile(ms, 50.);
    const double p95 = Percentile(ms, 95.);
    const double mean = mean_of(ms);
    out << std::left << std::setw(14) << name << std::right << std::setw(10)
        << FormatFixed(p50, 3) << std::setw(10) << FormatFixed(p95, 3)
        << std::setw(10) << FormatFixed(mean, 3) << "\n";
    if (jsonl.is_open()) {
      jsonl << json{{"stage", name},
                    {"samples", ms.size()},
                    {"p50_ms", p50},
                    {"p95_ms", p95},
                    {"mean_ms", mean}}
                   .dump()
            << "\n";
    }
  };
  for (const std::string& stage : order) report(stage, stages[stage]);
  report("total", totals);
  const double fps = 1000. / mean_of(totals);
  out << "iterations " << totals.size() << ", " << FormatFixed(fps, 2)
      << " samples/s\n";
  if (jsonl.is_open()) {
    jsonl << json{{"stage", "summary"},
                  {"iterations", totals.size()},
                  {"fps", fps}}
                 .dump()
          << "\n";
    if (!jsonl) throw IoError("cannot write " + options.jsonl->string());
  }
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"LiDAR-aided perspective transform to bird's-eye view"};
  app.require_subcommand(1);

  RigOptions rig;
  CLI::App* rig_cmd = app.add_subcommand("rig", "write the default camera rig");
  rig_cmd->add_option("--out", rig.out, "calibration JSON path")->required();
  rig_cmd->add_option("--width", rig.width, "image width")
      ->check(CLI::PositiveNumber);
  rig_cmd->add_option("--height", rig.height, "image height")
      ->check(CLI::PositiveNumber);

  SimulateOptions simulate;
  std::string simulate_rig;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "generate a synthetic sample directory");
  simulate_cmd->add_option("--seed", simulate.seed, "scene seed");
  simulate_cmd->add_option("--vehicles", simulate.vehicles);
  simulate_cmd->add_option("--humans", simulate.humans);
  simulate_cmd->add_option("--movables", simulate.movables);
  simulate_cmd->add_option("--rig", simulate_rig,
                           "calibration JSON (default rig if omitted)");
  simulate_cmd->add_option("--rings", simulate.rings, "LiDAR rings");
  simulate_cmd->add_option("--min-elevation", simulate.min_elevation,
                           "lowest ring elevation in degrees");
  simulate_cmd->add_option("--max-elevation", simulate.max_elevation,
                           "highest ring elevation in degrees");
  simulate_cmd->add_option("--azimuth-steps", simulate.azimuth_steps,
                           "LiDAR azimuth samples per revolution");
  simulate_cmd->add_option("--max-range", simulate.max_range,
                           "LiDAR range in meters");
  simulate_cmd->add_option("--out", simulate.out, "output directory")
      ->required();
  AddGridOptions(simulate_cmd, simulate.grid);

  ProjectOptions project;
  std::string project_scales;
  CLI::App* project_cmd = app.add_subcommand(
      "project", "write sparse and min-pooled depth images");
  project_cmd->add_option("--sample", project.sample, "sample directory")
      ->required();
  project_cmd->add_option("--out", project.out, "output directory")
      ->required();
  project_cmd->add_option("--scales", project_scales)->default_val("8,16");

  PipelineOptions pipeline_options;
  std::string pipeline_scales;
  CLI::App* pipeline_cmd =
      app.add_subcommand("pipeline", "run the BEV pipeline on a sample");
  AddPipelineOptions(pipeline_cmd, pipeline_options, pipeline_scales);
  pipeline_cmd->add_option("--out", pipeline_options.out, "output directory")
      ->required();

  EvalOptions eval_options;
  std::string eval_jsonl;
  CLI::App* eval_cmd = app.add_subcommand("eval", "per-class IoU");
  eval_cmd->add_option("--pred", eval_options.pred,
                       "predicted semantic grid or its directory")
      ->required();
  eval_cmd->add_option("--gt", eval_options.gt,
                       "ground-truth semantic grid or sample directory")
      ->required();
  eval_cmd->add_option("--jsonl", eval_jsonl, "line-delimited JSON output");

  BenchOptions bench;
  std::string bench_scales;
  std::string bench_jsonl;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "time the pipeline on a sample");
  AddPipelineOptions(bench_cmd, bench.pipeline, bench_scales);
  bench_cmd->add_option("--iterations", bench.iterations);
  bench_cmd->add_option("--warmup", bench.warmup);
  bench_cmd->add_option("--jsonl", bench_jsonl, "line-delimited JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& error) {
    err << "error: " << error.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*rig_cmd) {
      CmdRig(rig, out);
    } else if (*simulate_cmd) {
      if (!simulate_rig.empty()) simulate.rig = simulate_rig;
      CmdSimulate(simulate, out);
    } else if (*project_cmd) {
      project.scales = ParseScales(project_scales);
      CmdProject(project, out);
    } else if (*pipeline_cmd) {
      pipeline_options.scales = ParseScales(pipeline_scales);
      CmdPipeline(pipeline_options, out);
    } else if (*eval_cmd) {
      if (!eval_jsonl.empty()) eval_options.jsonl = eval_jsonl;
      CmdEval(eval_options, out);
    } else if (*bench_cmd) {
      bench.pipeline.scales = ParseScales(bench_scales);
      if (!bench_jsonl.empty()) bench.jsonl = bench_jsonl;
      CmdBench(bench, out);
    }
  } catch (const IoError& error) {
    err << "error: " << error.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& error) {
    err << "error: " << error.what() << "\n";
    return kExitIo;
  } catch (const Error& error) {
    err << "error: " << error.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace cli
}  // namespace lapt
