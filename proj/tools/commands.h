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

#ifndef LAPT_TOOLS_COMMANDS_H_
#define LAPT_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lapt/io.h"
#include "lapt/pipeline.h"

namespace lapt {
namespace cli {

namespace fs = std::filesystem;

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

struct GridOptions {
  double extent = bev::GridSpec::kDefaultExtent;
  double resolution = bev::GridSpec::kDefaultResolution;
  double z_min = bev::GridSpec::kDefaultZMin;
  double z_max = bev::GridSpec::kDefaultZMax;

  bev::GridSpec Spec() const;
};

struct RigOptions {
  int width = 352;
  int height = 128;
  fs::path out;
};

struct SimulateOptions {
  std::uint64_t seed = 0;
  int vehicles = 12;
  int humans = 10;
  int movables = 8;
  std::optional<fs::path> rig;  // default rig when unset
  int rings = 32;
  double min_elevation = -30.67;
  double max_elevation = 10.67;
  int azimuth_steps = 1084;
  double max_range = 70.;
  GridOptions grid;
  fs::path out;
};

struct ProjectOptions {
  fs::path sample;
  fs::path out;
  std::vector<int> scales{8, 16};
};

enum class FeatureSource { kAuto, kSemantic, kRgb, kFile };

FeatureSource ParseFeatureSource(const std::string& name);

struct PipelineOptions {
  fs::path sample;
  fs::path out;
  std::vector<int> scales{8, 16};
  std::string fusion = "sum";
  bool ms_b = false;
  bool lidar_bev = false;
  double threshold = 0.5;
  std::string features = "auto";
  // Number of leading BEV channels binarized into the semantic grid as class
  // ids 1..classes. -1 picks the feature source's default.
  int classes = -1;
  int workers = 0;
  GridOptions grid;
};

struct EvalOptions {
  fs::path pred;
  fs::path gt;
  std::optional<fs::path> jsonl;
};

struct BenchOptions {
  PipelineOptions pipeline;
  int iterations = 20;
  int warmup = 2;
  std::optional<fs::path> jsonl;
};

// Parses "8,16" into {8, 16}. Throws InvalidArgument on malformed input.
std::vector<int> ParseScales(const std::string& text);

// Crops images (and semantic images) at the right and bottom so both sides
// are multiples of `multiple`, updating the calibrated sizes. Cropping keeps
// the top-left origin, so fx, fy, cx, cy are unchanged. Returns true if
// anything was cropped.
bool CropToMultiple(io::Sample& sample, int multiple);

// Everything cmd_pipeline derives from a sample before running.
struct PreparedRun {
  io::Sample sample;
  std::unique_ptr<features::FeatureProvider> provider;
  pipeline::PipelineConfig config;
  bool cropped = false;
};
PreparedRun PrepareRun(const PipelineOptions& options);

// Deterministic JSON summary of a run (no timings).
std::string FormatSummary(const PreparedRun& run,
                          const pipeline::PipelineResult& result);

// Nearest-rank percentile of an unsorted sample, p in (0, 100].
double Percentile(std::vector<double> values, double p);

// Subcommands write human-readable output to `out`. They throw lapt::Error
// subclasses on failure; RunMain-style wrappers map them to exit codes.
void CmdRig(const RigOptions& options, std::ostream& out);
void CmdSimulate(const SimulateOptions& options, std::ostream& out);
void CmdProject(const ProjectOptions& options, std::ostream& out);
void CmdPipeline(const PipelineOptions& options, std::ostream& out);
void CmdEval(const EvalOptions& options, std::ostream& out);
void CmdBench(const BenchOptions& options, std::ostream& out);

// Parses argv, dispatches and returns the process exit code. Errors go to
// `err`.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace cli
}  // namespace lapt

#endif  // LAPT_TOOLS_COMMANDS_H_
