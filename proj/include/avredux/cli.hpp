/* Copyright 2026 The avredux Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef AVREDUX_CLI_HPP_
#define AVREDUX_CLI_HPP_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "avredux/ingest.hpp"
#include "avredux/multimodal.hpp"
#include "avredux/multisource.hpp"
#include "avredux/overlap.hpp"
#include "avredux/synth.hpp"

namespace avredux::cli {

inline constexpr const char* kOutputDirEnv = "AVREDUX_OUTPUT_DIR";

enum class Command { kAudit, kPrune, kSweep, kMm, kSim };
enum class OverlapMode { kPresetNuScenes, kCalibration };

std::string_view ToString(Command c);
std::string_view ToString(OverlapMode m);
OverlapMode ParseOverlapMode(std::string_view text);

struct RunConfig {
  Command command = Command::kAudit;
  std::filesystem::path dataset_path;
  std::filesystem::path output_dir = "avredux_out";
  std::optional<std::filesystem::path> images_dir;
  OverlapMode overlap_mode = OverlapMode::kCalibration;
  LabelSource label_source = LabelSource::kProjected3D;
  TauPolicy tau{0.5};
  std::vector<double> taus = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  double theta = kDefaultTheta;
  std::vector<double> t_dist = {0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  double min_overlap = kDefaultMinOverlapDeg;
  std::optional<double> rr_split;  // nullopt: median frame RR
  bool emit_plot_data = false;
  synth::SynthParams sim;

  // Throws ValidationError when a parameter is out of range.
  void Validate() const;
};

// One overlap graph per scene: the fixed preset, or arcs derived from each
// scene's calibration.
std::vector<OverlapGraph> ResolveGraphs(const Dataset& ds,
                                        const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Reports.

inline constexpr int kBcsBins = 20;

struct PairSummary {
  OverlapPair pair;
  std::size_t groups = 0;
  std::size_t similarity_samples = 0;
  std::optional<double> mean_similarity;
};

struct SceneOverlap {
  std::string scene_id;
  std::vector<PairSummary> pairs;
  std::vector<std::string> warnings;
};

struct AuditReport {
  std::vector<SceneOverlap> scenes;
  std::array<std::size_t, kBcsBins> bcs_histogram{};
  std::size_t total_labels = 0;
  std::size_t groups = 0;
  std::size_t grouped_observations = 0;
  std::size_t tracks = 0;
  // "computed" or "skipped: <reason>".
  std::string similarity_status;
};

// Bin i covers [i / 20, (i + 1) / 20); the last bin also holds 1.0.
int BcsBin(double bcs);

AuditReport BuildAuditReport(const Dataset& ds,
                             std::span<const OverlapGraph> graphs,
                             const RunConfig& cfg);

std::string AuditReportJson(const AuditReport& report, const RunConfig& cfg);
std::string SweepCsv(std::span<const SweepRow> rows);
std::string DistanceSweepCsv(std::span<const DistanceSweepRow> rows);

struct FrameRedundancy {
  std::string scene_id;
  std::int64_t timestamp_ns = 0;
  std::size_t n_base = 0;
  std::size_t n_lidar = 0;
  double rr = 0.0;
  std::size_t matched_one_to_one = 0;
  double mean_distance = 0.0;  // mean centroid distance of baseline boxes
};

struct MultimodalReport {
  std::vector<FrameRedundancy> frames;
  std::vector<DistanceSweepRow> sweep;  // pooled over frames
  std::size_t skipped_frames = 0;
  double split = 0.0;
  std::vector<double> high_distances;  // frames with RR > split
  std::vector<double> low_distances;   // frames with RR <= split
  std::optional<TTestResult> ttest;
  std::string ttest_status;  // "computed" or "skipped: <reason>"
};

// Throws ValidationError when no frame carries both detection sets.
MultimodalReport BuildMultimodalReport(const Dataset& ds, const RunConfig& cfg,
                                       std::ostream& warnings);

std::string PruneReportJson(const PruneResult& result,
                            const LabelInventory& inv, const RunConfig& cfg);

std::string FramesCsv(std::span<const FrameRedundancy> frames);
std::string TTestJson(const MultimodalReport& report, const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Commands. Each returns the process exit code and reports failures on `err`.

int RunAudit(const RunConfig& cfg, std::ostream& err);
int RunPrune(const RunConfig& cfg, std::ostream& err);
int RunSweep(const RunConfig& cfg, std::ostream& err);
int RunMm(const RunConfig& cfg, std::ostream& err);
int RunSim(const RunConfig& cfg, std::ostream& err);
int Run(const RunConfig& cfg, std::ostream& err);

// Parses the command line into a RunConfig and runs it.
int Main(int argc, char** argv);

}  // namespace avredux::cli

#endif  // AVREDUX_CLI_HPP_
