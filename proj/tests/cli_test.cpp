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

#include "avredux/cli.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "avredux/error.hpp"
#include "avredux/synth.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace avredux::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path WriteSynth(const std::string& name, synth::SynthParams p) {
  const fs::path dir = testing::FreshDir(name);
  WriteDataset(synth::GenerateScene(p).first, dir / "data");
  return dir;
}

synth::SynthParams NuScenesParams(std::uint64_t seed) {
  synth::SynthParams p;
  p.seed = seed;
  p.rig = synth::Rig::kNuScenes;
  p.n_frames = 3;
  p.n_objects = 20;
  return p;
}

int RunMain(std::vector<std::string> args) {
  args.insert(args.begin(), "avredux");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return Main(static_cast<int>(argv.size()), argv.data());
}

TEST(RunConfigTest, Validation) {
  RunConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.theta = 0.0;
  EXPECT_THROW(cfg.Validate(), ValidationError);
  cfg = RunConfig{};
  cfg.t_dist = {-1.0};
  EXPECT_THROW(cfg.Validate(), ValidationError);
  cfg = RunConfig{};
  cfg.taus = {1.2};
  EXPECT_THROW(cfg.Validate(), ValidationError);
  EXPECT_EQ(ParseOverlapMode("preset-nuscenes"), OverlapMode::kPresetNuScenes);
  EXPECT_THROW(ParseOverlapMode("fixed"), ValidationError);
}

TEST(BcsBinTest, Edges) {
  EXPECT_EQ(BcsBin(0.0), 0);
  EXPECT_EQ(BcsBin(0.05), 1);
  EXPECT_EQ(BcsBin(0.999), 19);
  EXPECT_EQ(BcsBin(1.0), 19);
}

TEST(AuditTest, NuScenesRingReport) {
  const fs::path dir = WriteSynth("cli_audit", NuScenesParams(7));
  RunConfig cfg;
  cfg.dataset_path = dir / "data";
  cfg.output_dir = dir / "out";
  std::ostringstream err;
  ASSERT_EQ(RunAudit(cfg, err), 0) << err.str();
  const json report = json::parse(testing::ReadAll(dir / "out/audit.json"));
  const auto& pairs = report["scenes"][0]["overlap_pairs"];
  ASSERT_EQ(pairs.size(), 6u);
  std::vector<double> angles;
  for (const auto& p : pairs) angles.push_back(p["overlap_deg"]);
  std::sort(angles.begin(), angles.end());
  EXPECT_EQ(angles, (std::vector<double>{15, 15, 15, 15, 20, 20}));
  EXPECT_NE(report["similarity"].get<std::string>().find("skipped"),
            std::string::npos);

  // Histogram mass equals grouped observations.
  const Dataset ds = ParseDataset(cfg.dataset_path);
  const AuditReport r = BuildAuditReport(ds, ResolveGraphs(ds, cfg), cfg);
  size_t mass = 0;
  for (size_t c : r.bcs_histogram) mass += c;
  EXPECT_EQ(mass, r.grouped_observations);
  size_t per_pair = 0;
  for (const auto& p : r.scenes[0].pairs) per_pair += p.groups;
  EXPECT_GE(per_pair, r.groups);
}

TEST(AuditTest, PresetModeIgnoresCalibration) {
  synth::SynthParams p;
  p.seed = 4;
  const fs::path dir = WriteSynth("cli_preset", p);
  RunConfig cfg;
  cfg.dataset_path = dir / "data";
  cfg.overlap_mode = OverlapMode::kPresetNuScenes;
  const Dataset ds = ParseDataset(cfg.dataset_path);
  const auto graphs = ResolveGraphs(ds, cfg);
  ASSERT_EQ(graphs.size(), 1u);
  EXPECT_EQ(graphs[0].pairs.size(), 6u);
  cfg.overlap_mode = OverlapMode::kCalibration;
  EXPECT_EQ(ResolveGraphs(ds, cfg)[0].pairs.size(), 6u);
  EXPECT_EQ(ResolveGraphs(ds, cfg)[0].pairs[0].camera_a, "CAM_00");
}

TEST(AuditTest, SimilarityFromImages) {
  const fs::path dir = WriteSynth("cli_sim_images", NuScenesParams(3));
  const Dataset ds = ParseDataset(dir / "data");
  GrayImage img;
  img.width = 1600;
  img.height = 900;
  img.pixels.assign(1600 * 900, 0);
  for (size_t i = 0; i < img.pixels.size(); ++i) {
    img.pixels[i] = static_cast<std::uint8_t>(1 + (i * 7919) % 200);
  }
  const auto bytes = SerializePgm(img);
  for (const Frame& f : ds.scenes[0].frames) {
    for (const CameraModel& cam : ds.scenes[0].cameras) {
      const fs::path p = dir / "images" / ds.scenes[0].scene_id / cam.name /
                         (std::to_string(f.timestamp_ns) + ".pgm");
      fs::create_directories(p.parent_path());
      std::ofstream(p, std::ios::binary)
          .write(reinterpret_cast<const char*>(bytes.data()),
                 static_cast<std::streamsize>(bytes.size()));
    }
  }
  RunConfig cfg;
  cfg.dataset_path = dir / "data";
  cfg.images_dir = dir / "images";
  const AuditReport r = BuildAuditReport(ds, ResolveGraphs(ds, cfg), cfg);
  EXPECT_EQ(r.similarity_status, "computed");
  for (const auto& p : r.scenes[0].pairs) {
    EXPECT_EQ(p.similarity_samples, 3u);
    ASSERT_TRUE(p.mean_similarity.has_value());
    EXPECT_GT(*p.mean_similarity, 0.0);
    EXPECT_LE(*p.mean_similarity, 1.0);
  }
}

TEST(AuditTest, EmptyDatasetFails) {
  const fs::path dir = testing::FreshDir("cli_empty");
  fs::create_directories(dir / "data");
  RunConfig cfg;
  cfg.dataset_path = dir / "data";
  cfg.output_dir = dir / "out";
  std::ostringstream err;
  EXPECT_NE(RunAudit(cfg, err), 0);
  EXPECT_FALSE(err.str().empty());
  EXPECT_FALSE(fs::exists(dir / "out/audit.json"));

  std::ofstream(dir / "noframes.json")
      << R"({"scene_id": "s", "class_map": ["car"], "cameras": [],
             "frames": []})";
  cfg.dataset_path = dir / "noframes.json";
  EXPECT_NE(RunAudit(cfg, err), 0);
}

TEST(PruneTest, FullThresholdMatchesBaselineEmission) {
  const fs::path dir = WriteSynth("cli_prune_base", NuScenesParams(11));
  RunConfig cfg;
  cfg.dataset_path = dir / "data";
  cfg.output_dir = dir / "out";
  cfg.tau = TauPolicy(1.0);
  std::ostringstream err;
  ASSERT_EQ(RunPrune(cfg, err), 0) << err.str();

  const Dataset ds = ParseDataset(cfg.dataset_path);
  const auto labels = EnumerateLabels(ds, cfg.label_source);
  EmitLabels(ds, {labels.begin(), labels.end()}, cfg.label_source,
             dir / "baseline");
  size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "baseline")) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), dir / "baseline");
    ASSERT_EQ(testing::ReadAll(e.path()),
              testing::ReadAll(dir / "out/labels" / rel));
    ++files;
  }
  EXPECT_EQ(files, 3u * 6u);
}

TEST(PruneTest, CountsMatchBruteForce) {
  const fs::path dir = WriteSynth("cli_prune_bf", NuScenesParams(12));
  RunConfig cfg;
  cfg.dataset_path = dir / "data";
  cfg.output_dir = dir / "out";
  cfg.tau = TauPolicy(0.3);
  std::ostringstream err;
  ASSERT_EQ(RunPrune(cfg, err), 0) << err.str();
  const json report =
      json::parse(testing::ReadAll(dir / "out/prune_report.json"));
  const Dataset ds = ParseDataset(cfg.dataset_path);
  const auto graphs = ResolveGraphs(ds, cfg);
  const auto oracle = synth::BruteForcePrune(ds, graphs, 0.3, cfg.label_source);
  const size_t total = EnumerateLabels(ds, cfg.label_source).size();
  EXPECT_EQ(report["remaining"].get<size_t>(), oracle.size());
  EXPECT_EQ(report["deleted"].get<size_t>(), total - oracle.size());
}

// Two native-2D groups: one on the FRONT/FRONT_RIGHT pair, one on
// BACK/BACK_LEFT, each with a 0.9 BCS gap.
Dataset OverrideFixture() {
  Dataset ds;
  ds.class_map = {"car"};
  Scene s;
  s.scene_id = "pairs";
  s.cameras = synth::NuScenesRingCameras();
  Frame f;
  f.timestamp_ns = 1;
  auto add = [&](const std::string& id, const std::string& whole,
                 const std::string& partial) {
    Annotation a;
    a.track_id = id;
    a.category = "car";
    a.boxes2d[whole] = Box2D{100, 100, 200, 200};
    a.boxes2d[partial] = Box2D{-900, 100, 100, 200};
    f.annotations.push_back(a);
  };
  add("front", "CAM_FRONT", "CAM_FRONT_RIGHT");
  add("back", "CAM_BACK", "CAM_BACK_LEFT");
  s.frames.push_back(f);
  ds.scenes.push_back(s);
  return ds;
}

TEST(PruneTest, PerPairOverrideTouchesOnlyThatPair) {
  const fs::path dir = testing::FreshDir("cli_override");
  WriteDataset(OverrideFixture(), dir / "data");
  ASSERT_EQ(RunMain({"prune", "-d", (dir / "data").string(), "-o",
                     (dir / "out").string(), "--label-source", "native-2d",
                     "--overlap-mode", "preset-nuscenes", "--tau", "1.0",
                     "--tau-pair", "CAM_FRONT_RIGHT,CAM_FRONT=0.8"}),
            0);
  const fs::path labels = dir / "out/labels/pairs";
  EXPECT_EQ(testing::ReadAll(labels / "CAM_FRONT/1.txt"),
            "0 0.093750 0.166667 0.062500 0.111111\n");
  EXPECT_EQ(testing::ReadAll(labels / "CAM_FRONT_RIGHT/1.txt"), "");
  EXPECT_EQ(testing::ReadAll(labels / "CAM_BACK/1.txt"),
            "0 0.093750 0.166667 0.062500 0.111111\n");
  EXPECT_EQ(testing::ReadAll(labels / "CAM_BACK_LEFT/1.txt"),
            "0 0.031250 0.166667 0.062500 0.111111\n");
  const json report =
      json::parse(testing::ReadAll(dir / "out/prune_report.json"));
  EXPECT_EQ(report["deleted"], 1);
  EXPECT_EQ(report["remaining"], 3);
  EXPECT_EQ(report["tracks"], 2);
}

TEST(SweepTest, CsvShape) {
  const fs::path dir = WriteSynth("cli_sweep", NuScenesParams(21));
  ASSERT_EQ(RunMain({"sweep", "-d", (dir / "data").string(), "-o",
                     (dir / "out").string(), "--emit-plot-data"}),
            0);
  std::istringstream csv(testing::ReadAll(dir / "out/sweep.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "tau,deleted,remaining,tracks");
  std::vector<std::string> rows;
  while (std::getline(csv, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].substr(0, 9), "0.100000,");
  EXPECT_EQ(rows[5].substr(0, 9), "0.600000,");
  EXPECT_TRUE(fs::exists(dir / "out/plot_tau_deleted.dat"));
}

TEST(SweepTest, Deterministic) {
  const fs::path dir = WriteSynth("cli_det", NuScenesParams(5));
  for (const char* out : {"a", "b"}) {
    ASSERT_EQ(RunMain({"sweep", "-d", (dir / "data").string(), "-o",
                       (dir / out).string()}),
              0);
    ASSERT_EQ(RunMain({"mm", "-d", (dir / "data").string(), "-o",
                       (dir / out).string()}),
              0);
  }
  for (const char* f : {"sweep.csv", "mm_frames.csv", "mm_sweep.csv",
                        "mm_ttest.json"}) {
    EXPECT_EQ(testing::ReadAll(dir / "a" / f), testing::ReadAll(dir / "b" / f))
        << f;
  }
}

Box3D BoxAt(double x, double y) {
  return testing::MakeBox(x, y, 0, 1, 1, 1);
}

TEST(MmTest, ExactSetsHaveFullRedundancy) {
  synth::SynthParams p = NuScenesParams(9);
  const Dataset ds = synth::GenerateScene(p).first;
  RunConfig cfg;
  std::ostringstream warn;
  const MultimodalReport r = BuildMultimodalReport(ds, cfg, warn);
  ASSERT_EQ(r.frames.size(), 3u);
  for (const auto& f : r.frames) EXPECT_EQ(f.rr, 1.0);
  EXPECT_NE(r.ttest_status.find("skipped"), std::string::npos);
}

TEST(MmTest, DistanceThresholdCounting) {
  Dataset ds;
  ds.class_map = {"car"};
  Scene s;
  s.scene_id = "d";
  Frame f;
  f.timestamp_ns = 1;
  const std::vector<Box3D> boxes = {BoxAt(2, 0), BoxAt(0, 7), BoxAt(-12, 0)};
  f.detection_sets[std::string(kFusionBaseline)] = boxes;
  f.detection_sets[std::string(kLidarOnly)] = boxes;
  s.frames.push_back(f);
  ds.scenes.push_back(s);
  RunConfig cfg;
  cfg.t_dist = {0, 5, 10};
  std::ostringstream warn;
  const MultimodalReport r = BuildMultimodalReport(ds, cfg, warn);
  ASSERT_EQ(r.sweep.size(), 3u);
  EXPECT_EQ(r.sweep[0].pruned_count, 0u);
  EXPECT_EQ(r.sweep[1].pruned_count, 1u);
  EXPECT_EQ(r.sweep[2].pruned_count, 2u);
  EXPECT_DOUBLE_EQ(r.sweep[2].lost_ratio, 2.0 / 3.0);
  EXPECT_EQ(DistanceSweepCsv(r.sweep).substr(0, 29),
            "t_dist,pruned_count,lost_rati");
}

// Frames mixing near objects (always detected by lidar) and far objects
// (never detected). Frames with more near objects have higher RR and a
// smaller mean distance.
Dataset NearFarFixture() {
  Dataset ds;
  ds.class_map = {"car"};
  Scene s;
  s.scene_id = "nf";
  for (int k = 0; k < 12; ++k) {
    Frame f;
    f.timestamp_ns = k + 1;
    std::vector<Box3D> base, lidar;
    const int near = 1 + k % 6;
    const int far = 6 - k % 6;
    for (int i = 0; i < near; ++i) {
      base.push_back(BoxAt(2.0 + 0.4 * i + 0.05 * k, 0.5));
      lidar.push_back(base.back());
    }
    for (int i = 0; i < far; ++i) {
      base.push_back(BoxAt(0.5, 8.0 + 3.0 * i + 0.1 * k));
    }
    f.detection_sets[std::string(kFusionBaseline)] = base;
    f.detection_sets[std::string(kLidarOnly)] = lidar;
    s.frames.push_back(f);
  }
  // A frame without lidar detections is skipped.
  Frame missing;
  missing.timestamp_ns = 100;
  missing.detection_sets[std::string(kFusionBaseline)] = {BoxAt(3, 3)};
  s.frames.push_back(missing);
  ds.scenes.push_back(s);
  return ds;
}

TEST(MmTest, NearGroupHasSmallerMeanDistance) {
  const Dataset ds = NearFarFixture();
  RunConfig cfg;
  std::ostringstream warn;
  const MultimodalReport r = BuildMultimodalReport(ds, cfg, warn);
  EXPECT_EQ(r.skipped_frames, 1u);
  EXPECT_FALSE(warn.str().empty());
  ASSERT_EQ(r.frames.size(), 12u);
  ASSERT_TRUE(r.ttest.has_value()) << r.ttest_status;
  EXPECT_EQ(r.high_distances.size() + r.low_distances.size(), 12u);
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  EXPECT_LT(mean(r.high_distances), mean(r.low_distances));
  EXPECT_LT(r.ttest->t, 0.0);
  const boost::math::students_t dist(r.ttest->df);
  const double ref =
      2 * boost::math::cdf(boost::math::complement(dist, std::abs(r.ttest->t)));
  EXPECT_NEAR(r.ttest->p_two_sided, ref, 1e-9 + 1e-6 * ref);
  for (size_t i = 1; i < r.sweep.size(); ++i) {
    EXPECT_GE(r.sweep[i].lost_ratio, r.sweep[i - 1].lost_ratio);
  }

  cfg.rr_split = 0.5;
  const MultimodalReport fixed = BuildMultimodalReport(ds, cfg, warn);
  EXPECT_EQ(fixed.split, 0.5);
  size_t high = 0;
  for (const auto& f : fixed.frames) high += f.rr > 0.5;
  EXPECT_EQ(fixed.high_distances.size(), high);
}

TEST(MmTest, NoUsableFrameFails) {
  Dataset ds;
  ds.class_map = {"car"};
  Scene s;
  s.scene_id = "x";
  Frame f;
  f.timestamp_ns = 1;
  s.frames.push_back(f);
  ds.scenes.push_back(s);
  RunConfig cfg;
  std::ostringstream warn;
  EXPECT_THROW(BuildMultimodalReport(ds, cfg, warn), ValidationError);
}

TEST(MainTest, SimThenAuditEndToEnd) {
  const fs::path dir = testing::FreshDir("cli_main");
  ASSERT_EQ(RunMain({"sim", "-o", (dir / "data").string(), "--rig",
                     "nuscenes", "--seed", "7", "--n-frames", "2"}),
            0);
  EXPECT_TRUE(fs::exists(dir / "data/synth.json"));
  EXPECT_TRUE(fs::exists(dir / "data/ground_truth.json"));
  ASSERT_EQ(RunMain({"audit", "-d", (dir / "data/synth.json").string(), "-o",
                     (dir / "out").string(), "--overlap-mode",
                     "preset-nuscenes"}),
            0);
  const json report = json::parse(testing::ReadAll(dir / "out/audit.json"));
  EXPECT_EQ(report["config"]["overlap_mode"], "preset-nuscenes");
  EXPECT_FALSE(report["config"].contains("output_dir"));

  EXPECT_NE(RunMain({"audit", "-d", (dir / "missing.json").string(), "-o",
                     (dir / "out2").string()}),
            0);
  EXPECT_NE(RunMain({"prune", "-d", (dir / "data").string(), "--tau", "2"}),
            0);
  EXPECT_NE(RunMain({"bogus"}), 0);
}

TEST(MainTest, OutputDirFromEnvironment) {
  const fs::path dir = testing::FreshDir("cli_env");
  ::setenv(kOutputDirEnv, (dir / "envout").c_str(), 1);
  const int rc = RunMain({"sim", "--seed", "1"});
  ::unsetenv(kOutputDirEnv);
  ASSERT_EQ(rc, 0);
  EXPECT_TRUE(fs::exists(dir / "envout/synth.json"));
}

}  // namespace
}  // namespace avredux::cli
