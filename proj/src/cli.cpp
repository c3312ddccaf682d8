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

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "avredux/error.hpp"

namespace avredux::cli {
namespace {

namespace fs = std::filesystem;

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

int Guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

std::string PlotSeries(std::span<const double> xs, std::span<const double> ys) {
  std::string out;
  char buf[96];
  for (size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f %.6f\n", xs[i], ys[i]);
    out += buf;
  }
  return out;
}

}  // namespace

std::string_view ToString(Command c) {
  switch (c) {
    case Command::kAudit:
      return "audit";
    case Command::kPrune:
      return "prune";
    case Command::kSweep:
      return "sweep";
    case Command::kMm:
      return "mm";
    case Command::kSim:
      return "sim";
  }
  return "unknown";
}

std::string_view ToString(OverlapMode m) {
  return m == OverlapMode::kPresetNuScenes ? "preset-nuscenes" : "calibration";
}

OverlapMode ParseOverlapMode(std::string_view text) {
  if (text == "preset-nuscenes") return OverlapMode::kPresetNuScenes;
  if (text == "calibration") return OverlapMode::kCalibration;
  throw ValidationError("unknown overlap mode '" + std::string(text) + "'");
}

void RunConfig::Validate() const {
  for (double t : taus) {
    if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("taus must lie in [0, 1]");
  }
  if (command == Command::kSweep && taus.empty()) {
    throw ValidationError("sweep needs at least one tau");
  }
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw ValidationError("theta must lie in (0, 1]");
  }
  if (command == Command::kMm && t_dist.empty()) {
    throw ValidationError("mm needs at least one distance threshold");
  }
  for (double t : t_dist) {
    if (!(t >= 0.0)) throw ValidationError("t_dist values must be >= 0");
  }
  if (!(min_overlap >= 0.0)) throw ValidationError("min_overlap must be >= 0");
  if (rr_split && !std::isfinite(*rr_split)) {
    throw ValidationError("rr_split must be finite");
  }
}

int RunAudit(const RunConfig& cfg, std::ostream& err) {
  return Guarded(err, [&] {
    cfg.Validate();
    const Dataset ds = ParseDataset(cfg.dataset_path);
    const auto graphs = ResolveGraphs(ds, cfg);
    const AuditReport report = BuildAuditReport(ds, graphs, cfg);
    WriteText(cfg.output_dir / "audit.json", AuditReportJson(report, cfg));
  });
}

int RunPrune(const RunConfig& cfg, std::ostream& err) {
  return Guarded(err, [&] {
    cfg.Validate();
    const Dataset ds = ParseDataset(cfg.dataset_path);
    const auto graphs = ResolveGraphs(ds, cfg);
    const LabelInventory inv = BuildInventory(ds, graphs, cfg.label_source);
    const PruneResult result = PruneInventory(inv, cfg.tau);
    EmitLabels(ds, result.kept, cfg.label_source, cfg.output_dir / "labels");
    WriteText(cfg.output_dir / "prune_report.json",
              PruneReportJson(result, inv, cfg));
  });
}

int RunSweep(const RunConfig& cfg, std::ostream& err) {
  return Guarded(err, [&] {
    cfg.Validate();
    const Dataset ds = ParseDataset(cfg.dataset_path);
    const auto graphs = ResolveGraphs(ds, cfg);
    const LabelInventory inv = BuildInventory(ds, graphs, cfg.label_source);
    const auto rows = SweepTau(inv, cfg.taus, cfg.tau);
    WriteText(cfg.output_dir / "sweep.csv", SweepCsv(rows));
    if (cfg.emit_plot_data) {
      std::vector<double> deleted;
      for (const SweepRow& r : rows) deleted.push_back(r.deleted);
      WriteText(cfg.output_dir / "plot_tau_deleted.dat",
                PlotSeries(cfg.taus, deleted));
    }
  });
}

int RunMm(const RunConfig& cfg, std::ostream& err) {
  return Guarded(err, [&] {
    cfg.Validate();
    const Dataset ds = ParseDataset(cfg.dataset_path);
    const MultimodalReport report = BuildMultimodalReport(ds, cfg, err);
    WriteText(cfg.output_dir / "mm_frames.csv", FramesCsv(report.frames));
    WriteText(cfg.output_dir / "mm_sweep.csv", DistanceSweepCsv(report.sweep));
    WriteText(cfg.output_dir / "mm_ttest.json", TTestJson(report, cfg));
    if (cfg.emit_plot_data) {
      std::vector<double> lost;
      std::vector<double> pruned;
      for (const DistanceSweepRow& r : report.sweep) {
        lost.push_back(r.lost_ratio);
        pruned.push_back(static_cast<double>(r.pruned_count));
      }
      WriteText(cfg.output_dir / "plot_tdist_lost.dat",
                PlotSeries(cfg.t_dist, lost));
      WriteText(cfg.output_dir / "plot_tdist_pruned.dat",
                PlotSeries(cfg.t_dist, pruned));
    }
  });
}

int RunSim(const RunConfig& cfg, std::ostream& err) {
  return Guarded(err, [&] {
    const auto [ds, truth] = synth::GenerateScene(cfg.sim);
    WriteDataset(ds, cfg.output_dir);
    nlohmann::ordered_json gt;
    gt["seed"] = cfg.sim.seed;
    gt["expected_rr"] = truth.expected_rr ? nlohmann::ordered_json(
                                                *truth.expected_rr)
                                          : nlohmann::ordered_json(nullptr);
    gt["expected_groups"] = nlohmann::ordered_json::array();
    for (const auto& g : truth.expected_groups) {
      gt["expected_groups"].push_back({{"timestamp_ns", g.timestamp_ns},
                                       {"track_id", g.track_id},
                                       {"cameras", g.cameras}});
    }
    gt["expected_distances"] = truth.expected_distances;
    WriteText(cfg.output_dir / "ground_truth.json", gt.dump(1) + "\n");
  });
}

int Run(const RunConfig& cfg, std::ostream& err) {
  switch (cfg.command) {
    case Command::kAudit:
      return RunAudit(cfg, err);
    case Command::kPrune:
      return RunPrune(cfg, err);
    case Command::kSweep:
      return RunSweep(cfg, err);
    case Command::kMm:
      return RunMm(cfg, err);
    case Command::kSim:
      return RunSim(cfg, err);
  }
  return 1;
}

int Main(int argc, char** argv) {
  CLI::App app{
      "Measure and remove redundancy in multi-camera and camera-LiDAR "
      "annotation data."};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string overlap_mode{ToString(cfg.overlap_mode)};
  std::string label_source{ToString(cfg.label_source)};
  std::string rr_split = "median";
  std::string rig = "ring";
  std::string images;
  double tau = cfg.tau.global();
  std::vector<std::string> tau_pairs;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output-dir", cfg.output_dir, "Output directory")
        ->envname(kOutputDirEnv)
        ->capture_default_str();
  };
  auto add_multisource = [&](CLI::App* sub) {
    sub->add_option("-d,--dataset", cfg.dataset_path,
                    "Scene document or directory of scene documents")
        ->required();
    add_output(sub);
    sub->add_option("--overlap-mode", overlap_mode,
                    "preset-nuscenes or calibration")
        ->capture_default_str();
    sub->add_option("--label-source", label_source,
                    "native-2d or projected-3d")
        ->capture_default_str();
    sub->add_option("--min-overlap", cfg.min_overlap,
                    "Minimum camera-pair overlap in degrees")
        ->capture_default_str();
    sub->add_option("--tau", tau, "Global BCS-gap threshold")
        ->capture_default_str();
    sub->add_option("--tau-pair", tau_pairs,
                    "Per-pair threshold override CAM_A,CAM_B=VALUE "
                    "(repeatable)");
  };

  CLI::App* audit = app.add_subcommand("audit", "Overlap and BCS diagnostics");
  add_multisource(audit);
  audit->add_option("--images", images,
                    "Root of <scene>/<camera>/<timestamp_ns>.pgm images");

  CLI::App* prune = app.add_subcommand("prune", "Emit BCS-pruned labels");
  add_multisource(prune);

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep the BCS threshold");
  add_multisource(sweep);
  sweep->add_option("--taus", cfg.taus, "Thresholds to sweep")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_flag("--emit-plot-data", cfg.emit_plot_data,
                  "Write x/y series files");

  CLI::App* mm = app.add_subcommand("mm", "Camera-LiDAR redundancy analysis");
  mm->add_option("-d,--dataset", cfg.dataset_path,
                 "Scene document or directory of scene documents")
      ->required();
  add_output(mm);
  mm->add_option("--theta", cfg.theta, "IoU match threshold")
      ->capture_default_str();
  mm->add_option("--t-dist", cfg.t_dist, "Distance thresholds in meters")
      ->delimiter(',')
      ->capture_default_str();
  mm->add_option("--rr-split", rr_split, "median or a redundancy-ratio value")
      ->capture_default_str();
  mm->add_flag("--emit-plot-data", cfg.emit_plot_data,
               "Write x/y series files");

  CLI::App* sim = app.add_subcommand("sim", "Generate a synthetic scene");
  add_output(sim);
  sim->add_option("--seed", cfg.sim.seed)->capture_default_str();
  sim->add_option("--rig", rig, "ring or nuscenes")->capture_default_str();
  sim->add_option("--n-cameras", cfg.sim.n_cameras)->capture_default_str();
  sim->add_option("--camera-fov", cfg.sim.camera_fov)->capture_default_str();
  sim->add_option("--yaws", cfg.sim.camera_yaw_offsets,
                  "Camera yaws in degrees")
      ->delimiter(',');
  sim->add_option("--n-frames", cfg.sim.n_frames)->capture_default_str();
  sim->add_option("--n-objects", cfg.sim.n_objects, "Objects per frame")
      ->capture_default_str();
  sim->add_option("--radial-min", cfg.sim.radial_range.first)
      ->capture_default_str();
  sim->add_option("--radial-max", cfg.sim.radial_range.second)
      ->capture_default_str();
  sim->add_option("--size-min", cfg.sim.size_range.first)
      ->capture_default_str();
  sim->add_option("--size-max", cfg.sim.size_range.second)
      ->capture_default_str();
  sim->add_option("--noise", cfg.sim.detection_noise)->capture_default_str();
  sim->add_option("--drop-rate", cfg.sim.drop_rate)->capture_default_str();
  sim->add_option("--scene-id", cfg.sim.scene_id)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const int setup = Guarded(std::cerr, [&] {
    if (audit->parsed()) cfg.command = Command::kAudit;
    if (prune->parsed()) cfg.command = Command::kPrune;
    if (sweep->parsed()) cfg.command = Command::kSweep;
    if (mm->parsed()) cfg.command = Command::kMm;
    if (sim->parsed()) cfg.command = Command::kSim;
    cfg.overlap_mode = ParseOverlapMode(overlap_mode);
    cfg.label_source = ParseLabelSource(label_source);
    cfg.tau.set_global(tau);
    for (const std::string& entry : tau_pairs) {
      const auto comma = entry.find(',');
      const auto eq = entry.find('=');
      if (comma == std::string::npos || eq == std::string::npos ||
          eq < comma) {
        throw ValidationError("--tau-pair expects CAM_A,CAM_B=VALUE, got '" +
                              entry + "'");
      }
      cfg.tau.SetPairOverride(entry.substr(0, comma),
                              entry.substr(comma + 1, eq - comma - 1),
                              std::stod(entry.substr(eq + 1)));
    }
    if (rr_split != "median") cfg.rr_split = std::stod(rr_split);
    if (!images.empty()) cfg.images_dir = images;
    if (rig == "nuscenes") {
      cfg.sim.rig = synth::Rig::kNuScenes;
    } else if (rig != "ring") {
      throw ValidationError("unknown rig '" + rig + "'");
    }
  });
  if (setup != 0) return setup;
  return Run(cfg, std::cerr);
}

}  // namespace avredux::cli
