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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "avredux/cli.hpp"
#include "avredux/error.hpp"

namespace avredux::cli {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string Fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Rounds to six significant digits for reporting.
double Sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtod(buf, nullptr);
}

ordered_json ConfigJson(const RunConfig& cfg) {
  ordered_json j;
  j["command"] = ToString(cfg.command);
  j["dataset"] = cfg.dataset_path.generic_string();
  j["overlap_mode"] = ToString(cfg.overlap_mode);
  j["label_source"] = ToString(cfg.label_source);
  j["min_overlap_deg"] = cfg.min_overlap;
  ordered_json tau;
  tau["global"] = cfg.tau.global();
  tau["pair_overrides"] = ordered_json::array();
  for (const auto& [pair, value] : cfg.tau.overrides()) {
    tau["pair_overrides"].push_back(
        {{"camera_a", pair.first}, {"camera_b", pair.second}, {"tau", value}});
  }
  j["tau"] = std::move(tau);
  j["taus"] = cfg.taus;
  j["theta"] = cfg.theta;
  j["matching"] = "existence";
  j["t_dist"] = cfg.t_dist;
  if (cfg.rr_split) {
    j["rr_split"] = *cfg.rr_split;
  } else {
    j["rr_split"] = "median";
  }
  if (cfg.images_dir) {
    j["images"] = cfg.images_dir->generic_string();
  } else {
    j["images"] = nullptr;
  }
  return j;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::optional<GrayImage> LoadFrameImage(const fs::path& root,
                                        const std::string& scene_id,
                                        const std::string& camera,
                                        std::int64_t timestamp_ns) {
  const fs::path path =
      root / scene_id / camera / (std::to_string(timestamp_ns) + ".pgm");
  if (!fs::exists(path)) return std::nullopt;
  return ReadPgm(path);
}

}  // namespace

std::vector<OverlapGraph> ResolveGraphs(const Dataset& ds,
                                        const RunConfig& cfg) {
  std::vector<OverlapGraph> graphs;
  graphs.reserve(ds.scenes.size());
  for (const Scene& scene : ds.scenes) {
    if (cfg.overlap_mode == OverlapMode::kPresetNuScenes) {
      graphs.push_back(PresetNuScenes());
    } else if (scene.cameras.size() < 2) {
      graphs.emplace_back();
    } else {
      graphs.push_back(BuildOverlapGraph(scene.cameras, cfg.min_overlap));
    }
  }
  return graphs;
}

int BcsBin(double bcs) {
  return std::clamp(static_cast<int>(bcs * kBcsBins), 0, kBcsBins - 1);
}

AuditReport BuildAuditReport(const Dataset& ds,
                             std::span<const OverlapGraph> graphs,
                             const RunConfig& cfg) {
  AuditReport report;
  const LabelInventory inv = BuildInventory(ds, graphs, cfg.label_source);
  report.total_labels = inv.labels.size();
  report.groups = inv.groups.size();

  std::set<std::pair<std::string, std::string>> tracks;
  for (const LabelKey& key : inv.labels) {
    tracks.emplace(key.scene_id, key.track_id);
  }
  report.tracks = tracks.size();

  std::map<std::string, size_t> scene_index;
  for (size_t s = 0; s < ds.scenes.size(); ++s) {
    SceneOverlap so;
    so.scene_id = ds.scenes[s].scene_id;
    so.warnings = graphs[s].warnings;
    for (const OverlapPair& pair : graphs[s].pairs) {
      PairSummary ps;
      ps.pair = pair;
      so.pairs.push_back(std::move(ps));
    }
    scene_index[so.scene_id] = s;
    report.scenes.push_back(std::move(so));
  }

  for (const RedundancyGroup& g : inv.groups) {
    SceneOverlap& so = report.scenes[scene_index.at(g.scene_id)];
    for (const Observation& obs : g.observations) {
      ++report.bcs_histogram[BcsBin(obs.bcs)];
      ++report.grouped_observations;
    }
    for (PairSummary& ps : so.pairs) {
      bool has_a = false;
      bool has_b = false;
      for (const Observation& obs : g.observations) {
        has_a |= obs.camera == ps.pair.camera_a;
        has_b |= obs.camera == ps.pair.camera_b;
      }
      if (has_a && has_b) ++ps.groups;
    }
  }

  if (!cfg.images_dir) {
    report.similarity_status = "skipped: no image directory supplied";
    return report;
  }
  report.similarity_status = "computed";
  for (size_t s = 0; s < ds.scenes.size(); ++s) {
    const Scene& scene = ds.scenes[s];
    for (PairSummary& ps : report.scenes[s].pairs) {
      const CameraModel* cam_a = scene.FindCamera(ps.pair.camera_a);
      const CameraModel* cam_b = scene.FindCamera(ps.pair.camera_b);
      if (!cam_a || !cam_b) continue;
      double sum = 0.0;
      for (const Frame& frame : scene.frames) {
        const auto img_a = LoadFrameImage(*cfg.images_dir, scene.scene_id,
                                          cam_a->name, frame.timestamp_ns);
        const auto img_b = LoadFrameImage(*cfg.images_dir, scene.scene_id,
                                          cam_b->name, frame.timestamp_ns);
        if (!img_a || !img_b) continue;
        try {
          const GrayImage crop_a = CropOverlap(*img_a, *cam_a,
                                               ps.pair.arc_start,
                                               ps.pair.arc_end);
          const GrayImage crop_b = CropOverlap(*img_b, *cam_b,
                                               ps.pair.arc_start,
                                               ps.pair.arc_end);
          sum += CosineSimilarity(crop_a, crop_b);
          ++ps.similarity_samples;
        } catch (const DomainError&) {
          // Arc outside this calibration's view or blank crop: no sample.
        }
      }
      if (ps.similarity_samples > 0) {
        ps.mean_similarity = sum / static_cast<double>(ps.similarity_samples);
      }
    }
  }
  return report;
}

std::string AuditReportJson(const AuditReport& report, const RunConfig& cfg) {
  ordered_json j;
  j["report"] = "audit";
  j["config"] = ConfigJson(cfg);
  j["scenes"] = ordered_json::array();
  for (const SceneOverlap& so : report.scenes) {
    ordered_json s;
    s["scene_id"] = so.scene_id;
    s["overlap_pairs"] = ordered_json::array();
    for (const PairSummary& ps : so.pairs) {
      ordered_json p;
      p["camera_a"] = ps.pair.camera_a;
      p["camera_b"] = ps.pair.camera_b;
      p["overlap_deg"] = Sig6(ps.pair.overlap_degrees);
      p["arc_deg"] = {Sig6(ps.pair.arc_start), Sig6(ps.pair.arc_end)};
      p["groups"] = ps.groups;
      p["similarity_samples"] = ps.similarity_samples;
      if (ps.mean_similarity) {
        p["mean_cosine_similarity"] = Sig6(*ps.mean_similarity);
      } else {
        p["mean_cosine_similarity"] = nullptr;
      }
      s["overlap_pairs"].push_back(std::move(p));
    }
    s["warnings"] = so.warnings;
    j["scenes"].push_back(std::move(s));
  }
  ordered_json hist;
  hist["bins"] = kBcsBins;
  hist["bin_width"] = 1.0 / kBcsBins;
  hist["counts"] = report.bcs_histogram;
  j["bcs_histogram"] = std::move(hist);
  j["similarity"] = report.similarity_status;
  ordered_json totals;
  totals["labels"] = report.total_labels;
  totals["groups"] = report.groups;
  totals["grouped_observations"] = report.grouped_observations;
  totals["tracks"] = report.tracks;
  j["totals"] = std::move(totals);
  return j.dump(2) + "\n";
}

std::string PruneReportJson(const PruneResult& result,
                            const LabelInventory& inv, const RunConfig& cfg) {
  ordered_json j;
  j["report"] = "prune";
  j["config"] = ConfigJson(cfg);
  j["total_labels"] = inv.labels.size();
  j["groups"] = inv.groups.size();
  j["deleted"] = result.row.deleted;
  j["remaining"] = result.row.remaining;
  j["tracks"] = result.row.tracks;
  std::map<std::string, size_t> removed_by_camera;
  for (const PruneDecision& d : result.decisions) {
    for (const std::string& cam : d.removed) ++removed_by_camera[cam];
  }
  j["deleted_by_camera"] = removed_by_camera;
  return j.dump(2) + "\n";
}

std::string SweepCsv(std::span<const SweepRow> rows) {
  std::string out = "tau,deleted,remaining,tracks\n";
  for (const SweepRow& r : rows) {
    out += Fixed6(r.tau) + "," + std::to_string(r.deleted) + "," +
           std::to_string(r.remaining) + "," + std::to_string(r.tracks) + "\n";
  }
  return out;
}

std::string DistanceSweepCsv(std::span<const DistanceSweepRow> rows) {
  std::string out = "t_dist,pruned_count,lost_ratio\n";
  for (const DistanceSweepRow& r : rows) {
    out += Fixed6(r.t_dist) + "," + std::to_string(r.pruned_count) + "," +
           Fixed6(r.lost_ratio) + "\n";
  }
  return out;
}

MultimodalReport BuildMultimodalReport(const Dataset& ds, const RunConfig& cfg,
                                       std::ostream& warnings) {
  MultimodalReport report;
  std::vector<size_t> lost(cfg.t_dist.size(), 0);
  std::vector<size_t> pruned(cfg.t_dist.size(), 0);
  size_t base_total = 0;

  for (const Scene& scene : ds.scenes) {
    for (const Frame& frame : scene.frames) {
      const auto* base = frame.DetectionSet(kFusionBaseline);
      const auto* lidar = frame.DetectionSet(kLidarOnly);
      if (!base || !lidar) {
        warnings << "warning: " << scene.scene_id << " frame "
                 << frame.timestamp_ns << " lacks a detection set; skipped\n";
        ++report.skipped_frames;
        continue;
      }
      if (base->empty()) {
        warnings << "warning: " << scene.scene_id << " frame "
                 << frame.timestamp_ns
                 << " has an empty baseline set; skipped\n";
        ++report.skipped_frames;
        continue;
      }
      FrameRedundancy fr;
      fr.scene_id = scene.scene_id;
      fr.timestamp_ns = frame.timestamp_ns;
      fr.n_base = base->size();
      fr.n_lidar = lidar->size();
      fr.rr = RedundancyRatio(*base, *lidar, cfg.theta);
      fr.matched_one_to_one = MatchBoxes(*base, *lidar, cfg.theta).pairs.size();
      double dist = 0.0;
      for (const Box3D& b : *base) dist += CentroidDistance(b);
      fr.mean_distance = dist / static_cast<double>(base->size());
      report.frames.push_back(fr);

      for (size_t i = 0; i < cfg.t_dist.size(); ++i) {
        const std::vector<Box3D> kept = DistancePrune(*lidar, cfg.t_dist[i]);
        pruned[i] += lidar->size() - kept.size();
        lost[i] += base->size() - CountCovered(*base, kept, cfg.theta);
      }
      base_total += base->size();
    }
  }
  if (report.frames.empty()) {
    throw ValidationError("no frame carries both '" +
                          std::string(kFusionBaseline) + "' and '" +
                          std::string(kLidarOnly) + "' detection sets");
  }
  for (size_t i = 0; i < cfg.t_dist.size(); ++i) {
    report.sweep.push_back({cfg.t_dist[i], pruned[i],
                            static_cast<double>(lost[i]) /
                                static_cast<double>(base_total)});
  }

  std::vector<double> rrs;
  for (const FrameRedundancy& fr : report.frames) rrs.push_back(fr.rr);
  report.split = cfg.rr_split ? *cfg.rr_split : Median(rrs);
  for (const FrameRedundancy& fr : report.frames) {
    (fr.rr > report.split ? report.high_distances : report.low_distances)
        .push_back(fr.mean_distance);
  }
  try {
    report.ttest = WelchTTest(report.high_distances, report.low_distances);
    report.ttest_status = "computed";
  } catch (const DomainError& e) {
    report.ttest_status = std::string("skipped: ") + e.what();
  }
  return report;
}

std::string FramesCsv(std::span<const FrameRedundancy> frames) {
  std::string out =
      "scene_id,timestamp_ns,n_base,n_lidar,rr,matched_one_to_one,"
      "mean_distance\n";
  for (const FrameRedundancy& f : frames) {
    out += f.scene_id + "," + std::to_string(f.timestamp_ns) + "," +
           std::to_string(f.n_base) + "," + std::to_string(f.n_lidar) + "," +
           Fixed6(f.rr) + "," + std::to_string(f.matched_one_to_one) + "," +
           Fixed6(f.mean_distance) + "\n";
  }
  return out;
}

std::string TTestJson(const MultimodalReport& report, const RunConfig& cfg) {
  ordered_json j;
  j["report"] = "welch_t_test";
  j["config"] = ConfigJson(cfg);
  j["samples"] = "per-frame mean centroid distance of baseline boxes";
  j["rr_split"] = Sig6(report.split);
  j["n_high"] = report.high_distances.size();
  j["n_low"] = report.low_distances.size();
  auto mean = [](const std::vector<double>& v) -> ordered_json {
    if (v.empty()) return nullptr;
    double s = 0.0;
    for (double x : v) s += x;
    return Sig6(s / static_cast<double>(v.size()));
  };
  j["mean_distance_high"] = mean(report.high_distances);
  j["mean_distance_low"] = mean(report.low_distances);
  j["status"] = report.ttest_status;
  if (report.ttest) {
    j["t"] = Sig6(report.ttest->t);
    j["df"] = Sig6(report.ttest->df);
    j["p_two_sided"] = Sig6(report.ttest->p_two_sided);
  } else {
    j["t"] = nullptr;
    j["df"] = nullptr;
    j["p_two_sided"] = nullptr;
  }
  j["skipped_frames"] = report.skipped_frames;
  return j.dump(2) + "\n";
}

}  // namespace avredux::cli
