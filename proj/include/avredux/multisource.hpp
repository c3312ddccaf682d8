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

#ifndef AVREDUX_MULTISOURCE_HPP_
#define AVREDUX_MULTISOURCE_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "avredux/geometry.hpp"
#include "avredux/ingest.hpp"
#include "avredux/overlap.hpp"

namespace avredux {

struct Observation {
  std::string camera;
  Box2D full;
  Box2D clipped;
  double bcs = 0.0;
};

// All observations of one tracked instance across overlapping cameras in a
// single frame. Observations are ordered by camera name.
struct RedundancyGroup {
  std::string scene_id;
  std::int64_t timestamp_ns = 0;
  std::string track_id;
  std::vector<Observation> observations;
};

std::vector<RedundancyGroup> FormGroups(const Scene& scene, const Frame& frame,
                                        const OverlapGraph& graph,
                                        LabelSource source);

// Global pruning threshold with optional per-camera-pair overrides.
class TauPolicy {
 public:
  TauPolicy() = default;
  explicit TauPolicy(double global);

  double global() const { return global_; }
  void set_global(double tau);
  void SetPairOverride(const std::string& a, const std::string& b, double tau);
  const std::map<std::pair<std::string, std::string>, double>& overrides()
      const {
    return overrides_;
  }

  double TauFor(const std::string& a, const std::string& b) const;

 private:
  double global_ = 0.5;
  std::map<std::pair<std::string, std::string>, double> overrides_;
};

struct PruneDecision {
  std::string track_id;
  std::vector<std::string> kept;     // cameras
  std::vector<std::string> removed;  // cameras
  double tau = 0.0;
};

// Keeps the highest-BCS observation (ties: smallest camera name) and removes
// every observation whose BCS trails it by more than the threshold of its
// camera pair with the anchor. For two observations this is exactly the
// max - min > tau rule.
PruneDecision PruneGroup(const RedundancyGroup& group, const TauPolicy& tau);
PruneDecision PruneGroup(const RedundancyGroup& group, double tau);

struct SweepRow {
  double tau = 0.0;
  std::size_t deleted = 0;
  std::size_t remaining = 0;
  std::size_t tracks = 0;

  bool operator==(const SweepRow&) const = default;
};

// Camera-level labels of a dataset and the redundancy groups among them.
// Built once and reused across thresholds.
struct LabelInventory {
  std::vector<LabelKey> labels;  // sorted
  std::vector<RedundancyGroup> groups;
};

// `graphs` holds one overlap graph per scene, in dataset order.
LabelInventory BuildInventory(const Dataset& ds,
                              std::span<const OverlapGraph> graphs,
                              LabelSource source);

struct PruneResult {
  std::set<LabelKey> kept;
  SweepRow row;
  std::vector<PruneDecision> decisions;
};

PruneResult PruneInventory(const LabelInventory& inv, const TauPolicy& tau);

PruneResult PruneDataset(const Dataset& ds,
                         std::span<const OverlapGraph> graphs,
                         const TauPolicy& tau, LabelSource source);
// Applies the same graph to every scene.
PruneResult PruneDataset(const Dataset& ds, const OverlapGraph& graph,
                         const TauPolicy& tau, LabelSource source);

// One row per threshold in input order. Per-pair overrides of `base` are kept
// while its global threshold is swept.
std::vector<SweepRow> SweepTau(const LabelInventory& inv,
                               std::span<const double> taus,
                               const TauPolicy& base = TauPolicy());
std::vector<SweepRow> SweepTau(const Dataset& ds, const OverlapGraph& graph,
                               std::span<const double> taus,
                               LabelSource source);

// Column slice of `img` showing the ego-frame arc [arc_start, arc_end]
// (degrees) as seen by `cam`. Throws DomainError when the arc does not
// intersect the camera's field of view.
GrayImage CropOverlap(const GrayImage& img, const CameraModel& cam,
                      double arc_start, double arc_end);

// Inclusive pixel-column range used by CropOverlap.
std::pair<int, int> OverlapColumns(const CameraModel& cam, double arc_start,
                                   double arc_end);

inline constexpr int kSimilarityGrid = 64;

// Row-major intensities sampled at pixel centers of a width x height grid.
std::vector<double> ResampleBilinear(const GrayImage& img, int width,
                                     int height);

// Cosine similarity of both crops after bilinear resampling to a 64x64 grid.
double CosineSimilarity(const GrayImage& a, const GrayImage& b);

}  // namespace avredux

#endif  // AVREDUX_MULTISOURCE_HPP_
