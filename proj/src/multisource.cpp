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

#include "avredux/multisource.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <string>

#include "avredux/error.hpp"

namespace avredux {
namespace {

void CheckTau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ValidationError("tau must lie in [0, 1], got " +
                          std::to_string(tau));
  }
}

std::pair<std::string, std::string> PairKey(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace

TauPolicy::TauPolicy(double global) { set_global(global); }

void TauPolicy::set_global(double tau) {
  CheckTau(tau);
  global_ = tau;
}

void TauPolicy::SetPairOverride(const std::string& a, const std::string& b,
                                double tau) {
  CheckTau(tau);
  overrides_[PairKey(a, b)] = tau;
}

double TauPolicy::TauFor(const std::string& a, const std::string& b) const {
  if (overrides_.empty()) return global_;
  auto it = overrides_.find(PairKey(a, b));
  return it == overrides_.end() ? global_ : it->second;
}

std::vector<RedundancyGroup> FormGroups(const Scene& scene, const Frame& frame,
                                        const OverlapGraph& graph,
                                        LabelSource source) {
  std::vector<const CameraModel*> cameras;
  for (const CameraModel& cam : scene.cameras) cameras.push_back(&cam);
  std::sort(cameras.begin(), cameras.end(),
            [](const CameraModel* a, const CameraModel* b) {
              return a->name < b->name;
            });
  std::vector<const Annotation*> anns;
  for (const Annotation& ann : frame.annotations) anns.push_back(&ann);
  std::sort(anns.begin(), anns.end(),
            [](const Annotation* a, const Annotation* b) {
              return a->track_id < b->track_id;
            });

  std::vector<RedundancyGroup> groups;
  std::vector<Observation> seen;
  for (const Annotation* ann : anns) {
    seen.clear();
    for (const CameraModel* cam : cameras) {
      auto obs = Observe(*ann, *cam, source);
      if (!obs) continue;
      const double score = Bcs(obs->full, obs->clipped);
      seen.push_back({cam->name, obs->full, obs->clipped, score});
    }
    if (seen.size() < 2) continue;

    RedundancyGroup group;
    for (size_t i = 0; i < seen.size(); ++i) {
      bool linked = false;
      for (size_t j = 0; j < seen.size() && !linked; ++j) {
        linked = i != j && graph.Connected(seen[i].camera, seen[j].camera);
      }
      if (linked) group.observations.push_back(seen[i]);
    }
    if (group.observations.size() < 2) continue;
    group.scene_id = scene.scene_id;
    group.timestamp_ns = frame.timestamp_ns;
    group.track_id = ann->track_id;
    groups.push_back(std::move(group));
  }
  return groups;
}

PruneDecision PruneGroup(const RedundancyGroup& group, const TauPolicy& tau) {
  PruneDecision decision;
  decision.track_id = group.track_id;
  decision.tau = tau.global();
  if (group.observations.empty()) return decision;

  // Observations are in camera-name order, so the first maximum wins ties.
  size_t anchor = 0;
  for (size_t i = 1; i < group.observations.size(); ++i) {
    if (group.observations[i].bcs > group.observations[anchor].bcs) anchor = i;
  }
  const Observation& best = group.observations[anchor];
  for (size_t i = 0; i < group.observations.size(); ++i) {
    const Observation& obs = group.observations[i];
    const bool drop = i != anchor &&
                      best.bcs - obs.bcs > tau.TauFor(best.camera, obs.camera);
    (drop ? decision.removed : decision.kept).push_back(obs.camera);
  }
  return decision;
}

PruneDecision PruneGroup(const RedundancyGroup& group, double tau) {
  return PruneGroup(group, TauPolicy(tau));
}

LabelInventory BuildInventory(const Dataset& ds,
                              std::span<const OverlapGraph> graphs,
                              LabelSource source) {
  if (graphs.size() != ds.scenes.size()) {
    throw std::invalid_argument("one overlap graph per scene is required");
  }
  LabelInventory inv;
  inv.labels = EnumerateLabels(ds, source);
  for (size_t s = 0; s < ds.scenes.size(); ++s) {
    const Scene& scene = ds.scenes[s];
    for (const Frame& frame : scene.frames) {
      auto groups = FormGroups(scene, frame, graphs[s], source);
      std::move(groups.begin(), groups.end(), std::back_inserter(inv.groups));
    }
  }
  return inv;
}

PruneResult PruneInventory(const LabelInventory& inv, const TauPolicy& tau) {
  PruneResult result;
  std::set<LabelKey> removed;
  for (const RedundancyGroup& group : inv.groups) {
    PruneDecision d = PruneGroup(group, tau);
    for (const std::string& camera : d.removed) {
      removed.insert(
          {group.scene_id, group.timestamp_ns, camera, group.track_id});
    }
    result.decisions.push_back(std::move(d));
  }

  std::set<std::pair<std::string, std::string>> tracks;
  for (const LabelKey& key : inv.labels) {
    if (removed.contains(key)) continue;
    result.kept.insert(result.kept.end(), key);
    tracks.emplace(key.scene_id, key.track_id);
  }
  result.row.tau = tau.global();
  result.row.deleted = inv.labels.size() - result.kept.size();
  result.row.remaining = result.kept.size();
  result.row.tracks = tracks.size();
  return result;
}

PruneResult PruneDataset(const Dataset& ds,
                         std::span<const OverlapGraph> graphs,
                         const TauPolicy& tau, LabelSource source) {
  return PruneInventory(BuildInventory(ds, graphs, source), tau);
}

PruneResult PruneDataset(const Dataset& ds, const OverlapGraph& graph,
                         const TauPolicy& tau, LabelSource source) {
  const std::vector<OverlapGraph> graphs(ds.scenes.size(), graph);
  return PruneDataset(ds, graphs, tau, source);
}

std::vector<SweepRow> SweepTau(const LabelInventory& inv,
                               std::span<const double> taus,
                               const TauPolicy& base) {
  if (taus.empty()) throw ValidationError("tau sweep needs at least one tau");
  std::vector<SweepRow> rows;
  rows.reserve(taus.size());
  for (double tau : taus) {
    TauPolicy policy = base;
    policy.set_global(tau);
    rows.push_back(PruneInventory(inv, policy).row);
  }
  return rows;
}

std::vector<SweepRow> SweepTau(const Dataset& ds, const OverlapGraph& graph,
                               std::span<const double> taus,
                               LabelSource source) {
  const std::vector<OverlapGraph> graphs(ds.scenes.size(), graph);
  return SweepTau(BuildInventory(ds, graphs, source), taus);
}

}  // namespace avredux
