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
#include <stdexcept>
#include <vector>

#include "avredux/error.hpp"
#include "avredux/synth.hpp"

namespace avredux::synth {

std::set<LabelKey> BruteForcePrune(const Dataset& ds,
                                   std::span<const OverlapGraph> graphs,
                                   double tau, LabelSource source) {
  if (graphs.size() != ds.scenes.size()) {
    throw std::invalid_argument("one overlap graph per scene is required");
  }
  std::set<LabelKey> kept;
  for (size_t s = 0; s < ds.scenes.size(); ++s) {
    const Scene& scene = ds.scenes[s];
    const OverlapGraph& graph = graphs[s];
    for (const Frame& frame : scene.frames) {
      for (const Annotation& ann : frame.annotations) {
        struct Seen {
          std::string camera;
          double bcs;
        };
        std::vector<Seen> seen;
        for (const CameraModel& cam : scene.cameras) {
          Box2D full;
          if (source == LabelSource::kNative2D) {
            if (!ann.boxes2d.contains(cam.name)) continue;
            full = ann.boxes2d.at(cam.name);
          } else {
            if (!ann.cuboid) continue;
            const auto proj = ProjectCuboid(*ann.cuboid, cam);
            if (!proj) continue;
            full = proj->full;
          }
          const Box2D clipped = ClipToImage(full, cam.width, cam.height);
          if (clipped.Area() > 0.0) seen.push_back({cam.name, Bcs(full, clipped)});
        }

        // Members are the cameras with at least one overlapping partner.
        std::vector<bool> member(seen.size(), false);
        size_t members = 0;
        for (size_t i = 0; i < seen.size(); ++i) {
          for (size_t j = 0; j < seen.size(); ++j) {
            if (i != j && graph.Connected(seen[i].camera, seen[j].camera)) {
              member[i] = true;
            }
          }
          members += member[i] ? 1 : 0;
        }

        double best = -1.0;
        std::string best_camera;
        if (members >= 2) {
          for (size_t i = 0; i < seen.size(); ++i) {
            if (!member[i]) continue;
            if (seen[i].bcs > best ||
                (seen[i].bcs == best && seen[i].camera < best_camera)) {
              best = seen[i].bcs;
              best_camera = seen[i].camera;
            }
          }
        }
        for (size_t i = 0; i < seen.size(); ++i) {
          const bool removed = members >= 2 && member[i] &&
                               seen[i].camera != best_camera &&
                               best - seen[i].bcs > tau;
          if (!removed) {
            kept.insert({scene.scene_id, frame.timestamp_ns, seen[i].camera,
                         ann.track_id});
          }
        }
      }
    }
  }
  return kept;
}

std::set<LabelKey> BruteForcePrune(const Dataset& ds, const OverlapGraph& graph,
                                   double tau, LabelSource source) {
  const std::vector<OverlapGraph> graphs(ds.scenes.size(), graph);
  return BruteForcePrune(ds, graphs, tau, source);
}

double BruteForceRr(std::span<const Box3D> base, std::span<const Box3D> lidar,
                    double theta) {
  if (base.empty()) {
    throw DomainError("redundancy ratio undefined for an empty baseline set");
  }
  size_t covered = 0;
  for (size_t i = 0; i < base.size(); ++i) {
    bool hit = false;
    for (size_t j = 0; j < lidar.size(); ++j) {
      if (Iou3d(base[i], lidar[j]) >= theta) hit = true;
    }
    covered += hit ? 1 : 0;
  }
  return static_cast<double>(covered) / static_cast<double>(base.size());
}

}  // namespace avredux::synth
