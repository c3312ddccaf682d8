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

#include "avredux/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "avredux/error.hpp"

namespace avredux {
namespace {

double Mod360(double deg) {
  double m = std::fmod(deg, 360.0);
  if (m < 0.0) m += 360.0;
  return m >= 360.0 ? 0.0 : m;
}

OverlapPair MakePair(std::string a, std::string b, const ArcOverlap& ov) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b), ov.degrees, ov.start, ov.end};
}

}  // namespace

ViewArc MakeViewArc(const CameraModel& cam) {
  return {cam.name, YawCenter(cam), 0.5 * HorizontalFov(cam)};
}

bool ArcContains(const ViewArc& arc, double angle_deg) {
  return std::abs(WrapDegrees(angle_deg - arc.center)) < arc.half_width;
}

std::optional<ArcOverlap> OverlapArc(const ViewArc& a, const ViewArc& b) {
  // Order the arguments so that the result does not depend on it.
  const bool swap = std::tie(b.center, b.half_width, b.camera) <
                    std::tie(a.center, a.half_width, a.camera);
  const ViewArc& p = swap ? b : a;
  const ViewArc& q = swap ? a : b;

  // Unroll so that p starts at 0; q starts at d in [0, 360).
  const double p_start = Mod360(p.center - p.half_width);
  const double p_len = 2.0 * p.half_width;
  const double d = Mod360(q.center - q.half_width - p_start);
  const double q_len = 2.0 * q.half_width;

  // Piece 1: [d, d + q_len] within [0, p_len]. Piece 2: q wraps past 360.
  const double first = d < p_len ? std::min(d + q_len, p_len) - d : 0.0;
  const double second =
      d + q_len > 360.0 ? std::min(d + q_len - 360.0, p_len) : 0.0;
  if (!(first > 0.0) && !(second > 0.0)) return std::nullopt;

  ArcOverlap out;
  out.split = first > 0.0 && second > 0.0;
  double rel_start;
  if (first >= second) {
    out.degrees = first;
    rel_start = d;
  } else {
    out.degrees = second;
    rel_start = 0.0;
  }
  out.start = WrapDegrees(p_start + rel_start);
  out.end = out.start + out.degrees;
  return out;
}

const OverlapPair* OverlapGraph::Find(std::string_view a,
                                      std::string_view b) const {
  if (b < a) std::swap(a, b);
  for (const OverlapPair& p : pairs) {
    if (p.camera_a == a && p.camera_b == b) return &p;
  }
  return nullptr;
}

OverlapGraph BuildOverlapGraph(std::span<const CameraModel> cameras,
                               double min_overlap_deg) {
  if (cameras.size() < 2) {
    throw ValidationError("overlap graph needs at least two cameras");
  }
  if (!(min_overlap_deg >= 0.0)) {
    throw ValidationError("min_overlap must be >= 0");
  }
  std::vector<ViewArc> arcs;
  arcs.reserve(cameras.size());
  for (const CameraModel& cam : cameras) arcs.push_back(MakeViewArc(cam));

  OverlapGraph graph;
  for (size_t i = 0; i < arcs.size(); ++i) {
    for (size_t j = i + 1; j < arcs.size(); ++j) {
      const auto ov = OverlapArc(arcs[i], arcs[j]);
      if (!ov || ov->degrees < min_overlap_deg) continue;
      if (ov->split) {
        graph.warnings.push_back("cameras " + arcs[i].camera + " and " +
                                 arcs[j].camera +
                                 " intersect on both sides; kept the larger "
                                 "arc");
      }
      graph.pairs.push_back(MakePair(arcs[i].camera, arcs[j].camera, *ov));
    }
  }
  std::sort(graph.pairs.begin(), graph.pairs.end(),
            [](const OverlapPair& x, const OverlapPair& y) {
              return std::tie(x.camera_a, x.camera_b) <
                     std::tie(y.camera_a, y.camera_b);
            });
  return graph;
}

OverlapGraph PresetNuScenes() {
  OverlapGraph graph;
  graph.pairs = {
      {"CAM_BACK", "CAM_BACK_LEFT", 20.0, 125.0, 145.0},
      {"CAM_BACK", "CAM_BACK_RIGHT", 20.0, -145.0, -125.0},
      {"CAM_BACK_LEFT", "CAM_FRONT_LEFT", 15.0, 75.0, 90.0},
      {"CAM_BACK_RIGHT", "CAM_FRONT_RIGHT", 15.0, -90.0, -75.0},
      {"CAM_FRONT", "CAM_FRONT_LEFT", 15.0, 20.0, 35.0},
      {"CAM_FRONT", "CAM_FRONT_RIGHT", 15.0, -35.0, -20.0},
  };
  return graph;
}

}  // namespace avredux
