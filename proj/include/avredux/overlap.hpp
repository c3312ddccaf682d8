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

#ifndef AVREDUX_OVERLAP_HPP_
#define AVREDUX_OVERLAP_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avredux/geometry.hpp"

namespace avredux {

inline constexpr double kDefaultMinOverlapDeg = 1.0;

// Angular interval covered by one camera on the ego viewing circle.
struct ViewArc {
  std::string camera;
  double center = 0.0;      // degrees, ego yaw
  double half_width = 0.0;  // degrees, in (0, 180)
};

ViewArc MakeViewArc(const CameraModel& cam);

struct ArcOverlap {
  double degrees = 0.0;
  // Ego-frame arc [start, end] in degrees; start in [-180, 180) and
  // end = start + degrees, so end may exceed 180.
  double start = 0.0;
  double end = 0.0;
  // Both ends of the arcs intersect (combined width above 360 degrees); the
  // larger piece is reported.
  bool split = false;
};

// Circular interval intersection. nullopt when the arcs share no positive
// angular extent.
std::optional<ArcOverlap> OverlapArc(const ViewArc& a, const ViewArc& b);

// True when `angle_deg` lies strictly inside the arc.
bool ArcContains(const ViewArc& arc, double angle_deg);

struct OverlapPair {
  std::string camera_a;  // camera_a < camera_b
  std::string camera_b;
  double overlap_degrees = 0.0;
  double arc_start = 0.0;
  double arc_end = 0.0;
};

struct OverlapGraph {
  std::vector<OverlapPair> pairs;  // sorted by (camera_a, camera_b)
  std::vector<std::string> warnings;

  const OverlapPair* Find(std::string_view a, std::string_view b) const;
  bool Connected(std::string_view a, std::string_view b) const {
    return Find(a, b) != nullptr;
  }
};

// All unordered camera pairs with overlap >= min_overlap_deg (and > 0).
OverlapGraph BuildOverlapGraph(std::span<const CameraModel> cameras,
                               double min_overlap_deg = kDefaultMinOverlapDeg);

// The six fixed nuScenes pairs (15/15/15/15/20/20 degrees). Arc bounds follow
// the nominal rig: fronts at 0 and +/-55 degrees with 70 degree FoV, rear
// sides at +/-110 degrees with 70 degree FoV, rear at 180 with 110 degrees.
OverlapGraph PresetNuScenes();

}  // namespace avredux

#endif  // AVREDUX_OVERLAP_HPP_
