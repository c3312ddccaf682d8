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

#ifndef AVREDUX_SYNTH_HPP_
#define AVREDUX_SYNTH_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "avredux/geometry.hpp"
#include "avredux/ingest.hpp"
#include "avredux/overlap.hpp"

namespace avredux::synth {

// xorshift64* generator. With state s (never zero):
//   s ^= s >> 12;  s ^= s << 25;  s ^= s >> 27;  out = s * 0x2545F4914F6CDD1D
// The seed is mixed through one splitmix64 step:
//   z = seed + 0x9E3779B97F4A7C15
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   s = z ^ (z >> 31)   (replaced by 0x9E3779B97F4A7C15 if zero)
// Doubles in [0, 1) take the top 53 bits of the output.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed);

  std::uint64_t Next();
  double Uniform();                       // [0, 1)
  double Uniform(double lo, double hi);  // [lo, hi)

 private:
  std::uint64_t state_;
};

enum class Rig {
  kRing,      // n_cameras at camera_yaw_offsets (or evenly spaced)
  kNuScenes,  // six cameras reproducing the nuScenes overlap layout
};

struct SynthParams {
  std::uint64_t seed = 0;
  Rig rig = Rig::kRing;
  int n_cameras = 6;
  double camera_fov = 70.0;                 // degrees
  std::vector<double> camera_yaw_offsets;  // degrees; empty = evenly spaced
  int n_frames = 1;
  int n_objects = 10;  // per frame
  std::pair<double, double> radial_range{12.0, 60.0};
  std::pair<double, double> size_range{1.0, 4.0};
  double detection_noise = 0.0;  // meters, uniform jitter of lidar centers
  double drop_rate = 0.0;        // fraction of objects missing from lidar set
  std::string scene_id = "synth";

  // Throws ValidationError for inconsistent parameters.
  void Validate() const;
};

struct ExpectedGroup {
  std::int64_t timestamp_ns = 0;
  std::string track_id;
  std::vector<std::string> cameras;  // sorted

  bool operator==(const ExpectedGroup&) const = default;
};

struct GroundTruth {
  std::vector<ExpectedGroup> expected_groups;
  std::map<std::string, double> expected_distances;  // track id -> meters
  // Pooled over frames; nullopt when no objects were generated.
  std::optional<double> expected_rr;
  std::vector<std::optional<double>> expected_frame_rr;
};

// Frames are 100 ms apart. Cameras sit at the ego origin, level with the
// ground; objects are placed on the ground plane without BEV overlap.
// Native 2D labels are the unclipped projected hulls, present exactly for the
// cameras whose view arc contains the object bearing. Detection sets:
// fusion_baseline holds the exact boxes, lidar_only the boxes that were not
// dropped, with their centers jittered.
std::pair<Dataset, GroundTruth> GenerateScene(const SynthParams& p);

// The six-camera rig with nuScenes-style names and overlaps.
std::vector<CameraModel> NuScenesRingCameras();

// Reference pruning written as a literal enumeration of the rule, without
// reusing the multisource module.
std::set<LabelKey> BruteForcePrune(const Dataset& ds,
                                   std::span<const OverlapGraph> graphs,
                                   double tau, LabelSource source);
std::set<LabelKey> BruteForcePrune(const Dataset& ds, const OverlapGraph& graph,
                                   double tau, LabelSource source);

// Exhaustive double loop over all base/lidar pairs.
double BruteForceRr(std::span<const Box3D> base, std::span<const Box3D> lidar,
                    double theta);

}  // namespace avredux::synth

#endif  // AVREDUX_SYNTH_HPP_
