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

#include "avredux/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "avredux/error.hpp"

namespace avredux::synth {
namespace {

constexpr int kImageWidth = 1600;
constexpr int kImageHeight = 900;
constexpr std::int64_t kFirstTimestampNs = 1'000'000'000;
constexpr std::int64_t kFramePeriodNs = 100'000'000;
constexpr int kMaxPlacementAttempts = 10000;

const std::vector<std::string> kClasses = {"car", "pedestrian", "truck"};

CameraModel LevelCamera(std::string name, double yaw_deg, double fov_deg) {
  CameraModel cam;
  cam.name = std::move(name);
  cam.width = kImageWidth;
  cam.height = kImageHeight;
  cam.fx = 0.5 * kImageWidth / std::tan(0.5 * fov_deg * std::numbers::pi / 180);
  cam.fy = cam.fx;
  cam.cx = 0.5 * kImageWidth;
  cam.cy = 0.5 * kImageHeight;
  cam.rotation = LevelCameraRotation(yaw_deg);
  return cam;
}

std::vector<CameraModel> RingCameras(const SynthParams& p) {
  std::vector<CameraModel> cams;
  for (int i = 0; i < p.n_cameras; ++i) {
    const double yaw = p.camera_yaw_offsets.empty()
                           ? WrapDegrees(360.0 * i / p.n_cameras)
                           : p.camera_yaw_offsets[i];
    char name[32];
    std::snprintf(name, sizeof(name), "CAM_%02d", i);
    cams.push_back(LevelCamera(name, yaw, p.camera_fov));
  }
  return cams;
}

std::string TrackId(int frame, int object) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "t%05d_%04d", frame, object);
  return buf;
}

struct Placed {
  Cuboid3D cuboid;
  double bearing_deg;
  double footprint_radius;
};

}  // namespace

Xorshift64Star::Xorshift64Star(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  state_ = z ^ (z >> 31);
  if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t Xorshift64Star::Next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

double Xorshift64Star::Uniform() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

double Xorshift64Star::Uniform(double lo, double hi) {
  return lo + (hi - lo) * Uniform();
}

std::vector<CameraModel> NuScenesRingCameras() {
  return {
      LevelCamera("CAM_FRONT", 0.0, 70.0),
      LevelCamera("CAM_FRONT_RIGHT", -55.0, 70.0),
      LevelCamera("CAM_BACK_RIGHT", -110.0, 70.0),
      LevelCamera("CAM_BACK", 180.0, 110.0),
      LevelCamera("CAM_BACK_LEFT", 110.0, 70.0),
      LevelCamera("CAM_FRONT_LEFT", 55.0, 70.0),
  };
}

void SynthParams::Validate() const {
  if (n_frames < 1) throw ValidationError("n_frames must be >= 1");
  if (n_objects < 0) throw ValidationError("n_objects must be >= 0");
  if (rig == Rig::kRing) {
    if (n_cameras < 0) throw ValidationError("n_cameras must be >= 0");
    if (!(camera_fov > 0.0 && camera_fov < 180.0)) {
      throw ValidationError("camera_fov must lie in (0, 180)");
    }
    if (!camera_yaw_offsets.empty() &&
        camera_yaw_offsets.size() != static_cast<size_t>(n_cameras)) {
      throw ValidationError("camera_yaw_offsets must list one yaw per camera");
    }
  }
  const auto [r_min, r_max] = radial_range;
  const auto [s_min, s_max] = size_range;
  if (!(r_min > 0.0 && r_min <= r_max)) {
    throw ValidationError("radial_range must satisfy 0 < min <= max");
  }
  if (!(s_min > 0.0 && s_min <= s_max)) {
    throw ValidationError("size_range must satisfy 0 < min <= max");
  }
  if (!(detection_noise >= 0.0)) {
    throw ValidationError("detection_noise must be >= 0");
  }
  if (!(drop_rate >= 0.0 && drop_rate <= 1.0)) {
    throw ValidationError("drop_rate must lie in [0, 1]");
  }
  // Every corner of a visible object must stay in front of the near plane so
  // that its projected hull contains the projected center.
  const double widest = rig == Rig::kNuScenes ? 110.0 : camera_fov;
  const double depth = r_min * std::cos(0.5 * widest * std::numbers::pi / 180);
  if (!(depth > 0.5 * std::sqrt(3.0) * s_max + kNearPlane)) {
    throw ValidationError(
        "radial_range minimum too small for the object size and camera FoV");
  }
}

std::pair<Dataset, GroundTruth> GenerateScene(const SynthParams& p) {
  p.Validate();
  Xorshift64Star rng(p.seed);

  Scene scene;
  scene.scene_id = p.scene_id;
  scene.cameras =
      p.rig == Rig::kNuScenes ? NuScenesRingCameras() : RingCameras(p);
  std::vector<ViewArc> arcs;
  for (const CameraModel& cam : scene.cameras) arcs.push_back(MakeViewArc(cam));

  GroundTruth truth;
  std::size_t total = 0;
  std::size_t retained_total = 0;

  for (int f = 0; f < p.n_frames; ++f) {
    Frame frame;
    frame.timestamp_ns = kFirstTimestampNs + f * kFramePeriodNs;
    std::vector<Placed> placed;
    std::vector<Box3D> baseline;
    std::vector<Box3D> lidar;

    for (int i = 0; i < p.n_objects; ++i) {
      Placed obj{};
      bool ok = false;
      for (int attempt = 0; attempt < kMaxPlacementAttempts && !ok; ++attempt) {
        const double bearing = rng.Uniform(-180.0, 180.0);
        const double radius = rng.Uniform(p.radial_range.first,
                                          p.radial_range.second);
        const double length = rng.Uniform(p.size_range.first,
                                          p.size_range.second);
        const double width = rng.Uniform(p.size_range.first,
                                         p.size_range.second);
        const double height = rng.Uniform(p.size_range.first,
                                          p.size_range.second);
        const double yaw = rng.Uniform(-std::numbers::pi, std::numbers::pi);
        const double b = bearing * std::numbers::pi / 180.0;
        obj.cuboid.center = Vec3(radius * std::cos(b), radius * std::sin(b), 0);
        obj.cuboid.size = Vec3(length, width, height);
        obj.cuboid.yaw = yaw;
        obj.bearing_deg = bearing;
        obj.footprint_radius = 0.5 * std::hypot(length, width);
        ok = std::none_of(placed.begin(), placed.end(), [&](const Placed& q) {
          const double gap = (q.cuboid.center - obj.cuboid.center).norm();
          return gap < q.footprint_radius + obj.footprint_radius;
        });
      }
      if (!ok) {
        throw ValidationError("cannot place objects without overlap; reduce "
                              "n_objects or enlarge radial_range");
      }
      placed.push_back(obj);

      Annotation ann;
      ann.track_id = TrackId(f, i);
      ann.category = kClasses[static_cast<size_t>(rng.Uniform() * 3.0)];
      ann.cuboid = obj.cuboid;
      ExpectedGroup group{frame.timestamp_ns, ann.track_id, {}};
      for (size_t c = 0; c < scene.cameras.size(); ++c) {
        if (!ArcContains(arcs[c], obj.bearing_deg)) continue;
        const auto proj = ProjectCuboid(obj.cuboid, scene.cameras[c]);
        if (!proj) throw std::logic_error("visible object failed to project");
        ann.boxes2d.emplace(scene.cameras[c].name, proj->full);
        group.cameras.push_back(scene.cameras[c].name);
      }
      std::sort(group.cameras.begin(), group.cameras.end());
      if (group.cameras.size() >= 2) {
        truth.expected_groups.push_back(std::move(group));
      }
      truth.expected_distances[ann.track_id] = obj.cuboid.center.norm();

      Box3D box;
      static_cast<Cuboid3D&>(box) = obj.cuboid;
      box.score = rng.Uniform(0.5, 1.0);
      baseline.push_back(box);
      const bool dropped = rng.Uniform() < p.drop_rate;
      const double dx = rng.Uniform(-1.0, 1.0) * p.detection_noise;
      const double dy = rng.Uniform(-1.0, 1.0) * p.detection_noise;
      if (!dropped) {
        Box3D seen = box;
        seen.center += Vec3(dx, dy, 0.0);
        lidar.push_back(seen);
      }
      // Annotations without any camera view still carry the cuboid.
      frame.annotations.push_back(std::move(ann));
    }

    total += baseline.size();
    retained_total += lidar.size();
    truth.expected_frame_rr.push_back(
        baseline.empty() ? std::nullopt
                         : std::optional<double>(
                               static_cast<double>(lidar.size()) /
                               static_cast<double>(baseline.size())));
    frame.detection_sets.emplace(std::string(kFusionBaseline),
                                 std::move(baseline));
    frame.detection_sets.emplace(std::string(kLidarOnly), std::move(lidar));
    scene.frames.push_back(std::move(frame));
  }
  if (total > 0) {
    truth.expected_rr =
        static_cast<double>(retained_total) / static_cast<double>(total);
  }

  std::sort(truth.expected_groups.begin(), truth.expected_groups.end(),
            [](const ExpectedGroup& a, const ExpectedGroup& b) {
              return std::tie(a.timestamp_ns, a.track_id) <
                     std::tie(b.timestamp_ns, b.track_id);
            });

  Dataset ds;
  ds.class_map = kClasses;
  ds.scenes.push_back(std::move(scene));
  return {std::move(ds), std::move(truth)};
}

}  // namespace avredux::synth
