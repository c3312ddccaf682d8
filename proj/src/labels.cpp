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
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "avredux/error.hpp"
#include "avredux/ingest.hpp"

namespace avredux {
namespace {

std::vector<const Annotation*> ByTrackId(const Frame& frame) {
  std::vector<const Annotation*> out;
  out.reserve(frame.annotations.size());
  for (const Annotation& ann : frame.annotations) out.push_back(&ann);
  std::sort(out.begin(), out.end(),
            [](const Annotation* a, const Annotation* b) {
              return a->track_id < b->track_id;
            });
  return out;
}

std::vector<const CameraModel*> ByName(const Scene& scene) {
  std::vector<const CameraModel*> out;
  for (const CameraModel& cam : scene.cameras) out.push_back(&cam);
  std::sort(out.begin(), out.end(),
            [](const CameraModel* a, const CameraModel* b) {
              return a->name < b->name;
            });
  return out;
}

}  // namespace

std::string_view ToString(LabelSource source) {
  switch (source) {
    case LabelSource::kNative2D:
      return "native-2d";
    case LabelSource::kProjected3D:
      return "projected-3d";
  }
  return "unknown";
}

LabelSource ParseLabelSource(std::string_view text) {
  if (text == "native-2d") return LabelSource::kNative2D;
  if (text == "projected-3d") return LabelSource::kProjected3D;
  throw ValidationError("unknown label source '" + std::string(text) + "'");
}

std::optional<ProjectedBox> Observe(const Annotation& ann,
                                    const CameraModel& cam,
                                    LabelSource source) {
  std::optional<ProjectedBox> obs;
  if (source == LabelSource::kNative2D) {
    auto it = ann.boxes2d.find(cam.name);
    if (it == ann.boxes2d.end()) return std::nullopt;
    obs = ProjectedBox{it->second,
                       ClipToImage(it->second, cam.width, cam.height)};
  } else {
    if (!ann.cuboid) return std::nullopt;
    obs = ProjectCuboid(*ann.cuboid, cam);
  }
  if (!obs || !(obs->clipped.Area() > 0.0)) return std::nullopt;
  return obs;
}

std::vector<LabelKey> EnumerateLabels(const Dataset& ds, LabelSource source) {
  std::vector<LabelKey> keys;
  for (const Scene& scene : ds.scenes) {
    const auto cameras = ByName(scene);
    for (const Frame& frame : scene.frames) {
      const auto anns = ByTrackId(frame);
      for (const CameraModel* cam : cameras) {
        for (const Annotation* ann : anns) {
          if (Observe(*ann, *cam, source)) {
            keys.push_back(
                {scene.scene_id, frame.timestamp_ns, cam->name, ann->track_id});
          }
        }
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::string FormatLabelLine(int class_id, const Box2D& clipped,
                            const CameraModel& cam) {
  const double w = cam.width;
  const double h = cam.height;
  const double values[4] = {0.5 * (clipped.x0 + clipped.x1) / w,
                            0.5 * (clipped.y0 + clipped.y1) / h,
                            (clipped.x1 - clipped.x0) / w,
                            (clipped.y1 - clipped.y0) / h};
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::logic_error("normalized label coordinate outside [0, 1]");
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f", class_id,
                values[0], values[1], values[2], values[3]);
  return buf;
}

size_t EmitLabels(const Dataset& ds, const std::set<LabelKey>& kept,
                  LabelSource source, const std::filesystem::path& out_dir) {
  size_t files = 0;
  size_t resolved = 0;
  LabelKey key;
  for (const Scene& scene : ds.scenes) {
    key.scene_id = scene.scene_id;
    const auto cameras = ByName(scene);
    for (const CameraModel* cam : cameras) {
      key.camera = cam->name;
      const std::filesystem::path dir = out_dir / scene.scene_id / cam->name;
      std::filesystem::create_directories(dir);
      for (const Frame& frame : scene.frames) {
        key.timestamp_ns = frame.timestamp_ns;
        std::string body;
        for (const Annotation* ann : ByTrackId(frame)) {
          key.track_id = ann->track_id;
          if (!kept.contains(key)) continue;
          const auto obs = Observe(*ann, *cam, source);
          if (!obs) {
            throw std::invalid_argument("kept label " + scene.scene_id + "/" +
                                        cam->name + "/" + ann->track_id +
                                        " has no 2D box");
          }
          body += FormatLabelLine(ds.ClassId(ann->category), obs->clipped,
                                  *cam);
          body += '\n';
          ++resolved;
        }
        const auto path = dir / (std::to_string(frame.timestamp_ns) + ".txt");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        out << body;
        ++files;
      }
    }
  }
  if (resolved != kept.size()) {
    throw std::invalid_argument("kept set contains labels absent from the "
                                "dataset");
  }
  return files;
}

}  // namespace avredux
