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

#ifndef AVREDUX_INGEST_HPP_
#define AVREDUX_INGEST_HPP_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avredux/geometry.hpp"

namespace avredux {

inline constexpr std::string_view kLidarOnly = "lidar_only";
inline constexpr std::string_view kFusionBaseline = "fusion_baseline";

struct Annotation {
  std::string track_id;
  std::string category;
  std::optional<Cuboid3D> cuboid;
  // Native 2D labels keyed by camera name. Empty when the dataset only
  // carries cuboids.
  std::map<std::string, Box2D> boxes2d;
};

struct Frame {
  std::int64_t timestamp_ns = 0;
  std::vector<Annotation> annotations;
  std::map<std::string, std::vector<Box3D>> detection_sets;

  const std::vector<Box3D>* DetectionSet(std::string_view name) const;
};

struct Scene {
  std::string scene_id;
  std::vector<CameraModel> cameras;
  std::vector<Frame> frames;

  const CameraModel* FindCamera(std::string_view name) const;
};

struct Dataset {
  // Index in the list is the class id.
  std::vector<std::string> class_map;
  std::vector<Scene> scenes;

  // Throws ValidationError for unknown categories.
  int ClassId(std::string_view category) const;
};

// Checks every cross-reference and invariant of the data model.
void ValidateDataset(const Dataset& ds);

// Reads one canonical scene document, or every *.json document of a
// directory in file-name order. All documents must share the class map.
Dataset ParseDataset(const std::filesystem::path& path);
Dataset ParseDatasetText(std::string_view text,
                         std::string_view source_name = "<memory>");

// One scene per document, keys in canonical order.
std::string SerializeScene(const Scene& scene,
                           const std::vector<std::string>& class_map);
// Writes `<dir>/<scene_id>.json` for every scene. Returns the written paths.
std::vector<std::filesystem::path> WriteDataset(
    const Dataset& ds, const std::filesystem::path& dir);

// Detection-set file: a JSON array of {center, size, yaw, score} records.
std::vector<Box3D> ParseDetectionSet(const std::filesystem::path& path);
std::vector<Box3D> ParseDetectionSetText(std::string_view text);
std::string SerializeDetectionSet(std::span<const Box3D> boxes);

// ---------------------------------------------------------------------------
// Grayscale images (binary PGM, maxval 255 only).

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  std::uint8_t At(int x, int y) const {
    return pixels[static_cast<size_t>(y) * width + x];
  }
  bool operator==(const GrayImage&) const = default;
};

GrayImage ParsePgm(std::span<const std::uint8_t> bytes);
GrayImage ReadPgm(const std::filesystem::path& path);
std::vector<std::uint8_t> SerializePgm(const GrayImage& img);

// ---------------------------------------------------------------------------
// Camera-level 2D labels.

enum class LabelSource { kNative2D, kProjected3D };

std::string_view ToString(LabelSource source);
LabelSource ParseLabelSource(std::string_view text);

// Identity of one camera-level 2D label.
struct LabelKey {
  std::string scene_id;
  std::int64_t timestamp_ns = 0;
  std::string camera;
  std::string track_id;

  auto operator<=>(const LabelKey&) const = default;
  bool operator==(const LabelKey&) const = default;
};

// The 2D observation of `ann` in `cam`, or nullopt when the selected source
// yields nothing or only an empty (fully clipped) box.
std::optional<ProjectedBox> Observe(const Annotation& ann,
                                    const CameraModel& cam,
                                    LabelSource source);

// Every camera-level label of the dataset under `source`, in
// (scene, frame, camera, track) order.
std::vector<LabelKey> EnumerateLabels(const Dataset& ds, LabelSource source);

// Formats one normalized label line "class xc yc w h" from a clipped box.
std::string FormatLabelLine(int class_id, const Box2D& clipped,
                            const CameraModel& cam);

// Writes `<out_dir>/<scene_id>/<camera>/<timestamp_ns>.txt` for every frame
// and camera, including empty files. Lines are ordered by track id.
// Returns the number of files written.
size_t EmitLabels(const Dataset& ds, const std::set<LabelKey>& kept,
                  LabelSource source, const std::filesystem::path& out_dir);

}  // namespace avredux

#endif  // AVREDUX_INGEST_HPP_
