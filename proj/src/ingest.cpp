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

#include "avredux/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "avredux/error.hpp"

namespace avredux {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// A JSON value together with its location, for error messages such as
// "scene.json: frames[2].annotations[0].cuboid.size: expected 3 numbers".
class Node {
 public:
  Node(const json& value, std::string path, std::string_view source)
      : value_(value), path_(std::move(path)), source_(source) {}

  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError(std::string(source_) + ": " +
                     (path_.empty() ? "<root>" : path_) + ": " + what);
  }

  const json& value() const { return value_; }
  const std::string& path() const { return path_; }

  Node Key(const char* key) const {
    if (!value_.is_object()) Fail("expected an object");
    auto it = value_.find(key);
    if (it == value_.end()) Fail(std::string("missing field '") + key + "'");
    return Node(*it, Join(key), source_);
  }

  std::optional<Node> OptionalKey(const char* key) const {
    if (!value_.is_object()) Fail("expected an object");
    auto it = value_.find(key);
    if (it == value_.end() || it->is_null()) return std::nullopt;
    return Node(*it, Join(key), source_);
  }

  std::vector<Node> Items() const {
    if (!value_.is_array()) Fail("expected an array");
    std::vector<Node> out;
    out.reserve(value_.size());
    for (size_t i = 0; i < value_.size(); ++i) {
      out.emplace_back(value_[i], path_ + "[" + std::to_string(i) + "]",
                       source_);
    }
    return out;
  }

  std::vector<std::pair<std::string, Node>> Members() const {
    if (!value_.is_object()) Fail("expected an object");
    std::vector<std::pair<std::string, Node>> out;
    for (auto it = value_.begin(); it != value_.end(); ++it) {
      out.emplace_back(it.key(), Node(it.value(), Join(it.key()), source_));
    }
    return out;
  }

  double Double() const {
    if (!value_.is_number()) Fail("expected a number");
    return value_.get<double>();
  }

  std::int64_t Int() const {
    if (!value_.is_number_integer()) Fail("expected an integer");
    return value_.get<std::int64_t>();
  }

  std::string String() const {
    if (!value_.is_string()) Fail("expected a string");
    return value_.get<std::string>();
  }

  std::vector<double> Doubles(size_t n) const {
    if (!value_.is_array() || value_.size() != n) {
      Fail("expected an array of " + std::to_string(n) + " numbers");
    }
    std::vector<double> out;
    for (const Node& item : Items()) out.push_back(item.Double());
    return out;
  }

  Vec3 Vector3() const {
    const std::vector<double> v = Doubles(3);
    return Vec3(v[0], v[1], v[2]);
  }

 private:
  std::string Join(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json& value_;
  std::string path_;
  std::string_view source_;
};

json ParseJson(std::string_view text, std::string_view source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line/column pair.
    size_t line = 1;
    size_t col = 1;
    const size_t end = std::min<size_t>(e.byte > 0 ? e.byte - 1 : 0,
                                        text.size());
    for (size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": malformed JSON ("
        << e.what() << ")";
    throw ParseError(msg.str());
  }
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Cuboid3D ReadCuboid(const Node& n) {
  Cuboid3D c;
  c.center = n.Key("center").Vector3();
  c.size = n.Key("size").Vector3();
  c.yaw = n.Key("yaw").Double();
  return c;
}

Box3D ReadBox3D(const Node& n) {
  Box3D b;
  static_cast<Cuboid3D&>(b) = ReadCuboid(n);
  b.score = n.Key("score").Double();
  return b;
}

Box2D ReadBox2D(const Node& n) {
  Box2D b;
  b.x0 = n.Key("x0").Double();
  b.y0 = n.Key("y0").Double();
  b.x1 = n.Key("x1").Double();
  b.y1 = n.Key("y1").Double();
  return b;
}

CameraModel ReadCamera(const Node& n) {
  CameraModel cam;
  cam.name = n.Key("name").String();
  const Node intr = n.Key("intrinsics");
  cam.fx = intr.Key("fx").Double();
  cam.fy = intr.Key("fy").Double();
  cam.cx = intr.Key("cx").Double();
  cam.cy = intr.Key("cy").Double();
  cam.width = static_cast<int>(intr.Key("width").Int());
  cam.height = static_cast<int>(intr.Key("height").Int());
  const Node extr = n.Key("extrinsics");
  const std::vector<double> q = extr.Key("rotation").Doubles(4);
  cam.rotation = Eigen::Quaterniond(q[0], q[1], q[2], q[3]);
  cam.translation = extr.Key("translation").Vector3();
  return cam;
}

Annotation ReadAnnotation(const Node& n) {
  Annotation ann;
  ann.track_id = n.Key("track_id").String();
  ann.category = n.Key("category").String();
  if (auto c = n.OptionalKey("cuboid")) ann.cuboid = ReadCuboid(*c);
  if (auto boxes = n.OptionalKey("boxes2d")) {
    for (const auto& [camera, box] : boxes->Members()) {
      ann.boxes2d.emplace(camera, ReadBox2D(box));
    }
  }
  return ann;
}

Frame ReadFrame(const Node& n) {
  Frame f;
  f.timestamp_ns = n.Key("timestamp_ns").Int();
  for (const Node& a : n.Key("annotations").Items()) {
    f.annotations.push_back(ReadAnnotation(a));
  }
  if (auto sets = n.OptionalKey("detection_sets")) {
    for (const auto& [name, list] : sets->Members()) {
      std::vector<Box3D> boxes;
      for (const Node& b : list.Items()) boxes.push_back(ReadBox3D(b));
      f.detection_sets.emplace(name, std::move(boxes));
    }
  }
  return f;
}

std::pair<Scene, std::vector<std::string>> ReadScene(const json& doc,
                                                     std::string_view source) {
  const Node root(doc, "", source);
  Scene scene;
  scene.scene_id = root.Key("scene_id").String();
  std::vector<std::string> class_map;
  for (const Node& c : root.Key("class_map").Items()) {
    class_map.push_back(c.String());
  }
  for (const Node& c : root.Key("cameras").Items()) {
    scene.cameras.push_back(ReadCamera(c));
  }
  for (const Node& f : root.Key("frames").Items()) {
    scene.frames.push_back(ReadFrame(f));
  }
  return {std::move(scene), std::move(class_map)};
}

ordered_json ToJson(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

ordered_json ToJson(const Cuboid3D& c) {
  ordered_json j;
  j["center"] = ToJson(c.center);
  j["size"] = ToJson(c.size);
  j["yaw"] = c.yaw;
  return j;
}

ordered_json ToJson(const Box3D& b) {
  ordered_json j = ToJson(static_cast<const Cuboid3D&>(b));
  j["score"] = b.score;
  return j;
}

ordered_json ToJson(const Box2D& b) {
  ordered_json j;
  j["x0"] = b.x0;
  j["y0"] = b.y0;
  j["x1"] = b.x1;
  j["y1"] = b.y1;
  return j;
}

ordered_json ToJson(const CameraModel& cam) {
  ordered_json j;
  j["name"] = cam.name;
  ordered_json intr;
  intr["fx"] = cam.fx;
  intr["fy"] = cam.fy;
  intr["cx"] = cam.cx;
  intr["cy"] = cam.cy;
  intr["width"] = cam.width;
  intr["height"] = cam.height;
  j["intrinsics"] = std::move(intr);
  ordered_json extr;
  extr["rotation"] = {cam.rotation.w(), cam.rotation.x(), cam.rotation.y(),
                      cam.rotation.z()};
  extr["translation"] = ToJson(cam.translation);
  j["extrinsics"] = std::move(extr);
  return j;
}

void ValidateScene(const Scene& scene, const Dataset& ds) {
  const std::string where = "scene '" + scene.scene_id + "'";
  std::unordered_set<std::string> camera_names;
  for (const CameraModel& cam : scene.cameras) {
    if (!camera_names.insert(cam.name).second) {
      throw ValidationError(where + ": duplicate camera '" + cam.name + "'");
    }
    cam.Validate();
  }
  if (scene.frames.empty()) {
    throw ValidationError(where + ": scene has no frames");
  }
  for (size_t i = 0; i < scene.frames.size(); ++i) {
    const Frame& frame = scene.frames[i];
    const std::string fwhere =
        where + ", frame " + std::to_string(frame.timestamp_ns);
    if (i > 0 && frame.timestamp_ns <= scene.frames[i - 1].timestamp_ns) {
      throw ValidationError(fwhere + ": timestamps must increase");
    }
    std::unordered_set<std::string> tracks;
    for (const Annotation& ann : frame.annotations) {
      const std::string awhere = fwhere + ", track '" + ann.track_id + "'";
      if (!tracks.insert(ann.track_id).second) {
        throw ValidationError(fwhere + ": duplicate track_id '" +
                              ann.track_id + "'");
      }
      if (!ann.cuboid && ann.boxes2d.empty()) {
        throw ValidationError(awhere + ": annotation has neither cuboid nor "
                                       "boxes2d");
      }
      ds.ClassId(ann.category);
      if (ann.cuboid) ann.cuboid->Validate();
      for (const auto& [camera, box] : ann.boxes2d) {
        if (!camera_names.contains(camera)) {
          throw ValidationError(awhere +
                                ": boxes2d references unknown camera '" +
                                camera + "'");
        }
        if (!(box.x0 < box.x1) || !(box.y0 < box.y1)) {
          throw ValidationError(awhere + ": degenerate 2D box in '" + camera +
                                "'");
        }
      }
    }
    for (const auto& [name, boxes] : frame.detection_sets) {
      for (const Box3D& b : boxes) {
        try {
          b.Validate();
        } catch (const ValidationError& e) {
          throw ValidationError(fwhere + ", detection set '" + name +
                                "': " + e.what());
        }
      }
    }
  }
}

}  // namespace

const std::vector<Box3D>* Frame::DetectionSet(std::string_view name) const {
  auto it = detection_sets.find(std::string(name));
  return it == detection_sets.end() ? nullptr : &it->second;
}

const CameraModel* Scene::FindCamera(std::string_view name) const {
  for (const CameraModel& cam : cameras) {
    if (cam.name == name) return &cam;
  }
  return nullptr;
}

int Dataset::ClassId(std::string_view category) const {
  auto it = std::find(class_map.begin(), class_map.end(), category);
  if (it == class_map.end()) {
    throw ValidationError("category '" + std::string(category) +
                          "' is not in the class map");
  }
  return static_cast<int>(it - class_map.begin());
}

void ValidateDataset(const Dataset& ds) {
  if (ds.scenes.empty()) throw ValidationError("dataset has no scenes");
  std::unordered_set<std::string> names;
  for (const std::string& c : ds.class_map) {
    if (!names.insert(c).second) {
      throw ValidationError("duplicate class '" + c + "' in class_map");
    }
  }
  std::unordered_set<std::string> scene_ids;
  for (const Scene& scene : ds.scenes) {
    if (!scene_ids.insert(scene.scene_id).second) {
      throw ValidationError("duplicate scene_id '" + scene.scene_id + "'");
    }
    ValidateScene(scene, ds);
  }
}

Dataset ParseDatasetText(std::string_view text, std::string_view source_name) {
  const json doc = ParseJson(text, source_name);
  auto [scene, class_map] = ReadScene(doc, source_name);
  Dataset ds;
  ds.class_map = std::move(class_map);
  ds.scenes.push_back(std::move(scene));
  ValidateDataset(ds);
  return ds;
}

Dataset ParseDataset(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw ValidationError(path.string() + ": no scene documents found");
    }
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw ParseError(path.string() + ": no such file or directory");
  }

  Dataset ds;
  for (size_t i = 0; i < files.size(); ++i) {
    const std::string text = ReadFile(files[i]);
    const std::string source = files[i].string();
    const json doc = ParseJson(text, source);
    auto [scene, class_map] = ReadScene(doc, source);
    if (i == 0) {
      ds.class_map = std::move(class_map);
    } else if (class_map != ds.class_map) {
      throw ValidationError(source + ": class_map differs from " +
                            files[0].string());
    }
    ds.scenes.push_back(std::move(scene));
  }
  ValidateDataset(ds);
  return ds;
}

std::string SerializeScene(const Scene& scene,
                           const std::vector<std::string>& class_map) {
  ordered_json doc;
  doc["scene_id"] = scene.scene_id;
  doc["class_map"] = class_map;
  doc["cameras"] = ordered_json::array();
  for (const CameraModel& cam : scene.cameras) {
    doc["cameras"].push_back(ToJson(cam));
  }
  doc["frames"] = ordered_json::array();
  for (const Frame& frame : scene.frames) {
    ordered_json f;
    f["timestamp_ns"] = frame.timestamp_ns;
    f["annotations"] = ordered_json::array();
    for (const Annotation& ann : frame.annotations) {
      ordered_json a;
      a["track_id"] = ann.track_id;
      a["category"] = ann.category;
      if (ann.cuboid) a["cuboid"] = ToJson(*ann.cuboid);
      if (!ann.boxes2d.empty()) {
        ordered_json boxes = ordered_json::object();
        for (const auto& [camera, box] : ann.boxes2d) {
          boxes[camera] = ToJson(box);
        }
        a["boxes2d"] = std::move(boxes);
      }
      f["annotations"].push_back(std::move(a));
    }
    if (!frame.detection_sets.empty()) {
      ordered_json sets = ordered_json::object();
      for (const auto& [name, boxes] : frame.detection_sets) {
        ordered_json list = ordered_json::array();
        for (const Box3D& b : boxes) list.push_back(ToJson(b));
        sets[name] = std::move(list);
      }
      f["detection_sets"] = std::move(sets);
    }
    doc["frames"].push_back(std::move(f));
  }
  return doc.dump(1) + "\n";
}

std::vector<fs::path> WriteDataset(const Dataset& ds, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  for (const Scene& scene : ds.scenes) {
    const fs::path path = dir / (scene.scene_id + ".json");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << SerializeScene(scene, ds.class_map);
    written.push_back(path);
  }
  return written;
}

std::vector<Box3D> ParseDetectionSetText(std::string_view text) {
  const json doc = ParseJson(text, "<detection set>");
  const Node root(doc, "", "<detection set>");
  std::vector<Box3D> boxes;
  for (const Node& item : root.Items()) {
    Box3D b = ReadBox3D(item);
    try {
      b.Validate();
    } catch (const ValidationError& e) {
      throw ValidationError(item.path() + ": " + e.what());
    }
    boxes.push_back(b);
  }
  return boxes;
}

std::vector<Box3D> ParseDetectionSet(const fs::path& path) {
  try {
    return ParseDetectionSetText(ReadFile(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string SerializeDetectionSet(std::span<const Box3D> boxes) {
  ordered_json doc = ordered_json::array();
  for (const Box3D& b : boxes) doc.push_back(ToJson(b));
  return doc.dump(1) + "\n";
}

}  // namespace avredux
