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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include <string>
#include <vector>

#include "avredux/cli.hpp"
#include "avredux/error.hpp"
#include "avredux/geometry.hpp"
#include "avredux/ingest.hpp"
#include "avredux/multimodal.hpp"
#include "avredux/multisource.hpp"
#include "avredux/overlap.hpp"
#include "avredux/synth.hpp"

namespace py = pybind11;

namespace avredux {
namespace {

std::vector<double> QuatToList(const Eigen::Quaterniond& q) {
  return {q.w(), q.x(), q.y(), q.z()};
}

Eigen::Quaterniond ListToQuat(const std::vector<double>& v) {
  if (v.size() != 4) throw ValidationError("rotation needs 4 values (w,x,y,z)");
  return Eigen::Quaterniond(v[0], v[1], v[2], v[3]);
}

GrayImage ImageFromBytes(int width, int height, const py::bytes& data) {
  const std::string raw = data;
  if (raw.size() != static_cast<size_t>(width) * height) {
    throw ValidationError("pixel buffer does not match width x height");
  }
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.assign(raw.begin(), raw.end());
  return img;
}

void BindGeometry(py::module_& m) {
  py::class_<ImageBounds>(m, "ImageBounds")
      .def(py::init<>())
      .def_readwrite("width", &ImageBounds::width)
      .def_readwrite("height", &ImageBounds::height);

  py::class_<Box2D>(m, "Box2D")
      .def(py::init<>())
      .def(py::init([](double x0, double y0, double x1, double y1) {
             return Box2D{x0, y0, x1, y1, std::nullopt};
           }),
           py::arg("x0"), py::arg("y0"), py::arg("x1"), py::arg("y1"))
      .def_readwrite("x0", &Box2D::x0)
      .def_readwrite("y0", &Box2D::y0)
      .def_readwrite("x1", &Box2D::x1)
      .def_readwrite("y1", &Box2D::y1)
      .def_readwrite("clipped_to", &Box2D::clipped_to)
      .def_property_readonly("area", &Box2D::Area)
      .def("__eq__", [](const Box2D& a, const Box2D& b) { return a == b; })
      .def("__repr__", [](const Box2D& b) {
        std::ostringstream s;
        s << "Box2D(" << b.x0 << ", " << b.y0 << ", " << b.x1 << ", " << b.y1
          << ")";
        return s.str();
      });

  py::class_<ProjectedBox>(m, "ProjectedBox")
      .def_readonly("full", &ProjectedBox::full)
      .def_readonly("clipped", &ProjectedBox::clipped);

  py::class_<Cuboid3D>(m, "Cuboid3D")
      .def(py::init<>())
      .def(py::init([](const Vec3& center, const Vec3& size, double yaw) {
             Cuboid3D c;
             c.center = center;
             c.size = size;
             c.yaw = yaw;
             return c;
           }),
           py::arg("center"), py::arg("size"), py::arg("yaw") = 0.0)
      .def_readwrite("center", &Cuboid3D::center)
      .def_readwrite("size", &Cuboid3D::size)
      .def_readwrite("yaw", &Cuboid3D::yaw)
      .def("validate", &Cuboid3D::Validate);

  py::class_<Box3D, Cuboid3D>(m, "Box3D")
      .def(py::init<>())
      .def(py::init([](const Vec3& center, const Vec3& size, double yaw,
                       double score) {
             Box3D b;
             b.center = center;
             b.size = size;
             b.yaw = yaw;
             b.score = score;
             return b;
           }),
           py::arg("center"), py::arg("size"), py::arg("yaw") = 0.0,
           py::arg("score") = 1.0)
      .def_readwrite("score", &Box3D::score)
      .def("validate", &Box3D::Validate);

  py::class_<CameraModel>(m, "CameraModel")
      .def(py::init<>())
      .def_readwrite("name", &CameraModel::name)
      .def_readwrite("fx", &CameraModel::fx)
      .def_readwrite("fy", &CameraModel::fy)
      .def_readwrite("cx", &CameraModel::cx)
      .def_readwrite("cy", &CameraModel::cy)
      .def_readwrite("width", &CameraModel::width)
      .def_readwrite("height", &CameraModel::height)
      .def_property(
          "rotation",
          [](const CameraModel& c) { return QuatToList(c.rotation); },
          [](CameraModel& c, const std::vector<double>& v) {
            c.rotation = ListToQuat(v);
          },
          "Camera-to-ego unit quaternion as [w, x, y, z].")
      .def_readwrite("translation", &CameraModel::translation)
      .def("validate", &CameraModel::Validate);

  m.def("level_camera", [](const std::string& name, double yaw_deg, double fx,
                           int width, int height) {
    CameraModel cam;
    cam.name = name;
    cam.fx = fx;
    cam.fy = fx;
    cam.width = width;
    cam.height = height;
    cam.cx = width / 2.0;
    cam.cy = height / 2.0;
    cam.rotation = LevelCameraRotation(yaw_deg);
    return cam;
  }, py::arg("name"), py::arg("yaw_deg"), py::arg("fx"),
        py::arg("width") = 1600, py::arg("height") = 900,
        "Camera at the ego origin looking along `yaw_deg` with the principal "
        "point at the image center.");

  m.def("cuboid_corners", [](const Cuboid3D& c) {
    const auto corners = CuboidCorners(c);
    return std::vector<Vec3>(corners.begin(), corners.end());
  });
  m.def("clip_to_image", &ClipToImage);
  m.def("project_cuboid", &ProjectCuboid);
  m.def("bcs", &Bcs, py::arg("full"), py::arg("clipped"));
  m.def("iou2d", &Iou2d);
  m.def("iou3d", &Iou3d);
  m.def("centroid_distance", &CentroidDistance);
  m.def("horizontal_fov", &HorizontalFov);
  m.def("yaw_center", &YawCenter);
  m.def("angle_to_column", &AngleToColumn, py::arg("phi_deg"), py::arg("cam"));
}

void BindIngest(py::module_& m) {
  py::enum_<LabelSource>(m, "LabelSource")
      .value("NATIVE_2D", LabelSource::kNative2D)
      .value("PROJECTED_3D", LabelSource::kProjected3D);

  py::class_<Annotation>(m, "Annotation")
      .def(py::init<>())
      .def_readwrite("track_id", &Annotation::track_id)
      .def_readwrite("category", &Annotation::category)
      .def_readwrite("cuboid", &Annotation::cuboid)
      .def_readwrite("boxes2d", &Annotation::boxes2d);

  py::class_<Frame>(m, "Frame")
      .def(py::init<>())
      .def_readwrite("timestamp_ns", &Frame::timestamp_ns)
      .def_readwrite("annotations", &Frame::annotations)
      .def_readwrite("detection_sets", &Frame::detection_sets);

  py::class_<Scene>(m, "Scene")
      .def(py::init<>())
      .def_readwrite("scene_id", &Scene::scene_id)
      .def_readwrite("cameras", &Scene::cameras)
      .def_readwrite("frames", &Scene::frames);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("class_map", &Dataset::class_map)
      .def_readwrite("scenes", &Dataset::scenes)
      .def("validate", [](const Dataset& ds) { ValidateDataset(ds); });

  py::class_<LabelKey>(m, "LabelKey")
      .def_readonly("scene_id", &LabelKey::scene_id)
      .def_readonly("timestamp_ns", &LabelKey::timestamp_ns)
      .def_readonly("camera", &LabelKey::camera)
      .def_readonly("track_id", &LabelKey::track_id)
      .def("__eq__", [](const LabelKey& a, const LabelKey& b) { return a == b; })
      .def("__lt__", [](const LabelKey& a, const LabelKey& b) { return a < b; })
      .def("__hash__", [](const LabelKey& k) {
        return py::hash(py::make_tuple(k.scene_id, k.timestamp_ns, k.camera,
                                       k.track_id));
      });

  m.def("parse_dataset", &ParseDataset, py::arg("path"));
  m.def("parse_dataset_text",
        [](const std::string& text) { return ParseDatasetText(text); });
  m.def("serialize_scene", &SerializeScene);
  m.def("write_dataset", &WriteDataset);
  m.def("parse_detection_set", &ParseDetectionSet);
  m.def("parse_detection_set_text",
        [](const std::string& text) { return ParseDetectionSetText(text); });
  m.def("serialize_detection_set", [](const std::vector<Box3D>& boxes) {
    return SerializeDetectionSet(boxes);
  });

  py::class_<GrayImage>(m, "GrayImage")
      .def(py::init(&ImageFromBytes), py::arg("width"), py::arg("height"),
           py::arg("pixels"))
      .def_readonly("width", &GrayImage::width)
      .def_readonly("height", &GrayImage::height)
      .def_property_readonly("pixels",
                             [](const GrayImage& g) {
                               return py::bytes(
                                   reinterpret_cast<const char*>(
                                       g.pixels.data()),
                                   g.pixels.size());
                             })
      .def("__eq__",
           [](const GrayImage& a, const GrayImage& b) { return a == b; });

  m.def("parse_pgm", [](const py::bytes& data) {
    const std::string raw = data;
    const std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
    return ParsePgm(bytes);
  });
  m.def("serialize_pgm", [](const GrayImage& img) {
    const auto bytes = SerializePgm(img);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()),
                     bytes.size());
  });

  m.def("enumerate_labels", &EnumerateLabels);
  m.def("format_label_line", &FormatLabelLine);
  m.def("emit_labels",
        [](const Dataset& ds, const std::vector<LabelKey>& kept,
           LabelSource source, const std::filesystem::path& out) {
          return EmitLabels(ds, {kept.begin(), kept.end()}, source, out);
        });
}

void BindOverlap(py::module_& m) {
  py::class_<ViewArc>(m, "ViewArc")
      .def(py::init([](std::string camera, double center, double half_width) {
             return ViewArc{std::move(camera), center, half_width};
           }),
           py::arg("camera"), py::arg("center"), py::arg("half_width"))
      .def_readwrite("camera", &ViewArc::camera)
      .def_readwrite("center", &ViewArc::center)
      .def_readwrite("half_width", &ViewArc::half_width);

  py::class_<ArcOverlap>(m, "ArcOverlap")
      .def_readonly("degrees", &ArcOverlap::degrees)
      .def_readonly("start", &ArcOverlap::start)
      .def_readonly("end", &ArcOverlap::end)
      .def_readonly("split", &ArcOverlap::split);

  py::class_<OverlapPair>(m, "OverlapPair")
      .def_readonly("camera_a", &OverlapPair::camera_a)
      .def_readonly("camera_b", &OverlapPair::camera_b)
      .def_readonly("overlap_degrees", &OverlapPair::overlap_degrees)
      .def_readonly("arc_start", &OverlapPair::arc_start)
      .def_readonly("arc_end", &OverlapPair::arc_end);

  py::class_<OverlapGraph>(m, "OverlapGraph")
      .def(py::init<>())
      .def_readonly("pairs", &OverlapGraph::pairs)
      .def_readonly("warnings", &OverlapGraph::warnings)
      .def("connected", &OverlapGraph::Connected);

  m.def("make_view_arc", &MakeViewArc);
  m.def("overlap_arc", &OverlapArc);
  m.def("build_overlap_graph",
        [](const std::vector<CameraModel>& cams, double min_overlap) {
          return BuildOverlapGraph(cams, min_overlap);
        },
        py::arg("cameras"), py::arg("min_overlap") = kDefaultMinOverlapDeg);
  m.def("preset_nuscenes", &PresetNuScenes);
}

void BindMultisource(py::module_& m) {
  py::class_<Observation>(m, "Observation")
      .def(py::init<>())
      .def_readwrite("camera", &Observation::camera)
      .def_readwrite("full", &Observation::full)
      .def_readwrite("clipped", &Observation::clipped)
      .def_readwrite("bcs", &Observation::bcs);

  py::class_<RedundancyGroup>(m, "RedundancyGroup")
      .def(py::init<>())
      .def_readwrite("scene_id", &RedundancyGroup::scene_id)
      .def_readwrite("timestamp_ns", &RedundancyGroup::timestamp_ns)
      .def_readwrite("track_id", &RedundancyGroup::track_id)
      .def_readwrite("observations", &RedundancyGroup::observations);

  py::class_<TauPolicy>(m, "TauPolicy")
      .def(py::init<double>(), py::arg("global_tau") = 0.5)
      .def_property("global_tau", &TauPolicy::global, &TauPolicy::set_global)
      .def("set_pair_override", &TauPolicy::SetPairOverride)
      .def("tau_for", &TauPolicy::TauFor);

  py::class_<PruneDecision>(m, "PruneDecision")
      .def_readonly("track_id", &PruneDecision::track_id)
      .def_readonly("kept", &PruneDecision::kept)
      .def_readonly("removed", &PruneDecision::removed)
      .def_readonly("tau", &PruneDecision::tau);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("tau", &SweepRow::tau)
      .def_readonly("deleted", &SweepRow::deleted)
      .def_readonly("remaining", &SweepRow::remaining)
      .def_readonly("tracks", &SweepRow::tracks);

  py::class_<PruneResult>(m, "PruneResult")
      .def_property_readonly("kept",
                             [](const PruneResult& r) {
                               return std::vector<LabelKey>(r.kept.begin(),
                                                            r.kept.end());
                             })
      .def_readonly("row", &PruneResult::row)
      .def_readonly("decisions", &PruneResult::decisions);

  m.def("form_groups", &FormGroups);
  m.def("prune_group",
        py::overload_cast<const RedundancyGroup&, double>(&PruneGroup));
  m.def("prune_group",
        py::overload_cast<const RedundancyGroup&, const TauPolicy&>(
            &PruneGroup));
  m.def("prune_dataset",
        [](const Dataset& ds, const OverlapGraph& graph, const TauPolicy& tau,
           LabelSource source) { return PruneDataset(ds, graph, tau, source); });
  m.def("sweep_tau",
        [](const Dataset& ds, const OverlapGraph& graph,
           const std::vector<double>& taus, LabelSource source) {
          return SweepTau(ds, graph, taus, source);
        });
  m.def("overlap_columns", &OverlapColumns);
  m.def("crop_overlap", &CropOverlap);
  m.def("cosine_similarity", &CosineSimilarity);
}

void BindMultimodal(py::module_& m) {
  py::class_<MatchPair>(m, "MatchPair")
      .def_readonly("base_index", &MatchPair::base_index)
      .def_readonly("lidar_index", &MatchPair::lidar_index)
      .def_readonly("iou", &MatchPair::iou);
  py::class_<Matching>(m, "Matching")
      .def_readonly("pairs", &Matching::pairs)
      .def_readonly("unmatched_base", &Matching::unmatched_base)
      .def_readonly("unmatched_lidar", &Matching::unmatched_lidar);
  py::class_<DistanceSweepRow>(m, "DistanceSweepRow")
      .def_readonly("t_dist", &DistanceSweepRow::t_dist)
      .def_readonly("pruned_count", &DistanceSweepRow::pruned_count)
      .def_readonly("lost_ratio", &DistanceSweepRow::lost_ratio);
  py::class_<TTestResult>(m, "TTestResult")
      .def_readonly("t", &TTestResult::t)
      .def_readonly("df", &TTestResult::df)
      .def_readonly("p_two_sided", &TTestResult::p_two_sided);

  using Boxes = const std::vector<Box3D>&;
  m.def("match_boxes", [](Boxes b, Boxes l, double theta) {
    return MatchBoxes(b, l, theta);
  }, py::arg("base"), py::arg("lidar"), py::arg("theta") = kDefaultTheta);
  m.def("redundancy_ratio", [](Boxes b, Boxes l, double theta) {
    return RedundancyRatio(b, l, theta);
  }, py::arg("base"), py::arg("lidar"), py::arg("theta") = kDefaultTheta);
  m.def("distance_prune",
        [](Boxes l, double t) { return DistancePrune(l, t); });
  m.def("lost_ratio", [](Boxes b, Boxes p, double theta) {
    return LostRatio(b, p, theta);
  }, py::arg("base"), py::arg("pruned"), py::arg("theta") = kDefaultTheta);
  m.def("sweep_distance", [](Boxes b, Boxes l, double theta,
                             const std::vector<double>& thresholds) {
    return SweepDistance(b, l, theta, thresholds);
  });
  m.def("welch_t_test",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          return WelchTTest(a, b);
        });
}

void BindSynth(py::module_& m) {
  py::enum_<synth::Rig>(m, "Rig")
      .value("RING", synth::Rig::kRing)
      .value("NUSCENES", synth::Rig::kNuScenes);

  py::class_<synth::SynthParams>(m, "SynthParams")
      .def(py::init<>())
      .def_readwrite("seed", &synth::SynthParams::seed)
      .def_readwrite("rig", &synth::SynthParams::rig)
      .def_readwrite("n_cameras", &synth::SynthParams::n_cameras)
      .def_readwrite("camera_fov", &synth::SynthParams::camera_fov)
      .def_readwrite("camera_yaw_offsets",
                     &synth::SynthParams::camera_yaw_offsets)
      .def_readwrite("n_frames", &synth::SynthParams::n_frames)
      .def_readwrite("n_objects", &synth::SynthParams::n_objects)
      .def_readwrite("radial_range", &synth::SynthParams::radial_range)
      .def_readwrite("size_range", &synth::SynthParams::size_range)
      .def_readwrite("detection_noise", &synth::SynthParams::detection_noise)
      .def_readwrite("drop_rate", &synth::SynthParams::drop_rate)
      .def_readwrite("scene_id", &synth::SynthParams::scene_id)
      .def("validate", &synth::SynthParams::Validate);

  py::class_<synth::ExpectedGroup>(m, "ExpectedGroup")
      .def_readonly("timestamp_ns", &synth::ExpectedGroup::timestamp_ns)
      .def_readonly("track_id", &synth::ExpectedGroup::track_id)
      .def_readonly("cameras", &synth::ExpectedGroup::cameras);

  py::class_<synth::GroundTruth>(m, "GroundTruth")
      .def_readonly("expected_groups", &synth::GroundTruth::expected_groups)
      .def_readonly("expected_distances",
                    &synth::GroundTruth::expected_distances)
      .def_readonly("expected_rr", &synth::GroundTruth::expected_rr)
      .def_readonly("expected_frame_rr",
                    &synth::GroundTruth::expected_frame_rr);

  m.def("generate_scene", &synth::GenerateScene);
  m.def("nuscenes_ring_cameras", &synth::NuScenesRingCameras);
  m.def("brute_force_prune",
        [](const Dataset& ds, const OverlapGraph& g, double tau,
           LabelSource source) {
          const auto kept = synth::BruteForcePrune(ds, g, tau, source);
          return std::vector<LabelKey>(kept.begin(), kept.end());
        });
  m.def("brute_force_rr",
        [](const std::vector<Box3D>& b, const std::vector<Box3D>& l,
           double theta) { return synth::BruteForceRr(b, l, theta); });
}

}  // namespace
}  // namespace avredux

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of avredux";

  // Translators run newest first, so subclasses are registered last.
  auto& error = py::register_exception<avredux::Error>(m, "Error",
                                                       PyExc_RuntimeError);
  py::register_exception<avredux::ParseError>(m, "ParseError", error.ptr());
  py::register_exception<avredux::ValidationError>(m, "ValidationError",
                                                   error.ptr());
  py::register_exception<avredux::DomainError>(m, "DomainError", error.ptr());

  avredux::BindGeometry(m);
  avredux::BindIngest(m);
  avredux::BindOverlap(m);
  avredux::BindMultisource(m);
  avredux::BindMultimodal(m);
  avredux::BindSynth(m);

  m.def("main", [](std::vector<std::string> args) {
    args.insert(args.begin(), "avredux");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    py::gil_scoped_release release;
    return avredux::cli::Main(static_cast<int>(argv.size()), argv.data());
  }, py::arg("args"), "Runs the command line with `args` and returns the exit code.");
}
