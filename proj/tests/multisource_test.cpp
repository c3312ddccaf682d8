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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "avredux/error.hpp"
#include "avredux/overlap.hpp"
#include "avredux/synth.hpp"
#include "test_support.hpp"

namespace avredux {
namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

Annotation AtBearing(const std::string& track, double bearing_deg,
                     double range = 20.0) {
  Annotation a;
  a.track_id = track;
  a.category = "car";
  Cuboid3D c;
  c.center = Vec3(range * std::cos(bearing_deg * kDeg),
                  range * std::sin(bearing_deg * kDeg), 0.0);
  c.size = Vec3(1, 1, 1);
  a.cuboid = c;
  return a;
}

Scene RingScene() {
  Scene s;
  s.scene_id = "s";
  s.cameras = synth::NuScenesRingCameras();
  return s;
}

RedundancyGroup GroupWith(const std::vector<std::pair<std::string, double>>&
                              members) {
  RedundancyGroup g;
  g.track_id = "t";
  for (const auto& [cam, bcs] : members) {
    Observation o;
    o.camera = cam;
    o.full = Box2D{0, 0, 10, 10};
    o.clipped = Box2D{0, 0, 10 * bcs, 10};
    o.bcs = bcs;
    g.observations.push_back(o);
  }
  return g;
}

std::set<std::string> Set(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

TEST(FormGroupsTest, ObjectInAdjacentPair) {
  const Scene scene = RingScene();
  Frame f;
  f.annotations.push_back(AtBearing("a", -27.5));
  const auto groups = FormGroups(scene, f, PresetNuScenes(),
                                 LabelSource::kProjected3D);
  ASSERT_EQ(groups.size(), 1u);
  ASSERT_EQ(groups[0].observations.size(), 2u);
  EXPECT_EQ(groups[0].observations[0].camera, "CAM_FRONT");
  EXPECT_EQ(groups[0].observations[1].camera, "CAM_FRONT_RIGHT");
  for (const auto& o : groups[0].observations) {
    EXPECT_GT(o.bcs, 0.0);
    EXPECT_LE(o.bcs, 1.0);
  }
}

TEST(FormGroupsTest, SingleCameraObjectIsNotGrouped) {
  Frame f;
  f.annotations.push_back(AtBearing("a", 0.0));
  EXPECT_TRUE(FormGroups(RingScene(), f, PresetNuScenes(),
                         LabelSource::kProjected3D)
                  .empty());
}

TEST(FormGroupsTest, UnconnectedCamerasAreNotGrouped) {
  Annotation a;
  a.track_id = "a";
  a.category = "car";
  a.boxes2d["CAM_FRONT"] = Box2D{10, 10, 50, 50};
  a.boxes2d["CAM_BACK"] = Box2D{10, 10, 50, 50};
  Frame f;
  f.annotations.push_back(a);
  EXPECT_TRUE(
      FormGroups(RingScene(), f, PresetNuScenes(), LabelSource::kNative2D)
          .empty());
}

TEST(PruneGroupTest, PairExamples) {
  const auto g = GroupWith({{"A", 0.9}, {"B", 0.6}});
  const auto strict = PruneGroup(g, 0.2);
  EXPECT_EQ(strict.kept, (std::vector<std::string>{"A"}));
  EXPECT_EQ(strict.removed, (std::vector<std::string>{"B"}));
  const auto loose = PruneGroup(g, 0.4);
  EXPECT_EQ(Set(loose.kept), (std::set<std::string>{"A", "B"}));
  EXPECT_TRUE(loose.removed.empty());
}

TEST(PruneGroupTest, ThreeMembers) {
  const auto d = PruneGroup(GroupWith({{"A", 1.0}, {"B", 0.8}, {"C", 0.5}}),
                            0.3);
  EXPECT_EQ(Set(d.kept), (std::set<std::string>{"A", "B"}));
  EXPECT_EQ(d.removed, (std::vector<std::string>{"C"}));
}

TEST(PruneGroupTest, TieKeepsSmallestCameraName) {
  const auto d = PruneGroup(GroupWith({{"A", 0.5}, {"B", 0.5}}), 0.0);
  EXPECT_EQ(Set(d.kept), (std::set<std::string>{"A", "B"}));
  const auto d2 = PruneGroup(
      GroupWith({{"A", 0.2}, {"B", 0.7}, {"C", 0.7}}), 0.1);
  EXPECT_EQ(Set(d2.kept), (std::set<std::string>{"B", "C"}));
}

TEST(PruneGroupTest, PerPairOverrideAppliesAgainstAnchor) {
  TauPolicy policy(1.0);
  policy.SetPairOverride("C", "A", 0.2);
  const auto d = PruneGroup(GroupWith({{"A", 0.9}, {"B", 0.3}, {"C", 0.6}}),
                            policy);
  EXPECT_EQ(Set(d.kept), (std::set<std::string>{"A", "B"}));
  EXPECT_EQ(d.removed, (std::vector<std::string>{"C"}));
  EXPECT_EQ(policy.TauFor("A", "C"), 0.2);
  EXPECT_EQ(policy.TauFor("B", "C"), 1.0);
  EXPECT_THROW(policy.SetPairOverride("A", "B", 1.5), ValidationError);
  EXPECT_THROW(TauPolicy(-0.1), ValidationError);
}

TEST(PruneGroupTest, NeverEmptiesAGroup) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::pair<std::string, double>> m;
    const int n = 2 + i % 5;
    double best = 0;
    for (int k = 0; k < n; ++k) {
      m.emplace_back(std::string(1, static_cast<char>('A' + k)), u(rng));
      best = std::max(best, m.back().second);
    }
    const auto d = PruneGroup(GroupWith(m), u(rng));
    ASSERT_FALSE(d.kept.empty());
    ASSERT_EQ(d.kept.size() + d.removed.size(), static_cast<size_t>(n));
    bool has_best = false;
    for (const auto& [cam, bcs] : m) {
      if (bcs == best &&
          std::find(d.kept.begin(), d.kept.end(), cam) != d.kept.end()) {
        has_best = true;
      }
    }
    ASSERT_TRUE(has_best);
  }
}

Dataset SynthDataset(std::uint64_t seed, synth::Rig rig = synth::Rig::kRing) {
  synth::SynthParams p;
  p.seed = seed;
  p.rig = rig;
  p.n_frames = 3;
  p.n_objects = 25;
  return synth::GenerateScene(p).first;
}

TEST(PruneDatasetTest, FullThresholdDeletesNothing) {
  const Dataset ds = SynthDataset(1, synth::Rig::kNuScenes);
  const auto graph = PresetNuScenes();
  const auto r = PruneDataset(ds, graph, TauPolicy(1.0),
                              LabelSource::kProjected3D);
  EXPECT_EQ(r.row.deleted, 0u);
  EXPECT_EQ(r.kept.size(), r.row.remaining);
  EXPECT_EQ(r.kept.size(),
            EnumerateLabels(ds, LabelSource::kProjected3D).size());
}

TEST(PruneDatasetTest, NoOverlapPairsKeepsEverything) {
  const Dataset ds = SynthDataset(2);
  const auto r = PruneDataset(ds, OverlapGraph{}, TauPolicy(0.0),
                              LabelSource::kNative2D);
  EXPECT_EQ(r.row.deleted, 0u);
  EXPECT_EQ(r.row.remaining,
            EnumerateLabels(ds, LabelSource::kNative2D).size());
}

TEST(PruneDatasetTest, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset ds = SynthDataset(seed, seed % 2 ? synth::Rig::kNuScenes
                                                   : synth::Rig::kRing);
    const auto graph = BuildOverlapGraph(ds.scenes[0].cameras);
    for (LabelSource src :
         {LabelSource::kNative2D, LabelSource::kProjected3D}) {
      for (double tau : {0.0, 0.3, 0.7}) {
        const auto r = PruneDataset(ds, graph, TauPolicy(tau), src);
        ASSERT_EQ(r.kept, synth::BruteForcePrune(ds, graph, tau, src));
      }
    }
  }
}

TEST(SweepTauTest, RowsMonotoneAndTracksConstant) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset ds = SynthDataset(seed, synth::Rig::kNuScenes);
    const std::vector<double> taus = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const auto rows = SweepTau(ds, PresetNuScenes(), taus,
                               LabelSource::kNative2D);
    ASSERT_EQ(rows.size(), 6u);
    const size_t total = EnumerateLabels(ds, LabelSource::kNative2D).size();
    for (size_t i = 0; i < rows.size(); ++i) {
      EXPECT_EQ(rows[i].tau, taus[i]);
      EXPECT_EQ(rows[i].deleted + rows[i].remaining, total);
      EXPECT_EQ(rows[i].tracks, rows[0].tracks);
      if (i > 0) EXPECT_LE(rows[i].deleted, rows[i - 1].deleted);
    }
  }
}

TEST(SweepTauTest, SingleAndDuplicateThresholds) {
  const Dataset ds = SynthDataset(5, synth::Rig::kNuScenes);
  const std::vector<double> one = {1.0};
  const auto r1 = SweepTau(ds, PresetNuScenes(), one, LabelSource::kNative2D);
  ASSERT_EQ(r1.size(), 1u);
  EXPECT_EQ(r1[0].deleted, 0u);
  const std::vector<double> dup = {0.2, 0.2};
  const auto r2 = SweepTau(ds, PresetNuScenes(), dup, LabelSource::kNative2D);
  ASSERT_EQ(r2.size(), 2u);
  EXPECT_EQ(r2[0], r2[1]);
}

TEST(CropOverlapTest, ColumnsForForwardCamera) {
  const CameraModel cam = testing::MakeCamera("CAM_FRONT", 0, 1000);
  // Left of the optical axis maps to low columns.
  EXPECT_EQ(OverlapColumns(cam, 20, 35), (std::pair<int, int>{100, 436}));
  EXPECT_EQ(OverlapColumns(cam, -35, -20), (std::pair<int, int>{1164, 1500}));
  const double half = HorizontalFov(cam) / 2;
  EXPECT_EQ(OverlapColumns(cam, -half, half), (std::pair<int, int>{0, 1599}));
  EXPECT_EQ(OverlapColumns(cam, -60, 60), (std::pair<int, int>{0, 1599}));
  EXPECT_THROW(OverlapColumns(cam, 100, 120), DomainError);
}

TEST(CropOverlapTest, SliceKeepsFullHeight) {
  const CameraModel cam = testing::MakeCamera("CAM_FRONT", 0, 1000);
  GrayImage img;
  img.width = 1600;
  img.height = 900;
  img.pixels.resize(1600 * 900);
  for (int y = 0; y < 900; ++y) {
    for (int x = 0; x < 1600; ++x) {
      img.pixels[static_cast<size_t>(y) * 1600 + x] =
          static_cast<std::uint8_t>(x % 256);
    }
  }
  const GrayImage crop = CropOverlap(img, cam, -35, -20);
  EXPECT_EQ(crop.width, 1500 - 1164 + 1);
  EXPECT_EQ(crop.height, 900);
  EXPECT_EQ(crop.At(0, 0), 1164 % 256);
  EXPECT_EQ(crop.At(crop.width - 1, 899), 1500 % 256);
  EXPECT_EQ(CropOverlap(img, cam, -90, 90), img);
  EXPECT_THROW(CropOverlap(img, cam, 170, 190), DomainError);
}

GrayImage Checker(bool phase, int scale = 255) {
  GrayImage img;
  img.width = kSimilarityGrid;
  img.height = kSimilarityGrid;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const bool on = ((x / 8 + y / 8) % 2 == 0) == phase;
      img.pixels.push_back(static_cast<std::uint8_t>(on ? scale : 0));
    }
  }
  return img;
}

TEST(CosineSimilarityTest, Examples) {
  const GrayImage a = Checker(true);
  EXPECT_NEAR(CosineSimilarity(a, a), 1.0, 1e-12);
  EXPECT_EQ(CosineSimilarity(a, Checker(false)), 0.0);
  EXPECT_NEAR(CosineSimilarity(a, Checker(true, 127)), 1.0, 1e-12);
  GrayImage dark = a;
  std::fill(dark.pixels.begin(), dark.pixels.end(), 0);
  EXPECT_THROW(CosineSimilarity(a, dark), DomainError);
}

TEST(CosineSimilarityTest, SymmetricAndScaleInvariant) {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> dim(1, 100);
  std::uniform_int_distribution<int> px(1, 120);
  for (int i = 0; i < 50; ++i) {
    GrayImage a, b;
    a.width = dim(rng);
    a.height = dim(rng);
    b.width = dim(rng);
    b.height = dim(rng);
    for (int k = 0; k < a.width * a.height; ++k) {
      a.pixels.push_back(static_cast<std::uint8_t>(px(rng)));
    }
    for (int k = 0; k < b.width * b.height; ++k) {
      b.pixels.push_back(static_cast<std::uint8_t>(px(rng)));
    }
    GrayImage b2 = b;
    for (auto& v : b2.pixels) v = static_cast<std::uint8_t>(v * 2);
    const double s = CosineSimilarity(a, b);
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 1.0);
    ASSERT_NEAR(s, CosineSimilarity(b, a), 1e-12);
    ASSERT_NEAR(s, CosineSimilarity(a, b2), 1e-12);
  }
}

TEST(ResampleBilinearTest, IdentitySizeIsExact) {
  const GrayImage a = Checker(true);
  const auto v = ResampleBilinear(a, a.width, a.height);
  for (size_t i = 0; i < v.size(); ++i) ASSERT_EQ(v[i], a.pixels[i]);
}

}  // namespace
}  // namespace avredux
