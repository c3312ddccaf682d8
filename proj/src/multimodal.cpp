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

#include "avredux/multimodal.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "avredux/error.hpp"
#include "avredux/stats.hpp"

namespace avredux {
namespace {

void CheckTheta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw ValidationError("theta must lie in (0, 1], got " +
                          std::to_string(theta));
  }
}

// Bounding spheres that do not touch cannot intersect.
bool MayOverlap(const Box3D& a, const Box3D& b) {
  const double reach = 0.5 * (a.size.norm() + b.size.norm());
  return (a.center - b.center).squaredNorm() <= reach * reach;
}

bool HasCounterpart(const Box3D& b, std::span<const Box3D> others,
                    double theta) {
  for (const Box3D& o : others) {
    if (MayOverlap(b, o) && Iou3d(b, o) >= theta) return true;
  }
  return false;
}

double Mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double SampleVariance(std::span<const double> xs, double mean) {
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace

Matching MatchBoxes(std::span<const Box3D> base, std::span<const Box3D> lidar,
                    double theta) {
  CheckTheta(theta);
  std::vector<MatchPair> candidates;
  for (size_t i = 0; i < base.size(); ++i) {
    for (size_t j = 0; j < lidar.size(); ++j) {
      if (!MayOverlap(base[i], lidar[j])) continue;
      const double iou = Iou3d(base[i], lidar[j]);
      if (iou >= theta) candidates.push_back({i, j, iou});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const MatchPair& x, const MatchPair& y) {
              return std::make_tuple(-x.iou, x.base_index, x.lidar_index) <
                     std::make_tuple(-y.iou, y.base_index, y.lidar_index);
            });

  Matching m;
  std::vector<bool> base_used(base.size(), false);
  std::vector<bool> lidar_used(lidar.size(), false);
  for (const MatchPair& c : candidates) {
    if (base_used[c.base_index] || lidar_used[c.lidar_index]) continue;
    base_used[c.base_index] = true;
    lidar_used[c.lidar_index] = true;
    m.pairs.push_back(c);
  }
  for (size_t i = 0; i < base.size(); ++i) {
    if (!base_used[i]) m.unmatched_base.push_back(i);
  }
  for (size_t j = 0; j < lidar.size(); ++j) {
    if (!lidar_used[j]) m.unmatched_lidar.push_back(j);
  }
  return m;
}

std::size_t CountCovered(std::span<const Box3D> base,
                         std::span<const Box3D> lidar, double theta) {
  CheckTheta(theta);
  return static_cast<std::size_t>(
      std::count_if(base.begin(), base.end(), [&](const Box3D& b) {
        return HasCounterpart(b, lidar, theta);
      }));
}

double RedundancyRatio(std::span<const Box3D> base,
                       std::span<const Box3D> lidar, double theta) {
  if (base.empty()) {
    throw DomainError("redundancy ratio undefined for an empty baseline set");
  }
  return static_cast<double>(CountCovered(base, lidar, theta)) /
         static_cast<double>(base.size());
}

std::vector<Box3D> DistancePrune(std::span<const Box3D> lidar, double t_dist) {
  if (!(t_dist >= 0.0)) {
    throw ValidationError("distance threshold must be >= 0");
  }
  std::vector<Box3D> kept;
  for (const Box3D& b : lidar) {
    if (CentroidDistance(b) >= t_dist) kept.push_back(b);
  }
  return kept;
}

double LostRatio(std::span<const Box3D> base, std::span<const Box3D> pruned,
                 double theta) {
  if (base.empty()) {
    throw DomainError("lost ratio undefined for an empty baseline set");
  }
  return 1.0 - static_cast<double>(CountCovered(base, pruned, theta)) /
                   static_cast<double>(base.size());
}

std::vector<DistanceSweepRow> SweepDistance(
    std::span<const Box3D> base, std::span<const Box3D> lidar, double theta,
    std::span<const double> thresholds) {
  if (thresholds.empty()) {
    throw ValidationError("distance sweep needs at least one threshold");
  }
  std::vector<DistanceSweepRow> rows;
  rows.reserve(thresholds.size());
  for (double t : thresholds) {
    const std::vector<Box3D> pruned = DistancePrune(lidar, t);
    rows.push_back({t, lidar.size() - pruned.size(),
                    LostRatio(base, pruned, theta)});
  }
  return rows;
}

TTestResult WelchTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw DomainError("t-test needs at least two observations per sample");
  }
  const double mean_a = Mean(a);
  const double mean_b = Mean(b);
  const double se_a = SampleVariance(a, mean_a) / static_cast<double>(a.size());
  const double se_b = SampleVariance(b, mean_b) / static_cast<double>(b.size());
  const double se2 = se_a + se_b;
  if (!(se2 > 0.0)) {
    throw DomainError("t-test undefined: both samples have zero variance");
  }
  TTestResult r;
  r.t = (mean_a - mean_b) / std::sqrt(se2);
  r.df = se2 * se2 /
         (se_a * se_a / static_cast<double>(a.size() - 1) +
          se_b * se_b / static_cast<double>(b.size() - 1));
  const double x = r.df / (r.df + r.t * r.t);
  r.p_two_sided = std::clamp(
      stats::RegularizedIncompleteBeta(0.5 * r.df, 0.5, x), 0.0, 1.0);
  return r;
}

}  // namespace avredux
