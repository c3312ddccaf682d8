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

#ifndef AVREDUX_MULTIMODAL_HPP_
#define AVREDUX_MULTIMODAL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "avredux/geometry.hpp"

namespace avredux {

inline constexpr double kDefaultTheta = 0.5;

struct MatchPair {
  std::size_t base_index = 0;
  std::size_t lidar_index = 0;
  double iou = 0.0;
};

struct Matching {
  std::vector<MatchPair> pairs;  // in acceptance order (descending IoU)
  std::vector<std::size_t> unmatched_base;
  std::vector<std::size_t> unmatched_lidar;
};

// Greedy one-to-one matching: all cross pairs with IoU >= theta, accepted in
// descending IoU order (ties by base index, then lidar index).
Matching MatchBoxes(std::span<const Box3D> base, std::span<const Box3D> lidar,
                    double theta);

// Number of base boxes with at least one lidar box at IoU >= theta.
std::size_t CountCovered(std::span<const Box3D> base,
                         std::span<const Box3D> lidar, double theta);

// Fraction of base boxes that have some lidar counterpart at IoU >= theta.
// Throws DomainError for an empty base set.
double RedundancyRatio(std::span<const Box3D> base,
                       std::span<const Box3D> lidar, double theta);

// Keeps boxes whose corner centroid lies at least `t_dist` meters from the
// ego origin, in input order.
std::vector<Box3D> DistancePrune(std::span<const Box3D> lidar, double t_dist);

// Fraction of base boxes without a counterpart in `pruned` at IoU >= theta.
double LostRatio(std::span<const Box3D> base, std::span<const Box3D> pruned,
                 double theta);

struct DistanceSweepRow {
  double t_dist = 0.0;
  std::size_t pruned_count = 0;
  double lost_ratio = 0.0;

  bool operator==(const DistanceSweepRow&) const = default;
};

std::vector<DistanceSweepRow> SweepDistance(std::span<const Box3D> base,
                                            std::span<const Box3D> lidar,
                                            double theta,
                                            std::span<const double> thresholds);

// Welch's unequal-variance two-sample t-test.
struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
};

TTestResult WelchTTest(std::span<const double> a, std::span<const double> b);

}  // namespace avredux

#endif  // AVREDUX_MULTIMODAL_HPP_
