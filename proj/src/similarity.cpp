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
#include <cmath>
#include <numbers>

#include "avredux/error.hpp"
#include "avredux/multisource.hpp"

namespace avredux {
namespace {

// Column of a ray `phi_deg` right of the optical axis, saturating at the
// image edges instead of rejecting rays on the FoV boundary.
double SaturatedColumn(double phi_deg, const CameraModel& cam) {
  const double half = 0.5 * HorizontalFov(cam);
  if (std::abs(phi_deg) < half) return AngleToColumn(phi_deg, cam);
  const double phi = std::clamp(phi_deg, -half, half) * std::numbers::pi / 180;
  return std::clamp(cam.cx + cam.fx * std::tan(phi), 0.0,
                    static_cast<double>(cam.width - 1));
}

}  // namespace

std::pair<int, int> OverlapColumns(const CameraModel& cam, double arc_start,
                                   double arc_end) {
  if (!(arc_end > arc_start) || arc_end - arc_start >= 360.0) {
    throw DomainError("invalid arc [" + std::to_string(arc_start) + ", " +
                      std::to_string(arc_end) + "]");
  }
  const ViewArc view = MakeViewArc(cam);
  const ViewArc target{"arc", WrapDegrees(0.5 * (arc_start + arc_end)),
                       0.5 * (arc_end - arc_start)};
  const auto shared = OverlapArc(view, target);
  if (!shared) {
    throw DomainError("arc does not intersect the view of '" + cam.name + "'");
  }
  // Ego yaw grows to the left while image columns grow to the right, so the
  // counterclockwise end of the arc maps to the leftmost column.
  const double phi_left = WrapDegrees(view.center - shared->end);
  const double phi_right = WrapDegrees(view.center - shared->start);
  int left = static_cast<int>(std::lround(SaturatedColumn(phi_left, cam)));
  int right = static_cast<int>(std::lround(SaturatedColumn(phi_right, cam)));
  if (right < left) std::swap(left, right);
  return {left, right};
}

GrayImage CropOverlap(const GrayImage& img, const CameraModel& cam,
                      double arc_start, double arc_end) {
  auto [left, right] = OverlapColumns(cam, arc_start, arc_end);
  left = std::clamp(left, 0, img.width - 1);
  right = std::clamp(right, 0, img.width - 1);
  GrayImage out;
  out.width = right - left + 1;
  out.height = img.height;
  out.pixels.reserve(static_cast<size_t>(out.width) * out.height);
  for (int y = 0; y < img.height; ++y) {
    const auto row = img.pixels.begin() + static_cast<ptrdiff_t>(y) * img.width;
    out.pixels.insert(out.pixels.end(), row + left, row + right + 1);
  }
  return out;
}

std::vector<double> ResampleBilinear(const GrayImage& img, int width,
                                     int height) {
  if (img.width <= 0 || img.height <= 0 || img.pixels.empty()) {
    throw DomainError("cannot resample an empty image");
  }
  std::vector<double> out(static_cast<size_t>(width) * height);
  const double sx = static_cast<double>(img.width) / width;
  const double sy = static_cast<double>(img.height) / height;
  for (int y = 0; y < height; ++y) {
    const double fy =
        std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx =
          std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double wx = fx - x0;
      const double top = (1 - wx) * img.At(x0, y0) + wx * img.At(x1, y0);
      const double bottom = (1 - wx) * img.At(x0, y1) + wx * img.At(x1, y1);
      out[static_cast<size_t>(y) * width + x] = (1 - wy) * top + wy * bottom;
    }
  }
  return out;
}

double CosineSimilarity(const GrayImage& a, const GrayImage& b) {
  const auto va = ResampleBilinear(a, kSimilarityGrid, kSimilarityGrid);
  const auto vb = ResampleBilinear(b, kSimilarityGrid, kSimilarityGrid);
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (size_t i = 0; i < va.size(); ++i) {
    dot += va[i] * vb[i];
    na += va[i] * va[i];
    nb += vb[i] * vb[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw DomainError("cosine similarity undefined for an all-zero image");
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

}  // namespace avredux
