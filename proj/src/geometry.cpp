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

#include "avredux/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "avredux/error.hpp"

namespace avredux {
namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

double ToRad(double deg) { return deg / kDegPerRad; }

struct Point2 {
  double x;
  double y;
};

double Cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::array<Point2, 4> Footprint(const Cuboid3D& c) {
  const double hl = 0.5 * c.size.x();
  const double hw = 0.5 * c.size.y();
  const double cs = std::cos(c.yaw);
  const double sn = std::sin(c.yaw);
  const std::array<Point2, 4> local = {
      Point2{hl, hw}, Point2{-hl, hw}, Point2{-hl, -hw}, Point2{hl, -hw}};
  std::array<Point2, 4> out{};
  for (size_t i = 0; i < 4; ++i) {
    out[i] = {c.center.x() + cs * local[i].x - sn * local[i].y,
              c.center.y() + sn * local[i].x + cs * local[i].y};
  }
  return out;
}

// Sutherland-Hodgman clip of a convex polygon against a convex,
// counterclockwise clip polygon.
std::vector<Point2> ClipConvex(std::vector<Point2> subject,
                               const std::array<Point2, 4>& clip) {
  for (size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Point2& a = clip[e];
    const Point2& b = clip[(e + 1) % clip.size()];
    std::vector<Point2> out;
    out.reserve(subject.size() + 2);
    for (size_t i = 0; i < subject.size(); ++i) {
      const Point2& p = subject[i];
      const Point2& q = subject[(i + 1) % subject.size()];
      const double dp = Cross(a, b, p);
      const double dq = Cross(a, b, q);
      if (dp >= 0.0) out.push_back(p);
      if ((dp >= 0.0) != (dq >= 0.0)) {
        const double t = dp / (dp - dq);
        out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
    subject = std::move(out);
  }
  return subject;
}

double PolygonArea(const std::vector<Point2>& poly) {
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    twice += p.x * q.y - q.x * p.y;
  }
  return std::abs(0.5 * twice);
}

auto OrderKey(const Cuboid3D& c) {
  return std::make_tuple(c.center.x(), c.center.y(), c.center.z(), c.size.x(),
                         c.size.y(), c.size.z(), c.yaw);
}

bool AllFinite(const Vec3& v) { return v.allFinite(); }

}  // namespace

void CameraModel::Validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw ValidationError("camera '" + name + "': focal lengths must be > 0");
  }
  if (width <= 0 || height <= 0) {
    throw ValidationError("camera '" + name +
                          "': image dimensions must be > 0");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy) || !AllFinite(translation)) {
    throw ValidationError("camera '" + name + "': non-finite calibration");
  }
  if (std::abs(rotation.norm() - 1.0) > 1e-9) {
    throw ValidationError("camera '" + name +
                          "': rotation is not a unit quaternion");
  }
}

Vec3 CameraModel::EgoToCamera(const Vec3& p_ego) const {
  return rotation.conjugate() * (p_ego - translation);
}

Eigen::Quaterniond LevelCameraRotation(double yaw_deg) {
  const double yaw = ToRad(yaw_deg);
  const double cs = std::cos(yaw);
  const double sn = std::sin(yaw);
  Eigen::Matrix3d r;
  // Columns: camera x (right), y (down), z (forward) in ego coordinates.
  r.col(0) = Vec3(sn, -cs, 0.0);
  r.col(1) = Vec3(0.0, 0.0, -1.0);
  r.col(2) = Vec3(cs, sn, 0.0);
  Eigen::Quaterniond q(r);
  q.normalize();
  return q;
}

void Cuboid3D::Validate() const {
  if (!AllFinite(center) || !std::isfinite(yaw)) {
    throw ValidationError("cuboid has non-finite pose");
  }
  if (!(size.x() > 0.0) || !(size.y() > 0.0) || !(size.z() > 0.0)) {
    throw ValidationError("cuboid size components must be > 0");
  }
}

void Box3D::Validate() const {
  Cuboid3D::Validate();
  if (!(score >= 0.0 && score <= 1.0)) {
    throw ValidationError("box score must lie in [0, 1]");
  }
}

std::array<Vec3, 8> CuboidCorners(const Cuboid3D& c) {
  const std::array<Point2, 4> fp = Footprint(c);
  const double hz = 0.5 * c.size.z();
  std::array<Vec3, 8> corners;
  for (size_t i = 0; i < 4; ++i) {
    corners[i] = Vec3(fp[i].x, fp[i].y, c.center.z() - hz);
    corners[i + 4] = Vec3(fp[i].x, fp[i].y, c.center.z() + hz);
  }
  return corners;
}

Box2D ClipToImage(const Box2D& box, int width, int height) {
  const double w = width;
  const double h = height;
  Box2D out;
  out.x0 = std::clamp(box.x0, 0.0, w);
  out.x1 = std::clamp(box.x1, 0.0, w);
  out.y0 = std::clamp(box.y0, 0.0, h);
  out.y1 = std::clamp(box.y1, 0.0, h);
  out.clipped_to = ImageBounds{width, height};
  return out;
}

std::optional<ProjectedBox> ProjectCuboid(const Cuboid3D& c,
                                          const CameraModel& cam) {
  double u_min = std::numeric_limits<double>::infinity();
  double v_min = u_min;
  double u_max = -u_min;
  double v_max = -u_min;
  int survivors = 0;
  for (const Vec3& corner : CuboidCorners(c)) {
    const Vec3 p = cam.EgoToCamera(corner);
    if (p.z() <= kNearPlane) continue;
    ++survivors;
    const double u = cam.cx + cam.fx * p.x() / p.z();
    const double v = cam.cy + cam.fy * p.y() / p.z();
    u_min = std::min(u_min, u);
    u_max = std::max(u_max, u);
    v_min = std::min(v_min, v);
    v_max = std::max(v_max, v);
  }
  if (survivors == 0 || !(u_max > u_min) || !(v_max > v_min)) {
    return std::nullopt;
  }
  ProjectedBox out;
  out.full = Box2D{u_min, v_min, u_max, v_max, std::nullopt};
  out.clipped = ClipToImage(out.full, cam.width, cam.height);
  return out;
}

double Bcs(const Box2D& full, const Box2D& clipped) {
  const double full_area = full.Area();
  if (!(full_area > 0.0)) {
    throw DomainError("BCS undefined for a degenerate full box");
  }
  const double clipped_area = clipped.Area();
  if (clipped_area == 0.0) return 0.0;
  if (clipped.x0 < full.x0 || clipped.y0 < full.y0 || clipped.x1 > full.x1 ||
      clipped.y1 > full.y1) {
    throw DomainError("clipped box is not contained in the full box");
  }
  if (clipped.SameExtent(full)) return 1.0;
  // A strictly smaller sub-box has strictly smaller area; rounding must not
  // report it as complete.
  return std::min(clipped_area / full_area, std::nextafter(1.0, 0.0));
}

double Iou2d(const Box2D& a, const Box2D& b) {
  const double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.Area() + b.Area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double Iou3d(const Cuboid3D& a, const Cuboid3D& b) {
  if (OrderKey(a) == OrderKey(b)) return 1.0;
  // Fixed argument order keeps the result bit-identical under swapping.
  const Cuboid3D& lo = OrderKey(a) < OrderKey(b) ? a : b;
  const Cuboid3D& hi = OrderKey(a) < OrderKey(b) ? b : a;

  const double z_overlap =
      std::min(lo.center.z() + 0.5 * lo.size.z(),
               hi.center.z() + 0.5 * hi.size.z()) -
      std::max(lo.center.z() - 0.5 * lo.size.z(),
               hi.center.z() - 0.5 * hi.size.z());
  if (z_overlap <= 0.0) return 0.0;

  const std::array<Point2, 4> fp_lo = Footprint(lo);
  const std::vector<Point2> subject(fp_lo.begin(), fp_lo.end());
  const double area = PolygonArea(ClipConvex(subject, Footprint(hi)));
  const double vol_lo = lo.size.prod();
  const double vol_hi = hi.size.prod();
  const double inter = std::min(area * z_overlap, std::min(vol_lo, vol_hi));
  const double uni = vol_lo + vol_hi - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double CentroidDistance(const Cuboid3D& b) {
  Vec3 sum = Vec3::Zero();
  for (const Vec3& v : CuboidCorners(b)) sum += v;
  return (sum / 8.0).norm();
}

double HorizontalFov(const CameraModel& cam) {
  return 2.0 * std::atan(cam.width / (2.0 * cam.fx)) * kDegPerRad;
}

double WrapDegrees(double deg) {
  double w = std::fmod(deg + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  w -= 180.0;
  return w >= 180.0 ? w - 360.0 : w;
}

double YawCenter(const CameraModel& cam) {
  const Vec3 axis = cam.rotation * Vec3::UnitZ();
  if (std::hypot(axis.x(), axis.y()) <= 1e-6) {
    throw DomainError("camera '" + cam.name +
                      "': optical axis is vertical, yaw undefined");
  }
  return WrapDegrees(std::atan2(axis.y(), axis.x()) * kDegPerRad);
}

double AngleToColumn(double phi_deg, const CameraModel& cam) {
  const double half = 0.5 * HorizontalFov(cam);
  if (!(std::abs(phi_deg) < half)) {
    throw DomainError("angle " + std::to_string(phi_deg) +
                      " deg lies outside the field of view of '" + cam.name +
                      "'");
  }
  const double col = cam.cx + cam.fx * std::tan(ToRad(phi_deg));
  return std::clamp(col, 0.0, static_cast<double>(cam.width - 1));
}

}  // namespace avredux
