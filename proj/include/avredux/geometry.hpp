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

#ifndef AVREDUX_GEOMETRY_HPP_
#define AVREDUX_GEOMETRY_HPP_

#include <array>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

// Coordinate conventions used throughout the library:
//   ego frame:    x forward, y left, z up (meters)
//   camera frame: z forward (optical axis), x right, y down
// Angles are radians internally and degrees wherever they are reported.

namespace avredux {

using Vec3 = Eigen::Vector3d;

// Corners closer than this along the optical axis are dropped before
// projection.
inline constexpr double kNearPlane = 0.1;

struct CameraModel {
  std::string name;
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;
  // Maps camera-frame vectors into the ego frame.
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  // Camera origin expressed in the ego frame.
  Vec3 translation = Vec3::Zero();

  // Throws ValidationError when an intrinsic is non-positive or the rotation
  // is not a unit quaternion (tolerance 1e-9).
  void Validate() const;

  Vec3 EgoToCamera(const Vec3& p_ego) const;
};

// Builds the camera->ego rotation for a camera whose optical axis lies in the
// ego ground plane at `yaw_deg` (counterclockwise from ego +x) with image rows
// pointing down.
Eigen::Quaterniond LevelCameraRotation(double yaw_deg);

struct Cuboid3D {
  Vec3 center = Vec3::Zero();
  Vec3 size = Vec3::Ones();  // length (along heading), width, height
  double yaw = 0.0;          // radians about ego +z

  void Validate() const;
};

struct Box3D : Cuboid3D {
  double score = 1.0;

  void Validate() const;
};

struct ImageBounds {
  int width = 0;
  int height = 0;

  bool operator==(const ImageBounds&) const = default;
};

// Axis-aligned pixel box. Full boxes have positive area; clipped boxes may be
// empty, in which case x0 == x1 or y0 == y1.
struct Box2D {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
  std::optional<ImageBounds> clipped_to;

  double Width() const { return x1 > x0 ? x1 - x0 : 0.0; }
  double Height() const { return y1 > y0 ? y1 - y0 : 0.0; }
  double Area() const { return Width() * Height(); }
  bool SameExtent(const Box2D& other) const {
    return x0 == other.x0 && y0 == other.y0 && x1 == other.x1 &&
           y1 == other.y1;
  }

  bool operator==(const Box2D&) const = default;
};

struct ProjectedBox {
  Box2D full;
  Box2D clipped;
};

// Bottom face counterclockwise (seen from above) starting at the +x+y corner,
// then the top face in the same order.
std::array<Vec3, 8> CuboidCorners(const Cuboid3D& c);

Box2D ClipToImage(const Box2D& box, int width, int height);

// Returns nullopt when no corner lies in front of the near plane, or when the
// surviving corners span no area.
std::optional<ProjectedBox> ProjectCuboid(const Cuboid3D& c,
                                          const CameraModel& cam);

// Bounding-Box Completeness Score: visible (clipped) area over full area.
double Bcs(const Box2D& full, const Box2D& clipped);

double Iou2d(const Box2D& a, const Box2D& b);

// Rotated bird's-eye-view footprint intersection times vertical overlap,
// over the union volume.
double Iou3d(const Cuboid3D& a, const Cuboid3D& b);

// Norm of the mean of the eight corners.
double CentroidDistance(const Cuboid3D& b);

double HorizontalFov(const CameraModel& cam);

// Heading of the optical axis in the ego ground plane, degrees in [-180, 180).
double YawCenter(const CameraModel& cam);

// Pixel column for a ray `phi_deg` right of the optical axis, clamped to
// [0, width - 1]. Throws DomainError when |phi| >= half the horizontal FoV.
double AngleToColumn(double phi_deg, const CameraModel& cam);

// Wraps an angle in degrees into [-180, 180).
double WrapDegrees(double deg);

}  // namespace avredux

#endif  // AVREDUX_GEOMETRY_HPP_
