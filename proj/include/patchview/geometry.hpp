/* Copyright 2026 The patchview Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <map>
#include <optional>
#include <string>

#include "patchview/image.hpp"

namespace patchview {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// 3D keypoints of a CAD model, keyed by semantic name (model units).
using KeypointSet3D = std::map<std::string, Vec3>;
/// 2D keypoints keyed by name. Normalized to [0,1]^2 at module boundaries;
/// pixel coordinates only inside rasterization and warping.
using KeypointSet2D = std::map<std::string, Vec2>;

inline constexpr double kDefaultFocal = 3000.0;

/// Rigid world-to-camera transform: X_cam = rotation * X_world + translation.
///
/// The camera frame follows the pinhole convention used by the projection:
/// +x to the image right, +y to the image bottom, +z along the optical axis
/// (positive depth in front of the camera).
struct Viewpoint {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Viewpoint identity() { return {}; }
  /// Row-major 4x4 [R t; 0 1]. Throws if R is not a proper rotation.
  static Viewpoint from_matrix(const std::array<double, 16>& m);
  std::array<double, 16> to_matrix() const;

  Vec3 apply(const Vec3& world) const { return rotation * world + translation; }
  Viewpoint inverse() const;
  /// (*this) after `first`: x -> this(first(x)).
  Viewpoint compose(const Viewpoint& first) const;
  Vec3 camera_center() const { return -rotation.transpose() * translation; }
  /// Orthonormality and det(R) = +1 within `tol`.
  bool is_rigid(double tol = 1e-9) const;
};

/// Orbit pose around a look-at point. Azimuth is kept in [0, 360).
struct SphericalPose {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
  double radius = 1.0;

  /// Validates (finite angles, |elevation| <= 90, radius > 0) and wraps azimuth.
  static SphericalPose make(double azimuth_deg, double elevation_deg, double radius);
  bool operator==(const SphericalPose&) const = default;
};

double normalize_azimuth(double azimuth_deg);

struct Intrinsics {
  double focal = kDefaultFocal;
  Vec2 principal_point = Vec2::Zero();

  /// Principal point at the image center.
  static Intrinsics centered(ImageSize size, double focal = kDefaultFocal);
};

/// Camera center for a pose in the z-up world:
/// look_at + r * (cos el cos az, cos el sin az, sin el).
Vec3 spherical_to_cartesian(const SphericalPose& pose, const Vec3& look_at = Vec3::Zero());

/// Camera at the spherical position looking at `look_at`; `up` fixes the roll.
/// Throws Error("degenerate_up") when `up` is parallel to the gaze.
Viewpoint viewpoint_from_spherical(const SphericalPose& pose, const Vec3& look_at = Vec3::Zero(),
                                   const Vec3& up = Vec3::UnitZ());

/// Pinhole projection of a camera-frame point to pixel coordinates.
inline Vec2 project_camera_point(const Vec3& p, const Intrinsics& k) {
  return {k.focal * p.x() / p.z() + k.principal_point.x(),
          k.focal * p.y() / p.z() + k.principal_point.y()};
}

/// Projects named world points. Pixel output unless `normalize_to` is given,
/// in which case coordinates are divided by the image size. Throws
/// Error("non_positive_depth") naming every point at or behind the camera.
KeypointSet2D project_points(const KeypointSet3D& points, const Viewpoint& view, const Intrinsics& k,
                             std::optional<ImageSize> normalize_to = std::nullopt);

KeypointSet2D to_pixels(const KeypointSet2D& normalized, ImageSize size);
KeypointSet2D to_normalized(const KeypointSet2D& pixels, ImageSize size);

inline double deg_to_rad(double deg) { return deg * (M_PI / 180.0); }

}  // namespace patchview
