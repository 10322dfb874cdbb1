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

#include "patchview/geometry.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "patchview/error.hpp"

namespace patchview {

Viewpoint Viewpoint::from_matrix(const std::array<double, 16>& m) {
  Viewpoint v;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) v.rotation(r, c) = m[std::size_t(4 * r + c)];
    v.translation(r) = m[std::size_t(4 * r + 3)];
  }
  if (!v.is_rigid(1e-6)) {
    throw Error("invalid_viewpoint", "4x4 view matrix does not hold a proper rotation");
  }
  return v;
}

std::array<double, 16> Viewpoint::to_matrix() const {
  std::array<double, 16> m{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[std::size_t(4 * r + c)] = rotation(r, c);
    m[std::size_t(4 * r + 3)] = translation(r);
  }
  m[15] = 1.0;
  return m;
}

Viewpoint Viewpoint::inverse() const {
  Viewpoint inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

Viewpoint Viewpoint::compose(const Viewpoint& first) const {
  Viewpoint out;
  out.rotation = rotation * first.rotation;
  out.translation = rotation * first.translation + translation;
  return out;
}

bool Viewpoint::is_rigid(double tol) const {
  const Mat3 gram = rotation.transpose() * rotation;
  return (gram - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(rotation.determinant() - 1.0) <= tol && translation.allFinite();
}

double normalize_azimuth(double azimuth_deg) {
  double a = std::fmod(azimuth_deg, 360.0);
  if (a < 0) a += 360.0;
  // Snap to a 2^-20 degree grid. Adding 360 perturbs only bits far below the
  // grid, so az and az + 360 normalize to the same double.
  constexpr double kGrid = 1048576.0;
  a = std::nearbyint(a * kGrid) / kGrid;
  // Rounding (or fmod of a tiny negative value) can land on 360.
  if (a >= 360.0) a = 0.0;
  return a;
}

SphericalPose SphericalPose::make(double azimuth_deg, double elevation_deg, double radius) {
  if (!std::isfinite(azimuth_deg) || !std::isfinite(elevation_deg) || !std::isfinite(radius)) {
    throw Error("invalid_pose", "pose components must be finite");
  }
  if (elevation_deg < -90.0 || elevation_deg > 90.0) {
    throw Error("invalid_pose", "elevation must lie in [-90, 90] degrees");
  }
  if (!(radius > 0.0)) throw Error("invalid_pose", "radius must be positive");
  return {normalize_azimuth(azimuth_deg), elevation_deg, radius};
}

Intrinsics Intrinsics::centered(ImageSize size, double focal) {
  if (!(focal > 0.0)) throw Error("invalid_intrinsics", "focal must be positive");
  return {focal, Vec2(size.width / 2.0, size.height / 2.0)};
}

Vec3 spherical_to_cartesian(const SphericalPose& pose, const Vec3& look_at) {
  const double az = deg_to_rad(normalize_azimuth(pose.azimuth_deg));
  const double el = deg_to_rad(pose.elevation_deg);
  return look_at + pose.radius * Vec3(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                                      std::sin(el));
}

Viewpoint viewpoint_from_spherical(const SphericalPose& pose, const Vec3& look_at, const Vec3& up) {
  if (!(pose.radius > 0.0)) throw Error("invalid_pose", "radius must be positive");
  const Vec3 center = spherical_to_cartesian(pose, look_at);
  const Vec3 forward = (look_at - center).normalized();
  const Vec3 side = forward.cross(up);
  if (side.norm() < 1e-9 * std::max(1.0, up.norm())) {
    throw Error("degenerate_up", "up vector is parallel to the viewing direction (elevation " +
                                     std::to_string(pose.elevation_deg) + " deg)");
  }
  const Vec3 right = side.normalized();
  const Vec3 down = forward.cross(right);

  Viewpoint v;
  v.rotation.row(0) = right.transpose();
  v.rotation.row(1) = down.transpose();
  v.rotation.row(2) = forward.transpose();
  v.translation = -(v.rotation * center);
  return v;
}

KeypointSet2D project_points(const KeypointSet3D& points, const Viewpoint& view, const Intrinsics& k,
                             std::optional<ImageSize> normalize_to) {
  KeypointSet2D out;
  std::vector<std::string> behind;
  for (const auto& [name, world] : points) {
    const Vec3 cam = view.apply(world);
    if (!(cam.z() > 0.0)) {
      behind.push_back(name);
      continue;
    }
    Vec2 px = project_camera_point(cam, k);
    if (normalize_to) px = Vec2(px.x() / normalize_to->width, px.y() / normalize_to->height);
    out.emplace(name, px);
  }
  if (!behind.empty()) {
    std::ostringstream msg;
    msg << "keypoints with non-positive depth:";
    for (const auto& n : behind) msg << " '" << n << "'";
    throw Error("non_positive_depth", msg.str());
  }
  return out;
}

KeypointSet2D to_pixels(const KeypointSet2D& normalized, ImageSize size) {
  KeypointSet2D out;
  for (const auto& [name, p] : normalized) {
    out.emplace(name, Vec2(p.x() * size.width, p.y() * size.height));
  }
  return out;
}

KeypointSet2D to_normalized(const KeypointSet2D& pixels, ImageSize size) {
  KeypointSet2D out;
  for (const auto& [name, p] : pixels) {
    out.emplace(name, Vec2(p.x() / size.width, p.y() / size.height));
  }
  return out;
}

}  // namespace patchview
