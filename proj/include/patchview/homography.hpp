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

#include <optional>
#include <span>

#include "patchview/geometry.hpp"

namespace patchview {

/// Invertible planar projective map, stored with h33 = 1 whenever h33 != 0
/// (otherwise scaled to unit Frobenius norm).
class Homography {
 public:
  Homography() = default;
  /// Normalizes `m`; throws Error("degenerate_homography") if it is singular.
  explicit Homography(const Mat3& m);

  static Homography identity() { return Homography(); }

  const Mat3& matrix() const { return m_; }
  Vec2 apply(const Vec2& p) const;
  /// Homogeneous weight of the image of `p`; the map is orientation-safe on a
  /// region only where this keeps one sign.
  double weight(const Vec2& p) const;
  Homography inverse() const;
  /// this after `first`.
  Homography operator*(const Homography& first) const;

 private:
  Mat3 m_ = Mat3::Identity();
};

/// Normalized DLT: Hartley-normalize both point sets, solve the stacked
/// 2n x 9 system by SVD, denormalize. Exact for four points in general
/// position, least squares for more.
///
/// Throws Error("degenerate_homography") for fewer than four
/// correspondences, a rank-deficient design matrix, three collinear points
/// among exactly four, or a singular result.
Homography estimate_homography(std::span<const Vec2> src, std::span<const Vec2> dst);

/// Least-squares affine map (last row 0 0 1) over three or more
/// correspondences, on Hartley-normalized coordinates. Throws
/// Error("degenerate_homography") when the points are collinear or the
/// result is singular.
Homography estimate_affine(std::span<const Vec2> src, std::span<const Vec2> dst);

/// Mean of |H s - d| + |H^-1 d - s| over correspondences, in pixels.
double symmetric_transfer_error(const Homography& h, std::span<const Vec2> src,
                                std::span<const Vec2> dst);

}  // namespace patchview
