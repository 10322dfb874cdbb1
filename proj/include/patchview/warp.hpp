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

#include <map>
#include <string>
#include <vector>

#include "patchview/geometry.hpp"
#include "patchview/homography.hpp"
#include "patchview/image.hpp"
#include "patchview/patch_spec.hpp"
#include "patchview/polygon.hpp"
#include "patchview/raster.hpp"

namespace patchview {

enum class DropReason {
  kNone,
  kInvisibleSource,       // occluded at the viewpoint the pixels come from
  kInvisibleDestination,  // occluded at the viewpoint they are warped to
  kDegenerate,            // collinear hull, failed fit, or a folding homography
};

const char* to_string(DropReason reason);

struct Patch {
  Polygon source_polygon;       // pixels, in the image the content came from
  Polygon destination_polygon;  // pixels, where `content` is opaque
  Homography homography;        // source -> destination
  /// RGB is defined on the destination polygon's bounding box (grown by the
  /// interpolation margin) and zero elsewhere; alpha is 255 exactly on
  /// covered pixels inside the destination polygon.
  RgbaImage content;
  DropReason drop = DropReason::kNone;
  /// Patch whose source pixels fill this one; differs from the patch's own
  /// name after symmetry transfer.
  std::string content_from;

  bool dropped() const { return drop != DropReason::kNone; }
};

struct PatchSet {
  ImageSize size;
  std::map<std::string, Patch> patches;

  std::vector<std::string> dropped_names() const;
  std::vector<std::string> degraded_names() const;  // DropReason::kDegenerate only
};

/// Pixels of margin around a polygon where interpolated colors are kept.
inline constexpr int kColorMargin = 2;

/// Convex hulls of each patch's keypoints (normalized input, pixel output).
/// Content is left empty; collinear hulls are marked degenerate. Throws
/// Error("missing_keypoints") listing every absent name.
PatchSet extract_patches(const KeypointSet2D& kps, const PatchSpec& spec, ImageSize size);

/// As above, with each patch's content set to its source crop.
PatchSet extract_patches(const KeypointSet2D& kps, const PatchSpec& spec, const RgbImage& image);

/// Image colors within the polygon's grown bounding box; alpha set on pixel
/// centers inside the polygon.
RgbaImage source_crop(const RgbImage& image, const Polygon& polygon);

/// Inverse warp: every output pixel near `dst_polygon` samples `source` at
/// H^-1 of its center with bilinear interpolation. Samples outside the source
/// frame, or with no opaque tap, come out transparent.
RgbaImage warp_patch(const RgbaImage& source, const Polygon& dst_polygon, const Homography& h,
                     ImageSize out_size);
/// Serial reference for warp_patch().
RgbaImage warp_patch_reference(const RgbaImage& source, const Polygon& dst_polygon,
                               const Homography& h, ImageSize out_size);

/// Per-patch homographies fitted on that patch's keypoint correspondences.
/// Patches already dropped stay dropped; patches whose fit degenerates, or
/// that are flagged invisible in `destination_visibility`, are dropped.
PatchSet warp_to_view(const PatchSet& source, const KeypointSet2D& kps_src, const KeypointSet2D& kps_dst,
                      const PatchSpec& spec, const VisibilityFlags* destination_visibility = nullptr);

/// Warps every patch to an intermediate view and back. Patches invisible at
/// either end, or degenerate at either end, are zeroed.
PatchSet dewarp_roundtrip(const RgbImage& image, const KeypointSet2D& kps_src,
                          const KeypointSet2D& kps_mid, const PatchSpec& spec,
                          const VisibilityFlags& visibility_src, const VisibilityFlags& visibility_mid);

/// Fills patches that are needed at the destination but invisible at the
/// source from their visible mirror partner, routing correspondences through
/// keypoint_mirror so the texture comes out mirrored. Everything else passes
/// through unchanged.
PatchSet symmetry_transfer(const PatchSet& source, const PatchSet& warped, const KeypointSet2D& kps_src,
                           const KeypointSet2D& kps_dst, const VisibilityFlags& visibility_src,
                           const VisibilityFlags& visibility_dst, const PatchSpec& spec);

}  // namespace patchview
