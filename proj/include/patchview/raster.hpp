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

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "patchview/geometry.hpp"
#include "patchview/image.hpp"
#include "patchview/patch_spec.hpp"

namespace patchview {

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  /// Optional per-face group name (OBJ `g`); empty or one entry per face.
  std::vector<std::string> face_labels;

  std::size_t face_count() const { return faces.size(); }
};

/// OBJ subset: `v x y z`, triangular `f` (1-based, `a/b/c` forms accepted,
/// texture/normal indices ignored), `g name`. Everything else is skipped.
/// Quads and out-of-range indices are rejected with Error("invalid_mesh").
/// Zero-area faces are dropped after parsing.
Mesh parse_obj(std::istream& in, const std::string& origin = "<stream>");
Mesh load_obj(const std::filesystem::path& path);
void write_obj(const std::filesystem::path& path, const Mesh& mesh);

/// Removes zero-area faces (and their labels); returns how many were removed.
std::size_t remove_degenerate_faces(Mesh& mesh);

/// Applies x -> rotation * x + translation to every vertex.
Mesh transform_mesh(const Mesh& mesh, const Mat3& rotation, const Vec3& translation = Vec3::Zero());

/// Per-pixel results of a depth-tested render.
///
/// Normals are unit face normals oriented toward the camera and expressed in
/// the viewer frame used by normal maps: +x image right, +y image up, +z
/// toward the viewer. A surface squarely facing the camera stores (0, 0, 1).
struct RenderBuffers {
  ImageSize size;
  std::vector<double> depth;     // camera-frame z, +inf where empty
  std::vector<Vec3> normals;     // zero where empty
  std::vector<std::int32_t> face_id;  // -1 where empty
  Mask silhouette;               // 255 on the object, 0 elsewhere
  /// Set when every face was at or behind the camera plane.
  bool behind_camera = false;
  /// Faces skipped because a vertex had non-positive depth or the face was edge-on.
  int skipped_faces = 0;

  std::size_t index(int x, int y) const { return std::size_t(y) * std::size_t(size.width) + std::size_t(x); }
  bool covered(int x, int y) const { return face_id[index(x, y)] >= 0; }
};

/// Z-buffer rasterization sampled at pixel centers with flat face normals.
/// Depth is the exact plane depth along each pixel ray; ties go to the lowest
/// face index. Row bands are processed in parallel; output is identical to
/// rasterize_reference().
RenderBuffers rasterize(const Mesh& mesh, const Viewpoint& view, const Intrinsics& k, ImageSize size);

/// Serial face-by-face implementation kept as the reference for tests and
/// benchmarks.
RenderBuffers rasterize_reference(const Mesh& mesh, const Viewpoint& view, const Intrinsics& k,
                                  ImageSize size);

/// round(255 * (n + 1) / 2) per channel.
Rgb encode_normal(const Vec3& n);
Vec3 decode_normal(const Rgb& c);

/// Encoded normals on the silhouette, kBackground elsewhere.
RgbImage render_sketch(const RenderBuffers& buffers);

struct VisibilityOptions {
  double threshold = 0.5;        // fraction at or above which a patch counts as visible
  double depth_tolerance = 0.005;  // relative: |d - zbuffer| <= tol * d
  int grid = 8;                  // samples per axis over the patch bounding box
  /// Minimum |cos| between the patch plane and the surface hit in the
  /// z-buffer. Rejects samples that pass the depth test on a different,
  /// nearby surface; a non-positive value disables the check.
  double normal_agreement = 0.9;
};

struct PatchVisibility {
  double fraction = 0.0;
  int samples = 0;
  bool degenerate = false;
  bool visible = false;
};

using VisibilityReport = std::map<std::string, PatchVisibility>;
using VisibilityFlags = std::map<std::string, bool>;

/// Sample points on the plane polygon spanned by the named 3D keypoints:
/// best-fit plane, convex hull in plane coordinates, cell-centered grid kept
/// strictly inside the hull. nullopt for fewer than three or collinear points.
std::optional<std::vector<Vec3>> patch_sample_points(const KeypointSet3D& kps,
                                                     const std::vector<std::string>& names, int grid);

/// Fraction of each patch's plane samples that agree with the z-buffer.
/// Buffers must come from the same view and intrinsics.
VisibilityReport patch_visibility(const KeypointSet3D& kps3d, const PatchSpec& spec,
                                  const RenderBuffers& buffers, const Viewpoint& view,
                                  const Intrinsics& k, const VisibilityOptions& options = {});

VisibilityFlags visibility_flags(const VisibilityReport& report);

}  // namespace patchview
