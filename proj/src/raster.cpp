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

#include "patchview/raster.hpp"

#include <Eigen/SVD>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "patchview/error.hpp"
#include "patchview/polygon.hpp"

namespace patchview {

namespace {

// Camera transform whose result does not depend on the order of the world
// axes: the three products of each row are summed smallest first. A mesh
// and camera rotated together by a signed axis permutation then produce the
// same bits.
inline Vec3 to_camera(const Viewpoint& view, const Vec3& p) {
  Vec3 out;
  for (int r = 0; r < 3; ++r) {
    std::array<double, 3> t{view.rotation(r, 0) * p.x(), view.rotation(r, 1) * p.y(), view.rotation(r, 2) * p.z()};
    std::sort(t.begin(), t.end());
    out(r) = (t[0] + t[1]) + t[2] + view.translation(r);
  }
  return out;
}

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBandRows = 8;

// Screen-space triangle plus the camera-space plane used for exact depth.
struct FaceSetup {
  Vec2 p0, p1, p2;
  double orient = 1.0;  // sign of the projected area
  // depth(u, v) = plane_d / (a u + b v + c)
  double a = 0, b = 0, c = 0, plane_d = 0;
  Vec3 normal;  // viewer frame
  BoundingBox box;
};

struct Prepared {
  std::vector<FaceSetup> faces;
  std::vector<std::int32_t> ids;
  int skipped = 0;
  bool behind = false;
};

Prepared prepare(const Mesh& mesh, const Viewpoint& view, const Intrinsics& k, ImageSize size) {
  if (mesh.faces.empty()) throw Error("invalid_mesh", "rasterize: empty mesh");
  if (size.width <= 0 || size.height <= 0) throw Error("invalid_argument", "rasterize: empty image size");

  Prepared out;
  out.faces.reserve(mesh.faces.size());
  out.ids.reserve(mesh.faces.size());
  int behind = 0;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const auto& f = mesh.faces[i];
    const Vec3 c0 = to_camera(view, mesh.vertices[std::size_t(f[0])]);
    const Vec3 c1 = to_camera(view, mesh.vertices[std::size_t(f[1])]);
    const Vec3 c2 = to_camera(view, mesh.vertices[std::size_t(f[2])]);
    if (c0.z() <= 0 || c1.z() <= 0 || c2.z() <= 0) {
      ++behind;
      ++out.skipped;
      continue;
    }
    FaceSetup s;
    s.p0 = project_camera_point(c0, k);
    s.p1 = project_camera_point(c1, k);
    s.p2 = project_camera_point(c2, k);
    const Vec2 e1 = s.p1 - s.p0, e2 = s.p2 - s.p0;
    const double area2 = e1.x() * e2.y() - e1.y() * e2.x();
    Vec3 n = (c1 - c0).cross(c2 - c0);
    const double nn = n.norm();
    if (std::abs(area2) < 1e-12 || !(nn > 0)) {
      ++out.skipped;
      continue;
    }
    n /= nn;
    if (n.dot(c0) > 0) n = -n;  // face the camera at the origin
    s.orient = area2 > 0 ? 1.0 : -1.0;
    s.plane_d = n.dot(c0);
    s.a = n.x() / k.focal;
    s.b = n.y() / k.focal;
    s.c = n.z() - n.x() * k.principal_point.x() / k.focal - n.y() * k.principal_point.y() / k.focal;
    s.normal = Vec3(n.x(), -n.y(), -n.z());
    const std::array<Vec2, 3> tri{s.p0, s.p1, s.p2};
    s.box = pixel_bounds(tri, size);
    if (s.box.empty()) continue;
    out.faces.push_back(s);
    out.ids.push_back(std::int32_t(i));
  }
  out.behind = behind == int(mesh.faces.size());
  return out;
}

inline double edge(const Vec2& a, const Vec2& b, double px, double py) {
  return (b.x() - a.x()) * (py - a.y()) - (b.y() - a.y()) * (px - a.x());
}

// Shared per-pixel kernel so both rasterizers produce identical bits.
inline void shade(const FaceSetup& s, std::int32_t id, int x, int y, std::size_t idx, RenderBuffers& out) {
  const double px = x + 0.5, py = y + 0.5;
  const double w0 = s.orient * edge(s.p1, s.p2, px, py);
  const double w1 = s.orient * edge(s.p2, s.p0, px, py);
  const double w2 = s.orient * edge(s.p0, s.p1, px, py);
  if (w0 < 0 || w1 < 0 || w2 < 0) return;
  const double denom = s.a * px + s.b * py + s.c;
  const double z = s.plane_d / denom;
  if (!(z > 0) || !(z < out.depth[idx])) return;
  out.depth[idx] = z;
  out.normals[idx] = s.normal;
  out.face_id[idx] = id;
}

RenderBuffers empty_buffers(ImageSize size) {
  RenderBuffers b;
  b.size = size;
  b.depth.assign(size.pixel_count(), kInf);
  b.normals.assign(size.pixel_count(), Vec3::Zero());
  b.face_id.assign(size.pixel_count(), -1);
  b.silhouette = Mask(size);
  return b;
}

void finish(RenderBuffers& b) {
  for (int y = 0; y < b.size.height; ++y)
    for (int x = 0; x < b.size.width; ++x) b.silhouette.at(x, y, 0) = b.covered(x, y) ? 255 : 0;
}

}  // namespace

RenderBuffers rasterize(const Mesh& mesh, const Viewpoint& view, const Intrinsics& k, ImageSize size) {
  const Prepared prep = prepare(mesh, view, k, size);
  RenderBuffers out = empty_buffers(size);
  out.skipped_faces = prep.skipped;
  out.behind_camera = prep.behind;

  // Bin faces by row band, keeping ascending face order inside each bin.
  const int bands = (size.height + kBandRows - 1) / kBandRows;
  std::vector<std::vector<std::uint32_t>> bins(static_cast<std::size_t>(bands));
  for (std::size_t i = 0; i < prep.faces.size(); ++i) {
    const auto& box = prep.faces[i].box;
    for (int band = box.y0 / kBandRows; band <= box.y1 / kBandRows; ++band) {
      bins[std::size_t(band)].push_back(std::uint32_t(i));
    }
  }

#pragma omp parallel for schedule(dynamic, 1)
  for (int band = 0; band < bands; ++band) {
    const int y_begin = band * kBandRows;
    const int y_end = std::min(size.height, y_begin + kBandRows);
    for (const auto fi : bins[std::size_t(band)]) {
      const FaceSetup& s = prep.faces[fi];
      const std::int32_t id = prep.ids[fi];
      const int y0 = std::max(y_begin, s.box.y0);
      const int y1 = std::min(y_end - 1, s.box.y1);
      for (int y = y0; y <= y1; ++y) {
        for (int x = s.box.x0; x <= s.box.x1; ++x) shade(s, id, x, y, out.index(x, y), out);
      }
    }
  }
  finish(out);
  return out;
}

RenderBuffers rasterize_reference(const Mesh& mesh, const Viewpoint& view, const Intrinsics& k,
                                  ImageSize size) {
  const Prepared prep = prepare(mesh, view, k, size);
  RenderBuffers out = empty_buffers(size);
  out.skipped_faces = prep.skipped;
  out.behind_camera = prep.behind;
  for (std::size_t i = 0; i < prep.faces.size(); ++i) {
    const FaceSetup& s = prep.faces[i];
    for (int y = s.box.y0; y <= s.box.y1; ++y)
      for (int x = s.box.x0; x <= s.box.x1; ++x) shade(s, prep.ids[i], x, y, out.index(x, y), out);
  }
  finish(out);
  return out;
}

Rgb encode_normal(const Vec3& n) {
  const auto enc = [](double v) {
    return std::uint8_t(std::clamp(std::lround(255.0 * (v + 1.0) / 2.0), 0L, 255L));
  };
  return {enc(n.x()), enc(n.y()), enc(n.z())};
}

Vec3 decode_normal(const Rgb& c) {
  return Vec3(2.0 * c.r / 255.0 - 1.0, 2.0 * c.g / 255.0 - 1.0, 2.0 * c.b / 255.0 - 1.0);
}

RgbImage render_sketch(const RenderBuffers& buffers) {
  if (buffers.depth.size() != buffers.size.pixel_count() ||
      buffers.normals.size() != buffers.size.pixel_count() ||
      buffers.face_id.size() != buffers.size.pixel_count()) {
    throw Error("invalid_argument", "render_sketch: malformed buffers");
  }
  RgbImage img = fill_image(buffers.size, kBackground);
  for (int y = 0; y < buffers.size.height; ++y) {
    for (int x = 0; x < buffers.size.width; ++x) {
      if (!buffers.covered(x, y)) continue;
      const Rgb c = encode_normal(buffers.normals[buffers.index(x, y)]);
      auto* p = img.pixel(x, y);
      p[0] = c.r;
      p[1] = c.g;
      p[2] = c.b;
    }
  }
  return img;
}

namespace {

struct PatchPlane {
  std::vector<Vec3> samples;
  Vec3 normal;  // world frame, unit, arbitrary sign
};

std::optional<PatchPlane> patch_plane(const KeypointSet3D& kps, const std::vector<std::string>& names,
                                      int grid) {
  std::vector<Vec3> pts;
  for (const auto& n : names) {
    const auto it = kps.find(n);
    if (it == kps.end()) throw Error("missing_keypoints", "3D keypoint '" + n + "' is not annotated");
    pts.push_back(it->second);
  }
  if (pts.size() < 3) return std::nullopt;

  Vec3 centroid = Vec3::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= double(pts.size());
  Eigen::Matrix3Xd centered(3, Eigen::Index(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) centered.col(Eigen::Index(i)) = pts[i] - centroid;
  Eigen::JacobiSVD<Eigen::Matrix3Xd> svd(centered, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  if (!(sv(1) > 1e-9 * std::max(sv(0), 1e-300))) return std::nullopt;
  const Vec3 e1 = svd.matrixU().col(0);
  const Vec3 e2 = svd.matrixU().col(1);

  std::vector<Vec2> flat;
  for (const auto& p : pts) flat.emplace_back((p - centroid).dot(e1), (p - centroid).dot(e2));
  Polygon hull = convex_hull(flat);
  if (hull.empty()) return std::nullopt;

  // Shrink slightly toward the hull centroid so samples avoid shared edges.
  Vec2 hc = Vec2::Zero();
  for (const auto& v : hull) hc += v;
  hc /= double(hull.size());
  for (auto& v : hull) v = hc + 0.98 * (v - hc);

  double minx = hull[0].x(), maxx = minx, miny = hull[0].y(), maxy = miny;
  for (const auto& v : hull) {
    minx = std::min(minx, v.x());
    maxx = std::max(maxx, v.x());
    miny = std::min(miny, v.y());
    maxy = std::max(maxy, v.y());
  }
  std::vector<Vec3> samples;
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      const Vec2 q(minx + (i + 0.5) / grid * (maxx - minx), miny + (j + 0.5) / grid * (maxy - miny));
      if (contains(hull, q, 0.0)) samples.push_back(centroid + q.x() * e1 + q.y() * e2);
    }
  }
  if (samples.empty()) samples.push_back(centroid + hc.x() * e1 + hc.y() * e2);
  return PatchPlane{std::move(samples), svd.matrixU().col(2)};
}

}  // namespace

std::optional<std::vector<Vec3>> patch_sample_points(const KeypointSet3D& kps,
                                                     const std::vector<std::string>& names, int grid) {
  auto plane = patch_plane(kps, names, grid);
  if (!plane) return std::nullopt;
  return std::move(plane->samples);
}

VisibilityReport patch_visibility(const KeypointSet3D& kps3d, const PatchSpec& spec,
                                  const RenderBuffers& buffers, const Viewpoint& view,
                                  const Intrinsics& k, const VisibilityOptions& options) {
  VisibilityReport report;
  for (const auto& [name, names] : spec.patches) {
    PatchVisibility pv;
    const auto plane = patch_plane(kps3d, names, options.grid);
    if (!plane) {
      pv.degenerate = true;
      report.emplace(name, pv);
      continue;
    }
    // Camera-frame plane normal, compared against viewer-frame buffer normals.
    const Vec3 pn = view.rotation * plane->normal;
    const Vec3 plane_normal(pn.x(), -pn.y(), -pn.z());
    const auto& samples = plane->samples;
    int hits = 0;
    for (const auto& s : samples) {
      const Vec3 cam = view.apply(s);
      if (!(cam.z() > 0)) continue;
      const Vec2 px = project_camera_point(cam, k);
      if (!(px.x() >= 0 && px.y() >= 0 && px.x() < buffers.size.width && px.y() < buffers.size.height)) {
        continue;
      }
      const std::size_t idx = buffers.index(int(px.x()), int(px.y()));
      const double zb = buffers.depth[idx];
      if (!std::isfinite(zb) || std::abs(cam.z() - zb) > options.depth_tolerance * cam.z()) continue;
      if (std::abs(plane_normal.dot(buffers.normals[idx])) < options.normal_agreement) continue;
      ++hits;
    }
    pv.samples = int(samples.size());
    pv.fraction = double(hits) / double(pv.samples);
    pv.visible = pv.fraction >= options.threshold;
    report.emplace(name, pv);
  }
  return report;
}

VisibilityFlags visibility_flags(const VisibilityReport& report) {
  VisibilityFlags flags;
  for (const auto& [name, v] : report) flags[name] = v.visible;
  return flags;
}

}  // namespace patchview
