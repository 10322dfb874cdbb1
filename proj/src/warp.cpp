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

#include "patchview/warp.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <optional>
#include <set>

#include "patchview/error.hpp"

namespace patchview {

const char* to_string(DropReason reason) {
  switch (reason) {
    case DropReason::kNone: return "none";
    case DropReason::kInvisibleSource: return "invisible_source";
    case DropReason::kInvisibleDestination: return "invisible_destination";
    case DropReason::kDegenerate: return "degenerate";
  }
  return "unknown";
}

std::vector<std::string> PatchSet::dropped_names() const {
  std::vector<std::string> out;
  for (const auto& [name, p] : patches)
    if (p.dropped()) out.push_back(name);
  return out;
}

std::vector<std::string> PatchSet::degraded_names() const {
  std::vector<std::string> out;
  for (const auto& [name, p] : patches)
    if (p.drop == DropReason::kDegenerate) out.push_back(name);
  return out;
}

namespace {

struct PatchFit {
  Homography h;
  Polygon dst_polygon;
};

std::vector<Vec2> gather(const KeypointSet2D& px, const std::vector<std::string>& names) {
  std::vector<Vec2> pts;
  pts.reserve(names.size());
  for (const auto& n : names) pts.push_back(px.at(n));
  return pts;
}

void require_keypoints(const KeypointSet2D& kps, const PatchSpec& spec, const char* which) {
  std::set<std::string> missing;
  for (const auto& [_, names] : spec.patches)
    for (const auto& n : names)
      if (!kps.count(n)) missing.insert(n);
  if (missing.empty()) return;
  std::string msg = std::string("missing ") + which + " keypoints:";
  for (const auto& n : missing) msg += " " + n;
  throw Error("missing_keypoints", msg);
}

// A map is usable on a patch when it does not fold the source polygon: the
// homogeneous weight keeps one sign over the polygon and orientation is
// preserved (reversed for mirrored correspondences).
bool unfolded(const Homography& h, const Polygon& src_hull, bool mirrored) {
  int sign = 0;
  Polygon mapped;
  for (const auto& v : src_hull) {
    const double w = h.weight(v);
    const int s = w > 0 ? 1 : (w < 0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) return false;
    sign = s;
    mapped.push_back(h.apply(v));
  }
  const double turn = signed_area(src_hull) * signed_area(mapped);
  return mirrored ? turn < 0 : turn > 0;
}

// Fits src -> dst with the exact projective map. When that folds the patch,
// which noisy keypoints on thin patches easily cause, falls back to the
// least-squares affine map under the same check.
std::optional<PatchFit> fit_patch(const std::vector<Vec2>& src, const std::vector<Vec2>& dst,
                                  bool mirrored) {
  const Polygon src_hull = convex_hull(src);
  Polygon dst_hull = convex_hull(dst);
  if (src_hull.empty() || dst_hull.empty()) return std::nullopt;
  for (const auto estimate : {&estimate_homography, &estimate_affine}) {
    try {
      const Homography h = estimate(src, dst);
      if (unfolded(h, src_hull, mirrored)) return PatchFit{h, std::move(dst_hull)};
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

void zero_patch(Patch& p, DropReason reason, ImageSize size) {
  p.drop = reason;
  p.content = RgbaImage(size);
}

// One output row of the inverse warp.
inline void warp_row(const RgbaImage& src, const Polygon& poly, const Mat3& inv, int y, int x0, int x1,
                     RgbaImage& out) {
  const int w = src.width(), hgt = src.height();
  for (int x = x0; x <= x1; ++x) {
    const double px = x + 0.5, py = y + 0.5;
    const double qw = inv(2, 0) * px + inv(2, 1) * py + inv(2, 2);
    const double qx = (inv(0, 0) * px + inv(0, 1) * py + inv(0, 2)) / qw;
    const double qy = (inv(1, 0) * px + inv(1, 1) * py + inv(1, 2)) / qw;
    if (!(qx >= 0 && qy >= 0 && qx < w && qy < hgt)) continue;

    const double fx = qx - 0.5, fy = qy - 0.5;
    const double flx = std::floor(fx), fly = std::floor(fy);
    const double wx = fx - flx, wy = fy - fly;
    const int xa = std::clamp(int(flx), 0, w - 1), xb = std::clamp(int(flx) + 1, 0, w - 1);
    const int ya = std::clamp(int(fly), 0, hgt - 1), yb = std::clamp(int(fly) + 1, 0, hgt - 1);
    const std::uint8_t* taps[4] = {src.pixel(xa, ya), src.pixel(xb, ya), src.pixel(xa, yb), src.pixel(xb, yb)};
    const double weights[4] = {(1 - wx) * (1 - wy), wx * (1 - wy), (1 - wx) * wy, wx * wy};

    std::uint8_t* o = out.pixel(x, y);
    bool opaque = false;
    for (int c = 0; c < 3; ++c) {
      double v = 0;
      for (int t = 0; t < 4; ++t) v += weights[t] * taps[t][c];
      o[c] = std::uint8_t(std::clamp(std::lround(v), 0L, 255L));
    }
    for (int t = 0; t < 4; ++t) opaque = opaque || (weights[t] > 0 && taps[t][3] > 0);
    o[3] = (opaque && contains(poly, Vec2(px, py))) ? 255 : 0;
  }
}

}  // namespace

RgbaImage source_crop(const RgbImage& image, const Polygon& polygon) {
  RgbaImage out(image.size());
  const BoundingBox box = pixel_bounds(polygon, image.size(), kColorMargin);
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      std::uint8_t* o = out.pixel(x, y);
      std::memcpy(o, image.pixel(x, y), 3);
      o[3] = contains(polygon, Vec2(x + 0.5, y + 0.5)) ? 255 : 0;
    }
  }
  return out;
}

RgbaImage warp_patch(const RgbaImage& source, const Polygon& dst_polygon, const Homography& h,
                     ImageSize out_size) {
  const Mat3 inv = h.inverse().matrix();
  RgbaImage out(out_size);
  const BoundingBox box = pixel_bounds(dst_polygon, out_size, kColorMargin);
  if (box.empty() || source.empty()) return out;
#pragma omp parallel for schedule(static)
  for (int y = box.y0; y <= box.y1; ++y) warp_row(source, dst_polygon, inv, y, box.x0, box.x1, out);
  return out;
}

RgbaImage warp_patch_reference(const RgbaImage& source, const Polygon& dst_polygon, const Homography& h,
                               ImageSize out_size) {
  const Mat3 inv = h.inverse().matrix();
  RgbaImage out(out_size);
  const BoundingBox box = pixel_bounds(dst_polygon, out_size, kColorMargin);
  if (box.empty() || source.empty()) return out;
  for (int y = box.y0; y <= box.y1; ++y) warp_row(source, dst_polygon, inv, y, box.x0, box.x1, out);
  return out;
}

PatchSet extract_patches(const KeypointSet2D& kps, const PatchSpec& spec, ImageSize size) {
  require_keypoints(kps, spec, "source");
  const KeypointSet2D px = to_pixels(kps, size);
  PatchSet set;
  set.size = size;
  for (const auto& [name, names] : spec.patches) {
    Patch p;
    p.content_from = name;
    p.source_polygon = convex_hull(gather(px, names));
    p.destination_polygon = p.source_polygon;
    if (p.source_polygon.empty()) p.drop = DropReason::kDegenerate;
    set.patches.emplace(name, std::move(p));
  }
  return set;
}

PatchSet extract_patches(const KeypointSet2D& kps, const PatchSpec& spec, const RgbImage& image) {
  PatchSet set = extract_patches(kps, spec, image.size());
  for (auto& [_, p] : set.patches) {
    p.content = p.dropped() ? RgbaImage(image.size()) : source_crop(image, p.source_polygon);
  }
  return set;
}

PatchSet warp_to_view(const PatchSet& source, const KeypointSet2D& kps_src, const KeypointSet2D& kps_dst,
                      const PatchSpec& spec, const VisibilityFlags* destination_visibility) {
  require_keypoints(kps_src, spec, "source");
  require_keypoints(kps_dst, spec, "destination");
  const KeypointSet2D src_px = to_pixels(kps_src, source.size);
  const KeypointSet2D dst_px = to_pixels(kps_dst, source.size);

  PatchSet out;
  out.size = source.size;
  for (const auto& [name, names] : spec.patches) {
    const auto it = source.patches.find(name);
    if (it == source.patches.end()) continue;
    Patch p = it->second;
    const std::vector<Vec2> src = gather(src_px, names);
    const std::vector<Vec2> dst = gather(dst_px, names);
    p.destination_polygon = convex_hull(dst);
    if (p.dropped()) {
      zero_patch(p, p.drop, out.size);
    } else if (destination_visibility && !destination_visibility->count(name)) {
      zero_patch(p, DropReason::kInvisibleDestination, out.size);
    } else if (destination_visibility && !destination_visibility->at(name)) {
      zero_patch(p, DropReason::kInvisibleDestination, out.size);
    } else if (auto fit = fit_patch(src, dst, false)) {
      p.homography = fit->h;
      p.destination_polygon = fit->dst_polygon;
      p.content = warp_patch(it->second.content, p.destination_polygon, p.homography, out.size);
    } else {
      zero_patch(p, DropReason::kDegenerate, out.size);
    }
    out.patches.emplace(name, std::move(p));
  }
  return out;
}

PatchSet dewarp_roundtrip(const RgbImage& image, const KeypointSet2D& kps_src, const KeypointSet2D& kps_mid,
                          const PatchSpec& spec, const VisibilityFlags& visibility_src,
                          const VisibilityFlags& visibility_mid) {
  require_keypoints(kps_mid, spec, "intermediate");
  PatchSet set = extract_patches(kps_src, spec, image);
  const KeypointSet2D src_px = to_pixels(kps_src, image.size());
  const KeypointSet2D mid_px = to_pixels(kps_mid, image.size());
  const auto flag = [](const VisibilityFlags& f, const std::string& n) {
    const auto it = f.find(n);
    return it != f.end() && it->second;
  };

  for (auto& [name, p] : set.patches) {
    if (p.dropped()) {
      zero_patch(p, p.drop, set.size);
      continue;
    }
    if (!flag(visibility_src, name)) {
      zero_patch(p, DropReason::kInvisibleSource, set.size);
      continue;
    }
    if (!flag(visibility_mid, name)) {
      zero_patch(p, DropReason::kInvisibleDestination, set.size);
      continue;
    }
    const auto& names = spec.patches.at(name);
    const auto fit = fit_patch(gather(src_px, names), gather(mid_px, names), false);
    if (!fit) {
      zero_patch(p, DropReason::kDegenerate, set.size);
      continue;
    }
    Homography back;
    try {
      back = fit->h.inverse();
    } catch (const Error&) {
      zero_patch(p, DropReason::kDegenerate, set.size);
      continue;
    }
    const RgbaImage mid = warp_patch(p.content, fit->dst_polygon, fit->h, set.size);
    p.homography = fit->h;
    p.content = warp_patch(mid, p.source_polygon, back, set.size);
  }
  return set;
}

PatchSet symmetry_transfer(const PatchSet& source, const PatchSet& warped, const KeypointSet2D& kps_src,
                           const KeypointSet2D& kps_dst, const VisibilityFlags& visibility_src,
                           const VisibilityFlags& visibility_dst, const PatchSpec& spec) {
  const auto flag = [](const VisibilityFlags& f, const std::string& n) {
    const auto it = f.find(n);
    return it != f.end() && it->second;
  };
  PatchSet out = warped;
  const KeypointSet2D src_px = to_pixels(kps_src, warped.size);
  const KeypointSet2D dst_px = to_pixels(kps_dst, warped.size);

  for (auto& [name, p] : out.patches) {
    if (!p.dropped() || flag(visibility_src, name) || !flag(visibility_dst, name)) continue;
    const std::string partner = spec.mirror_of(name);
    if (partner == name || !flag(visibility_src, partner)) continue;
    const auto sit = source.patches.find(partner);
    if (sit == source.patches.end() || sit->second.dropped()) continue;

    const auto& names = spec.patches.at(name);
    std::vector<Vec2> src, dst;
    bool complete = true;
    for (const auto& kp : names) {
      const auto m = spec.keypoint_mirror.find(kp);
      if (m == spec.keypoint_mirror.end() || !src_px.count(m->second) || !dst_px.count(kp)) {
        complete = false;
        break;
      }
      src.push_back(src_px.at(m->second));
      dst.push_back(dst_px.at(kp));
    }
    if (!complete) continue;
    // A mirrored correspondence of a visible surface reverses orientation.
    auto fit = fit_patch(src, dst, true);
    if (!fit) continue;
    p.homography = fit->h;
    p.source_polygon = sit->second.source_polygon;
    p.destination_polygon = fit->dst_polygon;
    p.content = warp_patch(sit->second.content, p.destination_polygon, p.homography, out.size);
    p.content_from = partner;
    p.drop = DropReason::kNone;
  }
  return out;
}

}  // namespace patchview
