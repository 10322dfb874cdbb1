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

#include "patchview/polygon.hpp"

#include <algorithm>
#include <cmath>

namespace patchview {

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

Polygon convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return {};

  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, (p - pts.front()).norm());
  // Turns smaller than this (relative to the point spread) count as collinear.
  const double eps = 1e-12 * scale * scale;

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= eps) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= eps) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return {};
  return hull;
}

double signed_area(std::span<const Vec2> polygon) {
  double a = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Vec2& p = polygon[i];
    const Vec2& q = polygon[(i + 1) % polygon.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

double polygon_area(std::span<const Vec2> polygon) { return std::abs(signed_area(polygon)); }

bool contains(std::span<const Vec2> convex, const Vec2& p, double eps) {
  if (convex.size() < 3) return false;
  const double orient = signed_area(convex) >= 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < convex.size(); ++i) {
    const Vec2& a = convex[i];
    const Vec2& b = convex[(i + 1) % convex.size()];
    const Vec2 edge = b - a;
    const double c = orient * (edge.x() * (p.y() - a.y()) - edge.y() * (p.x() - a.x()));
    if (c < -eps * std::max(1.0, edge.norm())) return false;
  }
  return true;
}

BoundingBox pixel_bounds(std::span<const Vec2> polygon, ImageSize size, int margin) {
  BoundingBox box;
  if (polygon.empty()) return box;
  double minx = polygon[0].x(), maxx = minx, miny = polygon[0].y(), maxy = miny;
  for (const auto& p : polygon) {
    minx = std::min(minx, p.x());
    maxx = std::max(maxx, p.x());
    miny = std::min(miny, p.y());
    maxy = std::max(maxy, p.y());
  }
  if (!std::isfinite(minx) || !std::isfinite(maxx) || !std::isfinite(miny) || !std::isfinite(maxy)) {
    return box;
  }
  // Pixel x has its center at x + 0.5.
  const auto lo = [](double v, int m) { return int(std::floor(std::max(v - 0.5, -1e6))) - m; };
  const auto hi = [](double v, int m) { return int(std::ceil(std::min(v - 0.5, 1e6))) + m; };
  box.x0 = std::max(0, lo(minx, margin));
  box.y0 = std::max(0, lo(miny, margin));
  box.x1 = std::min(size.width - 1, hi(maxx, margin));
  box.y1 = std::min(size.height - 1, hi(maxy, margin));
  return box;
}

bool is_strictly_convex(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cross(polygon[i], polygon[(i + 1) % n], polygon[(i + 2) % n]);
    if (c == 0.0) return false;
    const int s = c > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) return false;
  }
  return true;
}

}  // namespace patchview
