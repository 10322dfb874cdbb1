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

#include <span>
#include <vector>

#include "patchview/geometry.hpp"

namespace patchview {

/// Convex polygon in pixel coordinates. convex_hull() emits vertices with
/// positive signed area; an empty polygon marks a degenerate hull.
using Polygon = std::vector<Vec2>;

/// Andrew's monotone chain. Collinear boundary points are removed; fewer than
/// three non-collinear input points yield an empty polygon.
Polygon convex_hull(std::span<const Vec2> points);

double signed_area(std::span<const Vec2> polygon);
double polygon_area(std::span<const Vec2> polygon);

/// Inclusive containment test for a convex polygon with either orientation.
bool contains(std::span<const Vec2> convex, const Vec2& p, double eps = 1e-9);

struct BoundingBox {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive pixel range
  bool empty() const { return x1 < x0 || y1 < y0; }
};

/// Pixels whose centers may fall inside `polygon`, clipped to the image,
/// grown by `margin` pixels.
BoundingBox pixel_bounds(std::span<const Vec2> polygon, ImageSize size, int margin = 0);

/// True when every consecutive triple turns the same way (strictly).
bool is_strictly_convex(std::span<const Vec2> polygon);

}  // namespace patchview
