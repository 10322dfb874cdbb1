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

#include <cstdint>
#include <vector>

#include "patchview/dataset.hpp"

namespace patchview {

/// Proportions of the procedural toy car: a box body with a trapezoidal
/// cabin. The result is a closed convex polyhedron on which every vehicle
/// patch is exactly planar. x points to the nose, y to the car's left, z up.
struct ToyCarShape {
  double length = 4.0;
  double width = 1.8;
  double body_height = 0.8;
  double cabin_height = 1.45;
  double cabin_inset = 0.15;
  double windshield_x = 0.6;   // x of the upper windshield edge
  double rearwindow_x = -1.1;  // x of the upper rear-window edge
};

/// Mesh (faces grouped by part name) and the 12 vehicle keypoints, centered
/// on the bounding-box center.
CadModel make_toy_car(int id, const std::string& name, const ToyCarShape& shape = {});

/// The six car variants shipped with the toy dataset (ids 0..5).
std::vector<CadModel> toy_car_catalog();

/// Axis-aligned cuboid with the 8 box keypoints, faces grouped by box patch.
CadModel make_box(int id, const Vec3& half_extents);

/// Subdivided icosahedron projected onto the sphere.
Mesh make_icosphere(double radius, int subdivisions);

/// Procedural surface texture: colors each covered pixel from its face group
/// and the world-space surface point, over a soft gradient background.
RgbImage render_textured(const CadModel& cad, const Viewpoint& view, const Intrinsics& k, ImageSize size,
                         std::uint32_t palette_index);

struct ToyDatasetOptions {
  ImageSize size{128, 128};
  double radius = 140.0;
  std::vector<double> azimuths_deg{0, 30, 60, 90, 120, 150, 180, 210, 240, 270, 300, 330};
  std::vector<double> elevations_deg{8, 22};
};

/// Rendered car samples (ids s1, s2, ...) cycling through the catalog, with
/// keypoints projected from the CAD at each annotated pose.
Dataset make_toy_vehicle_dataset(const ToyDatasetOptions& options = {});

}  // namespace patchview
