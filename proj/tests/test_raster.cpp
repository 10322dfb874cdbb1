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

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "patchview/error.hpp"
#include "patchview/raster.hpp"
#include "patchview/toy.hpp"

using namespace patchview;

namespace {

const ImageSize kSize{128, 128};
const Intrinsics kK = Intrinsics::centered(kSize);

Viewpoint orbit(double az, double el, double r) { return viewpoint_from_spherical(SphericalPose::make(az, el, r)); }

std::array<Vec3, 4> quad_of(const CadModel& cad, const std::vector<std::string>& names) {
  return {cad.keypoints.at(names[0]), cad.keypoints.at(names[1]), cad.keypoints.at(names[2]),
          cad.keypoints.at(names[3])};
}

}  // namespace

TEST_CASE("rasterize: frontal cube face has constant depth and the camera-facing normal") {
  const CadModel cube = make_box(0, Vec3(0.5, 0.5, 0.5));
  // Camera on +x looking at the origin: the front (+x) face at distance 30 - 0.5.
  const Viewpoint v = orbit(0, 0, 30);
  const RenderBuffers b = rasterize(cube.mesh, v, kK, kSize);
  const RgbImage sketch = render_sketch(b);
  int interior = 0;
  for (int y = 20; y < 108; ++y) {
    for (int x = 20; x < 108; ++x) {
      if (!b.covered(x, y)) continue;
      ++interior;
      CHECK(std::abs(b.depth[b.index(x, y)] - 29.5) < 1e-6);
      CHECK(sketch.at(x, y, 0) == 128);
      CHECK(sketch.at(x, y, 1) == 128);
      CHECK(sketch.at(x, y, 2) == 255);
    }
  }
  // 1 unit at depth 29.5 with f=3000 is ~101.7 px, so the 88x88 window is inside.
  CHECK(interior == 88 * 88);
  CHECK_FALSE(b.behind_camera);
}

TEST_CASE("rasterize: buffer invariants") {
  const CadModel car = toy_car_catalog()[2];
  const RenderBuffers b = rasterize(car.mesh, orbit(37, 21, 140), kK, kSize);
  for (int y = 0; y < kSize.height; ++y) {
    for (int x = 0; x < kSize.width; ++x) {
      const std::size_t i = b.index(x, y);
      const bool sil = b.silhouette.at(x, y, 0) == 255;
      CHECK(sil == std::isfinite(b.depth[i]));
      CHECK(sil == (b.face_id[i] >= 0));
      if (sil) {
        CHECK(std::abs(b.normals[i].norm() - 1.0) < 1e-6);
        CHECK(b.normals[i].z() > 0);  // oriented toward the viewer
      } else {
        CHECK(b.silhouette.at(x, y, 0) == 0);
      }
    }
  }
}

TEST_CASE("rasterize: icosphere silhouette matches the projected disc area") {
  const Mesh sphere = make_icosphere(1.0, 4);
  const double z = 60.0;
  const Viewpoint v{Mat3::Identity(), Vec3(0, 0, z)};
  const RenderBuffers b = rasterize(sphere, v, kK, kSize);
  std::size_t count = 0;
  for (auto m : b.silhouette.bytes()) count += m != 0;
  // Perspective outline of a sphere: radius f r / sqrt(z^2 - r^2).
  const double rp = kK.focal * 1.0 / std::sqrt(z * z - 1.0);
  const double expect = M_PI * rp * rp;
  CHECK(std::abs(double(count) - expect) / expect < 0.02);
}

TEST_CASE("rasterize: parallel banding equals the serial reference") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> az(0, 360), el(-30, 60);
  const auto cars = toy_car_catalog();
  for (int t = 0; t < 12; ++t) {
    const Mesh& m = cars[std::size_t(t) % cars.size()].mesh;
    const Viewpoint v = orbit(az(rng), el(rng), 140);
    const ImageSize size{97 + t, 131 - t};
    const Intrinsics k = Intrinsics::centered(size);
    const RenderBuffers a = rasterize(m, v, k, size);
    const RenderBuffers r = rasterize_reference(m, v, k, size);
    CHECK(a.depth == r.depth);
    CHECK(a.face_id == r.face_id);
    CHECK(a.silhouette == r.silhouette);
    CHECK(a.normals == r.normals);
  }
}

TEST_CASE("rasterize: depth is the pointwise minimum over face subsets") {
  const CadModel car = toy_car_catalog()[0];
  const Viewpoint v = orbit(140, 18, 140);
  const RenderBuffers whole = rasterize(car.mesh, v, kK, kSize);
  Mesh even = car.mesh, odd = car.mesh;
  even.faces.clear();
  odd.faces.clear();
  even.face_labels.clear();
  odd.face_labels.clear();
  for (std::size_t i = 0; i < car.mesh.faces.size(); ++i) (i % 2 ? odd : even).faces.push_back(car.mesh.faces[i]);
  const RenderBuffers a = rasterize(even, v, kK, kSize), b = rasterize(odd, v, kK, kSize);
  for (std::size_t i = 0; i < whole.depth.size(); ++i) CHECK(whole.depth[i] == std::min(a.depth[i], b.depth[i]));
}

TEST_CASE("rasterize: rotating mesh and camera together leaves buffers bit-identical") {
  const CadModel car = toy_car_catalog()[4];
  Mat3 rz;
  rz << 0, -1, 0, 1, 0, 0, 0, 0, 1;  // exact quarter turn about z
  Mat3 rx;
  rx << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  for (const Mat3& q : {rz, rx, Mat3(rz * rx)}) {
    const Viewpoint v = orbit(23, 17, 140);
    const Mesh moved = transform_mesh(car.mesh, q);
    const Viewpoint v2{v.rotation * q.transpose(), v.translation};
    const RenderBuffers a = rasterize(car.mesh, v, kK, kSize), b = rasterize(moved, v2, kK, kSize);
    CHECK(a.depth == b.depth);
    CHECK(a.face_id == b.face_id);
    CHECK(a.silhouette == b.silhouette);
  }
}

TEST_CASE("rasterize: mesh behind the camera yields empty buffers with a flag") {
  const CadModel cube = make_box(0, Vec3(1, 1, 1));
  const Viewpoint v{Mat3::Identity(), Vec3(0, 0, -10)};
  const RenderBuffers b = rasterize(cube.mesh, v, kK, kSize);
  CHECK(b.behind_camera);
  for (auto m : b.silhouette.bytes()) CHECK(m == 0);
  const RgbImage s = render_sketch(b);
  CHECK(s == fill_image(kSize, kBackground));
}

TEST_CASE("sketch: single camera-facing triangle and the 8-bit round trip") {
  Mesh tri;
  tri.vertices = {Vec3(-0.5, -0.5, 0), Vec3(0.5, -0.5, 0), Vec3(0, 0.5, 0)};
  tri.faces = {{0, 1, 2}};
  const RenderBuffers b = rasterize(tri, Viewpoint{Mat3::Identity(), Vec3(0, 0, 40)}, kK, kSize);
  const RgbImage s = render_sketch(b);
  int fg = 0;
  for (int y = 0; y < kSize.height; ++y) {
    for (int x = 0; x < kSize.width; ++x) {
      const std::uint8_t* p = s.pixel(x, y);
      if (b.covered(x, y)) {
        ++fg;
        CHECK(Rgb{p[0], p[1], p[2]} == Rgb{128, 128, 255});
      } else {
        CHECK(Rgb{p[0], p[1], p[2]} == kBackground);
      }
    }
  }
  CHECK(fg > 100);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 n = Vec3(g(rng), g(rng), g(rng)).normalized();
    const Vec3 back = decode_normal(encode_normal(n));
    const Rgb c = encode_normal(n);
    CHECK(std::abs(back.x() - n.x()) <= 1.0 / 255 + 1e-12);
    CHECK(std::abs(back.y() - n.y()) <= 1.0 / 255 + 1e-12);
    CHECK(std::abs(back.z() - n.z()) <= 1.0 / 255 + 1e-12);
    CHECK(encode_normal(back) == c);
  }
}

TEST_CASE("obj: parsing, groups and rejections") {
  std::istringstream ok(
      "# tri\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\ng a\nf 1/1 2/2 3/3\ng b\nf 2//1 4//1 3//1\nf 1 2 1\n");
  const Mesh m = parse_obj(ok);
  CHECK(m.vertices.size() == 4);
  CHECK(m.faces.size() == 2);  // the repeated-vertex face is filtered
  CHECK(m.face_labels == std::vector<std::string>{"a", "b"});

  const auto kind_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_obj(in);
    } catch (const Error& e) {
      return e.kind();
    }
    return std::string("ok");
  };
  CHECK(kind_of("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nf 1 2 4 3\n") == "invalid_mesh");
  CHECK(kind_of("v 0 0 0\nv 1 0 0\nf 1 2 3\n") == "invalid_mesh");
  CHECK(kind_of("v 0 0\n") == "invalid_mesh");
}

TEST_CASE("visibility: car head-on and side views") {
  const CadModel car = toy_car_catalog()[0];
  const PatchSpec spec = vehicle_patch_spec();
  const auto report_at = [&](double az) {
    const Viewpoint v = orbit(az, 10, 140);
    return patch_visibility(car.keypoints, spec, rasterize(car.mesh, v, kK, kSize), v, kK);
  };
  const auto front = report_at(0);  // nose points to +x
  CHECK(front.at("front").fraction > 0.5);
  CHECK(front.at("back").fraction < 0.5);
  const auto left = report_at(90);  // camera on the car's left (+y)
  CHECK(left.at("left").visible);
  CHECK_FALSE(left.at("right").visible);
  CHECK(left.at("roof").visible);
}

TEST_CASE("visibility: mirror pairs on the zero-elevation ring of the box proxy") {
  const CadModel box = make_box(0, Vec3(1.2, 0.8, 0.6));
  const PatchSpec spec = box_patch_spec();
  for (int i = 0; i < 72; ++i) {
    const Viewpoint v = orbit(i * 5.0, 0, 40);
    const auto r = patch_visibility(box.keypoints, spec, rasterize(box.mesh, v, kK, kSize), v, kK);
    CHECK(r.at("left").fraction * r.at("right").fraction < 0.25);
  }
}

TEST_CASE("visibility: removing occluders never lowers a fraction") {
  const CadModel box = make_box(0, Vec3(1, 1, 1));
  CadModel scene = box;
  // A floating slab between the camera (on +x) and the box.
  const CadModel slab = make_box(1, Vec3(0.1, 0.7, 0.4));
  const int base = int(scene.mesh.vertices.size());
  for (const auto& p : slab.mesh.vertices) scene.mesh.vertices.push_back(p + Vec3(4, 0.6, 0.3));
  for (const auto& f : slab.mesh.faces) scene.mesh.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
  scene.mesh.face_labels.clear();
  const PatchSpec spec = box_patch_spec();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> az(-40, 40), el(-20, 40);
  int lowered = 0, occluded = 0;
  for (int t = 0; t < 30; ++t) {
    const Viewpoint v = orbit(az(rng), el(rng), 40);
    const auto with = patch_visibility(scene.keypoints, spec, rasterize(scene.mesh, v, kK, kSize), v, kK);
    const auto without = patch_visibility(box.keypoints, spec, rasterize(box.mesh, v, kK, kSize), v, kK);
    for (const auto& [name, pv] : with) {
      lowered += pv.fraction > without.at(name).fraction;
      occluded += pv.fraction < without.at(name).fraction;
    }
  }
  CHECK(lowered == 0);
  CHECK(occluded > 0);  // the slab actually hides something
}

TEST_CASE("visibility: agrees with the ray-cast oracle on the box proxy") {
  const CadModel box = make_box(0, Vec3(1.0, 0.7, 0.5));
  const PatchSpec spec = box_patch_spec();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  int agree = 0, total = 0;
  for (int t = 0; t < 30; ++t) {
    const Viewpoint v = orbit(360 * u(rng), 170 * u(rng) - 85, 25 + 10 * u(rng));
    const RenderBuffers b = rasterize(box.mesh, v, kK, kSize);
    const auto report = patch_visibility(box.keypoints, spec, b, v, kK);
    for (const auto& [name, names] : spec.patches) {
      const double f = oracle::ray_cast_visibility(box.mesh, quad_of(box, names), v, kK, kSize);
      agree += (f >= 0.5) == report.at(name).visible;
      ++total;
    }
  }
  CHECK(double(agree) / total >= 0.95);
}

TEST_CASE("visibility: degenerate patches report zero") {
  KeypointSet3D kps{{"a", Vec3(0, 0, 0)}, {"b", Vec3(1, 0, 0)}, {"c", Vec3(2, 0, 0)}};
  PatchSpec spec;
  spec.class_name = "line";
  spec.patches = {{"p", {"a", "b", "c"}}};
  const CadModel cube = make_box(0, Vec3(1, 1, 1));
  const Viewpoint v = orbit(0, 0, 20);
  const auto r = patch_visibility(kps, spec, rasterize(cube.mesh, v, kK, kSize), v, kK);
  CHECK(r.at("p").degenerate);
  CHECK(r.at("p").fraction == 0);
  CHECK_FALSE(r.at("p").visible);
}
