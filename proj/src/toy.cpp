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

#include "patchview/toy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace patchview {

namespace {

void add_quad(Mesh& m, const std::string& label, int a, int b, int c, int d) {
  m.faces.push_back({a, b, c});
  m.faces.push_back({a, c, d});
  m.face_labels.push_back(label);
  m.face_labels.push_back(label);
}

constexpr std::array<Rgb, 8> kPalette{{
    {200, 40, 40},
    {40, 70, 190},
    {40, 150, 70},
    {220, 180, 40},
    {230, 120, 30},
    {130, 60, 160},
    {30, 150, 150},
    {120, 120, 130},
}};

Rgb scale(Rgb c, double s) {
  const auto f = [s](std::uint8_t v) { return std::uint8_t(std::clamp(std::lround(v * s), 0L, 255L)); };
  return {f(c.r), f(c.g), f(c.b)};
}

Rgb mix(Rgb a, Rgb b, double t) {
  const auto f = [t](std::uint8_t x, std::uint8_t y) {
    return std::uint8_t(std::clamp(std::lround(x * (1 - t) + y * t), 0L, 255L));
  };
  return {f(a.r, b.r), f(a.g, b.g), f(a.b, b.b)};
}

struct CarFrame {
  double front_x, back_x, half_width, bottom_z, body_top_z;
};

CarFrame car_frame(const KeypointSet3D& k) {
  return {k.at("left_front_wheel").x(), k.at("left_back_wheel").x(), k.at("left_front_wheel").y(),
          k.at("left_front_wheel").z(), k.at("left_front_light").z()};
}

Rgb car_texture(const std::string& label, const Vec3& p, const CarFrame& fr, Rgb base) {
  const Rgb glass{70, 105, 145};
  const double body_h = fr.body_top_z - fr.bottom_z;
  if (label == "left" || label == "right") {
    const double wheel_r = 0.36 * body_h / 0.8;
    for (const double wx : {fr.front_x - 0.8, fr.back_x + 0.8}) {
      const double d = std::hypot(p.x() - wx, p.z() - (fr.bottom_z + 0.02));
      if (d < 0.16 * body_h / 0.8) return {170, 170, 175};
      if (d < wheel_r) return {28, 28, 30};
    }
    const double seam = std::abs(std::fmod(p.x() + 100.0, 1.1) - 0.55);
    if (seam < 0.025) return scale(base, 0.55);
    if (std::abs(p.z() - (fr.bottom_z + 0.55 * body_h)) < 0.04) return mix(base, {245, 245, 245}, 0.6);
    return base;
  }
  if (label == "front" || label == "back") {
    const bool front = label == "front";
    const double edge = fr.half_width - std::abs(p.y());
    const double top = fr.body_top_z - p.z();
    if (edge < 0.35 && top < 0.25 && top > 0.05) return front ? Rgb{250, 240, 185} : Rgb{210, 20, 25};
    if (front && std::abs(p.y()) < 0.55 && top > 0.3 && top < 0.6) {
      return (int(std::floor(p.z() * 25.0)) % 2) ? Rgb{25, 25, 28} : Rgb{90, 90, 95};
    }
    if (!front && std::abs(p.y()) < 0.3 && top > 0.35 && top < 0.55) return {235, 235, 225};
    return scale(base, 0.9);
  }
  if (label == "windshield" || label == "rearwindow") {
    const double t = std::clamp((p.z() - fr.body_top_z) / 0.7, 0.0, 1.0);
    const double streak = std::abs(std::fmod(p.y() * 1.3 + p.z() * 2.0 + 10.0, 1.0) - 0.5);
    Rgb c = mix(glass, {170, 200, 225}, 0.5 * t);
    if (streak < 0.06) c = mix(c, {235, 240, 250}, 0.5);
    return c;
  }
  if (label == "roof") {
    const bool check = (int(std::floor(p.x() * 3.0 + 100)) + int(std::floor(p.y() * 3.0 + 100))) % 2;
    return scale(base, check ? 0.8 : 0.92);
  }
  if (label == "left_cabin" || label == "right_cabin") {
    const double pillar = std::abs(std::fmod(p.x() + 100.0, 0.9) - 0.45);
    if (pillar < 0.06) return scale(base, 0.8);
    return glass;
  }
  return {40, 40, 42};
}

Rgb box_texture(const std::string& label, const Vec3& p, Rgb base) {
  static const std::map<std::string, double> shade{{"front", 1.0}, {"back", 0.6},  {"left", 0.85},
                                                   {"right", 0.75}, {"top", 0.95}, {"bottom", 0.5}};
  const auto it = shade.find(label);
  const bool check = (int(std::floor(p.x() * 2 + 100)) + int(std::floor(p.y() * 2 + 100)) +
                      int(std::floor(p.z() * 2 + 100))) % 2;
  return scale(base, (it == shade.end() ? 0.7 : it->second) * (check ? 1.0 : 0.8));
}

Rgb background(int y, int height) {
  const double t = height > 1 ? double(y) / (height - 1) : 0.0;
  return mix({200, 210, 225}, {150, 150, 140}, t);
}

}  // namespace

CadModel make_toy_car(int id, const std::string& name, const ToyCarShape& s) {
  const double hl = s.length / 2, hw = s.width / 2, cw = hw - s.cabin_inset;
  const double z0 = -s.cabin_height / 2;
  const double zb = z0 + s.body_height, zc = z0 + s.cabin_height;
  CadModel cad;
  cad.id = id;
  cad.name = name;
  cad.mesh.vertices = {
      {hl, hw, z0},   {hl, -hw, z0},  {-hl, hw, z0},  {-hl, -hw, z0},  // wheels
      {hl, hw, zb},   {hl, -hw, zb},  {-hl, hw, zb},  {-hl, -hw, zb},  // lights, trunk
      {s.windshield_x, cw, zc}, {s.windshield_x, -cw, zc},            // upper windshield
      {s.rearwindow_x, cw, zc}, {s.rearwindow_x, -cw, zc},            // upper rear window
  };
  Mesh& m = cad.mesh;
  add_quad(m, "bottom", 0, 1, 3, 2);
  add_quad(m, "front", 0, 1, 5, 4);
  add_quad(m, "back", 2, 3, 7, 6);
  add_quad(m, "left", 0, 2, 6, 4);
  add_quad(m, "right", 1, 3, 7, 5);
  add_quad(m, "windshield", 4, 5, 9, 8);
  add_quad(m, "roof", 8, 9, 11, 10);
  add_quad(m, "rearwindow", 6, 7, 11, 10);
  add_quad(m, "left_cabin", 4, 8, 10, 6);
  add_quad(m, "right_cabin", 5, 9, 11, 7);

  const std::array<std::pair<const char*, int>, 12> kps{{
      {"left_front_wheel", 0}, {"right_front_wheel", 1}, {"left_back_wheel", 2}, {"right_back_wheel", 3},
      {"left_front_light", 4}, {"right_front_light", 5}, {"left_back_trunk", 6}, {"right_back_trunk", 7},
      {"upper_left_windshield", 8}, {"upper_right_windshield", 9},
      {"upper_left_rearwindow", 10}, {"upper_right_rearwindow", 11},
  }};
  for (const auto& [n, i] : kps) cad.keypoints.emplace(n, m.vertices[std::size_t(i)]);
  return cad;
}

std::vector<CadModel> toy_car_catalog() {
  return {
      make_toy_car(0, "sedan", {4.0, 1.8, 0.8, 1.45, 0.15, 0.6, -1.1}),
      make_toy_car(1, "hatchback", {3.6, 1.75, 0.75, 1.5, 0.14, 0.4, -1.6}),
      make_toy_car(2, "van", {4.4, 1.9, 1.0, 1.95, 0.1, 1.4, -2.0}),
      make_toy_car(3, "suv", {4.2, 1.9, 0.95, 1.75, 0.12, 0.9, -1.9}),
      make_toy_car(4, "coupe", {4.1, 1.8, 0.7, 1.25, 0.2, 0.3, -0.8}),
      make_toy_car(5, "wagon", {4.5, 1.8, 0.78, 1.48, 0.13, 0.7, -2.05}),
  };
}

CadModel make_box(int id, const Vec3& h) {
  CadModel cad;
  cad.id = id;
  cad.name = "box";
  const std::array<std::pair<const char*, Vec3>, 8> corners{{
      {"front_left_top", {h.x(), h.y(), h.z()}},
      {"front_right_top", {h.x(), -h.y(), h.z()}},
      {"front_left_bottom", {h.x(), h.y(), -h.z()}},
      {"front_right_bottom", {h.x(), -h.y(), -h.z()}},
      {"back_left_top", {-h.x(), h.y(), h.z()}},
      {"back_right_top", {-h.x(), -h.y(), h.z()}},
      {"back_left_bottom", {-h.x(), h.y(), -h.z()}},
      {"back_right_bottom", {-h.x(), -h.y(), -h.z()}},
  }};
  for (const auto& [n, v] : corners) {
    cad.keypoints.emplace(n, v);
    cad.mesh.vertices.push_back(v);
  }
  // 0 flt, 1 frt, 2 flb, 3 frb, 4 blt, 5 brt, 6 blb, 7 brb
  add_quad(cad.mesh, "front", 0, 1, 3, 2);
  add_quad(cad.mesh, "back", 4, 5, 7, 6);
  add_quad(cad.mesh, "left", 0, 4, 6, 2);
  add_quad(cad.mesh, "right", 1, 5, 7, 3);
  add_quad(cad.mesh, "top", 0, 1, 5, 4);
  add_quad(cad.mesh, "bottom", 2, 3, 7, 6);
  return cad;
}

Mesh make_icosphere(double radius, int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Mesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : m.vertices) v.normalize();
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    const auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      if (const auto it = midpoint.find(key); it != midpoint.end()) return it->second;
      m.vertices.push_back((m.vertices[std::size_t(a)] + m.vertices[std::size_t(b)]).normalized());
      const int idx = int(m.vertices.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }
  for (auto& v : m.vertices) v *= radius;
  return m;
}

RgbImage render_textured(const CadModel& cad, const Viewpoint& view, const Intrinsics& k, ImageSize size,
                         std::uint32_t palette_index) {
  const RenderBuffers buf = rasterize(cad.mesh, view, k, size);
  const Rgb base = kPalette[palette_index % kPalette.size()];
  const bool is_car = cad.keypoints.count("left_front_wheel") && cad.keypoints.count("left_front_light");
  const CarFrame frame = is_car ? car_frame(cad.keypoints) : CarFrame{};
  const Viewpoint to_world = view.inverse();
  const Vec3 light = Vec3(0.3, 0.5, 0.8).normalized();

  RgbImage img(size);
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      Rgb c = background(y, size.height);
      const std::size_t idx = buf.index(x, y);
      if (buf.face_id[idx] >= 0) {
        const double z = buf.depth[idx];
        const Vec3 cam(z * (x + 0.5 - k.principal_point.x()) / k.focal,
                       z * (y + 0.5 - k.principal_point.y()) / k.focal, z);
        const Vec3 p = to_world.apply(cam);
        const std::string& label = cad.mesh.face_labels.empty()
                                       ? std::string()
                                       : cad.mesh.face_labels[std::size_t(buf.face_id[idx])];
        c = is_car ? car_texture(label, p, frame, base) : box_texture(label, p, base);
        c = scale(c, 0.65 + 0.35 * std::max(0.0, buf.normals[idx].dot(light)));
      }
      auto* px = img.pixel(x, y);
      px[0] = c.r;
      px[1] = c.g;
      px[2] = c.b;
    }
  }
  return img;
}

Dataset make_toy_vehicle_dataset(const ToyDatasetOptions& options) {
  Dataset ds;
  ds.class_name = "car";
  ds.spec = vehicle_patch_spec();
  ds.catalog.class_name = ds.class_name;
  ds.catalog.models = toy_car_catalog();
  for (auto& m : ds.catalog.models) m.mesh_path = "cads/cad_" + std::to_string(m.id) + ".obj";

  const Intrinsics k = Intrinsics::centered(options.size);
  int n = 0;
  for (const double el : options.elevations_deg) {
    for (const double az : options.azimuths_deg) {
      ++n;
      AnnotatedSample s;
      s.id = "s" + std::to_string(n);
      s.class_name = ds.class_name;
      s.cad_id = (n - 1) % int(ds.catalog.models.size());
      const SphericalPose pose = SphericalPose::make(az, el, options.radius);
      s.view = pose;
      const CadModel& cad = ds.catalog.at(s.cad_id);
      const Viewpoint view = viewpoint_from_spherical(pose);
      s.image = render_textured(cad, view, k, options.size, std::uint32_t(n - 1));
      s.keypoints = project_points(cad.keypoints, view, k, options.size);
      s.image_path = "images/" + s.id + ".png";
      ds.samples.push_back(std::move(s));
    }
  }
  std::sort(ds.samples.begin(), ds.samples.end(),
            [](const AnnotatedSample& a, const AnnotatedSample& b) { return a.id < b.id; });
  return ds;
}

}  // namespace patchview
