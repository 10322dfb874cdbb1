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

#include "patchview/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "patchview/error.hpp"

namespace patchview {

using nlohmann::json;

const CadModel* CadCatalog::find(int id) const {
  for (const auto& m : models)
    if (m.id == id) return &m;
  return nullptr;
}

const CadModel& CadCatalog::at(int id) const {
  if (const auto* m = find(id)) return *m;
  throw Error("cad_not_found", "no CAD model with id " + std::to_string(id));
}

Viewpoint AnnotatedSample::viewpoint() const {
  if (const auto* p = std::get_if<SphericalPose>(&view)) return viewpoint_from_spherical(*p);
  return std::get<Viewpoint>(view);
}

const AnnotatedSample* Dataset::find_sample(const std::string& id) const {
  const auto it = std::lower_bound(samples.begin(), samples.end(), id,
                                   [](const AnnotatedSample& s, const std::string& key) { return s.id < key; });
  return (it != samples.end() && it->id == id) ? &*it : nullptr;
}

std::vector<SphericalPose> Dataset::empirical_poses() const {
  std::vector<SphericalPose> poses;
  for (const auto& s : samples)
    if (const auto* p = s.pose()) poses.push_back(*p);
  return poses;
}

std::string keypoint_problem(const KeypointSet2D& kps, const PatchSpec& spec) {
  const auto catalog = spec.keypoint_catalog();
  std::string problem;
  for (const auto& [name, p] : kps) {
    if (!catalog.count(name)) problem += " unknown '" + name + "'";
    else if (!p.allFinite()) problem += " non-finite '" + name + "'";
  }
  for (const auto& name : catalog)
    if (!kps.count(name)) problem += " missing '" + name + "'";
  return problem;
}

namespace {

Vec3 vec3_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error("invalid_manifest", "expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

KeypointSet2D keypoints2d_from(const json& j) {
  if (!j.is_object()) throw Error("malformed_keypoints", "keypoints2d must be an object");
  KeypointSet2D kps;
  for (const auto& [name, v] : j.items()) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw Error("malformed_keypoints", "keypoint '" + name + "' must be [u, v]");
    }
    kps.emplace(name, Vec2(v[0].get<double>(), v[1].get<double>()));
  }
  return kps;
}

SampleView view_from(const json& j) {
  if (!j.is_object()) throw Error("invalid_view", "view must be an object");
  if (j.contains("matrix")) {
    const auto m = j.at("matrix").get<std::vector<double>>();
    if (m.size() != 16) throw Error("invalid_view", "view matrix needs 16 values");
    std::array<double, 16> a{};
    std::copy(m.begin(), m.end(), a.begin());
    try {
      return Viewpoint::from_matrix(a);
    } catch (const Error& e) {
      throw Error("invalid_view", e.what());
    }
  }
  try {
    return SphericalPose::make(j.at("azimuth_deg").get<double>(), j.at("elevation_deg").get<double>(),
                               j.at("radius").get<double>());
  } catch (const Error& e) {
    throw Error("invalid_view", e.what());
  }
}

json view_to_json(const SampleView& view) {
  if (const auto* p = std::get_if<SphericalPose>(&view)) {
    return {{"azimuth_deg", p->azimuth_deg}, {"elevation_deg", p->elevation_deg}, {"radius", p->radius}};
  }
  const auto m = std::get<Viewpoint>(view).to_matrix();
  return {{"matrix", std::vector<double>(m.begin(), m.end())}};
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& root, const std::string& class_filter) {
  const auto manifest_path = root / kManifestName;
  std::ifstream f(manifest_path);
  if (!f) throw Error("missing_manifest", "no manifest at " + manifest_path.string());
  json doc;
  try {
    f >> doc;
  } catch (const json::exception& e) {
    throw Error("invalid_manifest", manifest_path.string() + ": " + e.what());
  }

  Dataset ds;
  ds.root = root;
  try {
    ds.class_name = doc.at("class").get<std::string>();
    if (!class_filter.empty() && class_filter != ds.class_name) {
      throw Error("class_mismatch", "dataset class '" + ds.class_name + "' does not match '" + class_filter + "'");
    }
    ds.spec = doc.contains("patch_spec") ? load_patch_spec(root / doc.at("patch_spec").get<std::string>())
                                         : builtin_patch_spec(ds.class_name);
    ds.catalog.class_name = ds.class_name;

    const auto catalog = ds.spec.keypoint_catalog();
    for (const auto& c : doc.at("cads")) {
      CadModel m;
      m.id = c.at("id").get<int>();
      m.name = c.value("name", "cad_" + std::to_string(m.id));
      m.mesh_path = c.at("mesh").get<std::string>();
      if (ds.catalog.find(m.id)) throw Error("invalid_manifest", "duplicate CAD id " + std::to_string(m.id));
      m.mesh = load_obj(root / m.mesh_path);
      for (const auto& [name, v] : c.at("keypoints3d").items()) m.keypoints.emplace(name, vec3_from(v));
      for (const auto& name : catalog) {
        if (!m.keypoints.count(name)) {
          throw Error("malformed_keypoints", "CAD " + std::to_string(m.id) + " lacks 3D keypoint '" + name + "'");
        }
      }
      ds.catalog.models.push_back(std::move(m));
    }
    std::sort(ds.catalog.models.begin(), ds.catalog.models.end(),
              [](const CadModel& a, const CadModel& b) { return a.id < b.id; });

    std::set<std::string> seen;
    for (const auto& s : doc.value("samples", json::array())) {
      AnnotatedSample sample;
      sample.id = s.at("id").get<std::string>();
      sample.class_name = ds.class_name;
      if (!seen.insert(sample.id).second) throw Error("invalid_manifest", "duplicate sample id " + sample.id);
      try {
        sample.cad_id = s.at("cad_id").get<int>();
        if (!ds.catalog.find(sample.cad_id)) {
          throw Error("unknown_cad", "cad_id " + std::to_string(sample.cad_id) + " is not in the catalog");
        }
        sample.keypoints = keypoints2d_from(s.at("keypoints2d"));
        if (auto problem = keypoint_problem(sample.keypoints, ds.spec); !problem.empty()) {
          throw Error("malformed_keypoints", "keypoints:" + problem);
        }
        sample.view = view_from(s.at("view"));
        sample.image_path = s.at("image").get<std::string>();
        const auto image_path = root / sample.image_path;
        if (!std::filesystem::exists(image_path)) {
          throw Error("missing_image", "image not found: " + image_path.string());
        }
        try {
          sample.image = read_png_rgb(image_path);
        } catch (const Error& e) {
          throw Error("missing_image", e.what());
        }
      } catch (const Error& e) {
        ds.skipped.push_back({sample.id, e.kind(), e.what()});
        continue;
      } catch (const json::exception& e) {
        ds.skipped.push_back({sample.id, "invalid_manifest", e.what()});
        continue;
      }
      ds.samples.push_back(std::move(sample));
    }
  } catch (const json::exception& e) {
    throw Error("invalid_manifest", manifest_path.string() + ": " + e.what());
  }
  std::sort(ds.samples.begin(), ds.samples.end(),
            [](const AnnotatedSample& a, const AnnotatedSample& b) { return a.id < b.id; });
  return ds;
}

void write_dataset(const std::filesystem::path& root, const Dataset& dataset) {
  namespace fs = std::filesystem;
  fs::create_directories(root / "cads");
  fs::create_directories(root / "images");

  json cads = json::array();
  for (const auto& m : dataset.catalog.models) {
    const std::string rel = m.mesh_path.empty() ? "cads/cad_" + std::to_string(m.id) + ".obj" : m.mesh_path;
    fs::create_directories((root / rel).parent_path());
    write_obj(root / rel, m.mesh);
    json kps = json::object();
    for (const auto& [name, v] : m.keypoints) kps[name] = {v.x(), v.y(), v.z()};
    cads.push_back({{"id", m.id}, {"name", m.name}, {"mesh", rel}, {"keypoints3d", kps}});
  }

  json samples = json::array();
  for (const auto& s : dataset.samples) {
    const std::string rel = s.image_path.empty() ? "images/" + s.id + ".png" : s.image_path;
    fs::create_directories((root / rel).parent_path());
    write_png(root / rel, s.image);
    json kps = json::object();
    for (const auto& [name, v] : s.keypoints) kps[name] = {v.x(), v.y()};
    samples.push_back({{"id", s.id}, {"image", rel}, {"keypoints2d", kps}, {"view", view_to_json(s.view)},
                       {"cad_id", s.cad_id}});
  }

  json doc = {{"class", dataset.class_name}, {"cads", cads}, {"samples", samples}};
  bool custom_spec = true;
  try {
    custom_spec = !(builtin_patch_spec(dataset.class_name) == dataset.spec);
  } catch (const Error&) {
  }
  if (custom_spec) {
    dataset.spec.validate();
    std::ofstream sf(root / "patch_spec.json", std::ios::trunc);
    sf << to_json(dataset.spec).dump(2) << '\n';
    doc["patch_spec"] = "patch_spec.json";
  }
  std::ofstream f(root / kManifestName, std::ios::trunc);
  if (!f) throw Error("io_error", "cannot write manifest under " + root.string());
  f << doc.dump(2) << '\n';
}

}  // namespace patchview
