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
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "patchview/geometry.hpp"
#include "patchview/image.hpp"
#include "patchview/patch_spec.hpp"
#include "patchview/raster.hpp"

namespace patchview {

struct CadModel {
  int id = 0;
  std::string name;
  Mesh mesh;
  KeypointSet3D keypoints;
  std::string mesh_path;  // relative to the dataset root when loaded from disk
};

struct CadCatalog {
  std::string class_name;
  std::vector<CadModel> models;

  const CadModel* find(int id) const;
  const CadModel& at(int id) const;  // throws Error("cad_not_found")
};

using SampleView = std::variant<SphericalPose, Viewpoint>;

struct AnnotatedSample {
  std::string id;
  std::string class_name;
  RgbImage image;
  KeypointSet2D keypoints;  // normalized [0,1]^2
  SampleView view;
  int cad_id = 0;
  std::string image_path;

  Viewpoint viewpoint() const;
  const SphericalPose* pose() const { return std::get_if<SphericalPose>(&view); }
};

struct SkippedSample {
  std::string id;
  std::string kind;  // unknown_cad | malformed_keypoints | missing_image | invalid_view
  std::string message;
};

struct Dataset {
  std::filesystem::path root;
  std::string class_name;
  PatchSpec spec;
  CadCatalog catalog;
  std::vector<AnnotatedSample> samples;  // sorted by id
  std::vector<SkippedSample> skipped;

  const AnnotatedSample* find_sample(const std::string& id) const;
  /// Spherical poses of all samples annotated that way (the empirical
  /// viewpoint distribution).
  std::vector<SphericalPose> empirical_poses() const;
};

inline constexpr const char* kManifestName = "manifest.json";

/// Loads `root/manifest.json` and its assets. Invalid samples are skipped and
/// recorded in Dataset::skipped. Throws Error("missing_manifest"),
/// Error("invalid_manifest") or Error("class_mismatch") for problems that
/// invalidate the whole dataset, and mesh/keypoint errors for bad CADs.
Dataset load_dataset(const std::filesystem::path& root, const std::string& class_filter = "");

/// Writes manifest, meshes (cads/cad_<id>.obj) and images (images/<id>.png).
void write_dataset(const std::filesystem::path& root, const Dataset& dataset);

/// Checks keypoint names against the class catalog and that every value is
/// finite; returns an empty string when valid, else a description.
std::string keypoint_problem(const KeypointSet2D& kps, const PatchSpec& spec);

}  // namespace patchview
