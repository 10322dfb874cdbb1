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

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace patchview {

/// Per-class catalog of planar patches. Each patch is bounded by the convex
/// hull of its keypoints; `mirror` pairs left/right patches (self-mirrored
/// patches map to themselves) and `keypoint_mirror` does the same for
/// keypoints.
struct PatchSpec {
  std::string class_name;
  std::map<std::string, std::vector<std::string>> patches;
  std::map<std::string, std::string> mirror;
  std::map<std::string, std::string> keypoint_mirror;

  /// Every keypoint name the class defines (keys of keypoint_mirror).
  std::set<std::string> keypoint_catalog() const;
  std::string mirror_of(const std::string& patch) const;

  /// Throws Error("invalid_patch_spec") when a patch has fewer than three
  /// keypoints, a name is outside the catalog, or a mirror map is not an
  /// involution.
  void validate() const;

  bool operator==(const PatchSpec&) const = default;
};

PatchSpec parse_patch_spec(const nlohmann::json& doc);
nlohmann::json to_json(const PatchSpec& spec);
PatchSpec load_patch_spec(const std::filesystem::path& path);

/// Six vehicle patches over the 12 Pascal3D+-style car keypoints.
PatchSpec vehicle_patch_spec();
/// Four chair patches over 10 keypoints.
PatchSpec chair_patch_spec();
/// Six faces of a cuboid over its 8 corners; the visibility test proxy.
PatchSpec box_patch_spec();

/// Built-in spec by class name ("car"/"vehicle", "chair", "box"). Throws
/// Error("unknown_class") otherwise.
PatchSpec builtin_patch_spec(const std::string& class_name);

}  // namespace patchview
