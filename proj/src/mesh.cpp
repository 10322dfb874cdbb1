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

#include <fstream>
#include <iomanip>
#include <sstream>

#include "patchview/error.hpp"
#include "patchview/raster.hpp"

namespace patchview {

namespace {

int parse_index(const std::string& token, std::size_t vertex_count, const std::string& where) {
  const auto slash = token.find('/');
  const std::string head = token.substr(0, slash);
  int idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoi(head, &used);
    if (used != head.size()) throw std::invalid_argument(head);
  } catch (const std::exception&) {
    throw Error("invalid_mesh", where + ": bad face index '" + token + "'");
  }
  if (idx < 1 || std::size_t(idx) > vertex_count) {
    throw Error("invalid_mesh", where + ": face index " + std::to_string(idx) + " out of range");
  }
  return idx - 1;
}

}  // namespace

Mesh parse_obj(std::istream& in, const std::string& origin) {
  Mesh mesh;
  std::string line;
  std::string group;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x() >> v.y() >> v.z()) || !v.allFinite()) {
        throw Error("invalid_mesh", where + ": malformed vertex");
      }
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      for (std::string t; ls >> t;) tokens.push_back(t);
      if (tokens.size() != 3) {
        throw Error("invalid_mesh", where + ": only triangular faces are supported, got " +
                                        std::to_string(tokens.size()) + " vertices");
      }
      std::array<int, 3> f{};
      for (int i = 0; i < 3; ++i) f[std::size_t(i)] = parse_index(tokens[std::size_t(i)], mesh.vertices.size(), where);
      mesh.faces.push_back(f);
      mesh.face_labels.push_back(group);
    } else if (tag == "g" || tag == "o") {
      group.clear();
      ls >> group;
    }
  }
  if (mesh.faces.empty()) throw Error("invalid_mesh", origin + ": no faces");
  bool any_label = false;
  for (const auto& l : mesh.face_labels) any_label = any_label || !l.empty();
  if (!any_label) mesh.face_labels.clear();
  remove_degenerate_faces(mesh);
  if (mesh.faces.empty()) throw Error("invalid_mesh", origin + ": every face is degenerate");
  return mesh;
}

Mesh load_obj(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("missing_file", "cannot open mesh " + path.string());
  return parse_obj(f, path.string());
}

void write_obj(const std::filesystem::path& path, const Mesh& mesh) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("io_error", "cannot write mesh " + path.string());
  f << std::setprecision(17);
  for (const auto& v : mesh.vertices) f << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  std::string group;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    if (!mesh.face_labels.empty() && mesh.face_labels[i] != group) {
      group = mesh.face_labels[i];
      f << "g " << group << '\n';
    }
    const auto& t = mesh.faces[i];
    f << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

std::size_t remove_degenerate_faces(Mesh& mesh) {
  std::size_t kept = 0;
  const bool labels = !mesh.face_labels.empty();
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const auto& f = mesh.faces[i];
    const Vec3& a = mesh.vertices[std::size_t(f[0])];
    const Vec3& b = mesh.vertices[std::size_t(f[1])];
    const Vec3& c = mesh.vertices[std::size_t(f[2])];
    const double scale = std::max({(b - a).squaredNorm(), (c - a).squaredNorm(), 1e-300});
    if ((b - a).cross(c - a).norm() <= 1e-12 * scale) continue;
    mesh.faces[kept] = f;
    if (labels) mesh.face_labels[kept] = mesh.face_labels[i];
    ++kept;
  }
  const std::size_t removed = mesh.faces.size() - kept;
  mesh.faces.resize(kept);
  if (labels) mesh.face_labels.resize(kept);
  return removed;
}

Mesh transform_mesh(const Mesh& mesh, const Mat3& rotation, const Vec3& translation) {
  Mesh out = mesh;
  for (auto& v : out.vertices) v = rotation * v + translation;
  return out;
}

}  // namespace patchview
