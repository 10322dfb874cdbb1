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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "patchview/dataset.hpp"
#include "patchview/pipeline.hpp"

namespace patchview {

enum class RenderOutput { kComposite, kSketch, kPatches, kAll };

const char* to_string(RenderOutput output);
RenderOutput parse_render_output(const std::string& name);  // throws Error("invalid_request")

/// One novel-view render. Unset angles and radius fall back to the sample's
/// annotated pose; an unset cad_id means the sample's own CAD.
struct RenderRequest {
  std::string sample_id;
  std::optional<int> cad_id;
  std::optional<double> azimuth_deg;
  std::optional<double> elevation_deg;
  std::optional<double> radius;
  std::string backend = "baseline";
  RenderOutput output = RenderOutput::kComposite;
};

/// Throws Error("invalid_request") on missing or ill-typed fields.
RenderRequest parse_render_request(const nlohmann::json& body);

struct RenderResult {
  RenderRequest request;
  SphericalPose pose;
  int cad_id = 0;
  Synthesis synthesis;
};

/// Renders from a dataset that is never mutated after construction, so a
/// single instance serves concurrent callers.
class RenderService {
 public:
  RenderService(Dataset dataset, PipelineOptions options = {});

  const Dataset& dataset() const { return dataset_; }
  const PipelineOptions& options() const { return options_; }

  /// Throws Error("sample_not_found"), Error("cad_not_found") or
  /// Error("invalid_request").
  RenderResult render(const RenderRequest& request) const;

  /// PNG bytes for the requested output layer.
  std::vector<std::uint8_t> render_png(const RenderRequest& request) const;

  nlohmann::json cads_json() const;
  nlohmann::json samples_json() const;
  nlohmann::json health_json() const;

 private:
  Dataset dataset_;
  PipelineOptions options_;
  BaselineBackend baseline_;
};

/// Side-by-side composite | sketch | patches (over kBackground).
RgbImage tile_layers(const Synthesis& synthesis);
RgbImage flatten_patches(const RgbaImage& patches);

/// HTTP status for an error kind: 400 for bad input, 404 for unknown ids,
/// 500 otherwise.
int http_status_for(const std::string& kind);
nlohmann::json error_json(const std::string& kind, const std::string& message);

/// HTTP front end. Routes: GET /api/health, /api/cads, /api/samples and
/// POST /api/render.
class HttpService {
 public:
  explicit HttpService(const RenderService& service);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Binds `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace patchview
