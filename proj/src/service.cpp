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

#include "patchview/service.hpp"

#include <cmath>

#include <httplib.h>

#include "patchview/error.hpp"

namespace patchview {
namespace {

double number_field(const nlohmann::json& body, const char* key) {
  const auto& v = body.at(key);
  if (!v.is_number()) throw Error("invalid_request", std::string("'") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw Error("invalid_request", std::string("'") + key + "' must be finite");
  return d;
}

}  // namespace

const char* to_string(RenderOutput output) {
  switch (output) {
    case RenderOutput::kComposite: return "composite";
    case RenderOutput::kSketch: return "sketch";
    case RenderOutput::kPatches: return "patches";
    case RenderOutput::kAll: return "all";
  }
  return "composite";
}

RenderOutput parse_render_output(const std::string& name) {
  if (name == "composite") return RenderOutput::kComposite;
  if (name == "sketch") return RenderOutput::kSketch;
  if (name == "patches") return RenderOutput::kPatches;
  if (name == "all") return RenderOutput::kAll;
  throw Error("invalid_request", "unknown output '" + name + "'");
}

RenderRequest parse_render_request(const nlohmann::json& body) {
  if (!body.is_object()) throw Error("invalid_request", "render request must be a JSON object");
  RenderRequest r;
  if (!body.contains("sample_id") || !body["sample_id"].is_string()) {
    throw Error("invalid_request", "'sample_id' (string) is required");
  }
  r.sample_id = body["sample_id"].get<std::string>();
  if (body.contains("cad_id") && !body["cad_id"].is_null()) {
    if (!body["cad_id"].is_number_integer()) throw Error("invalid_request", "'cad_id' must be an integer");
    r.cad_id = body["cad_id"].get<int>();
  }
  if (body.contains("azimuth_deg")) r.azimuth_deg = number_field(body, "azimuth_deg");
  if (body.contains("elevation_deg")) r.elevation_deg = number_field(body, "elevation_deg");
  if (body.contains("radius")) r.radius = number_field(body, "radius");
  if (body.contains("backend")) {
    if (!body["backend"].is_string()) throw Error("invalid_request", "'backend' must be a string");
    r.backend = body["backend"].get<std::string>();
  }
  if (body.contains("output")) {
    if (!body["output"].is_string()) throw Error("invalid_request", "'output' must be a string");
    r.output = parse_render_output(body["output"].get<std::string>());
  }
  return r;
}

RenderService::RenderService(Dataset dataset, PipelineOptions options)
    : dataset_(std::move(dataset)), options_(std::move(options)) {}

RenderResult RenderService::render(const RenderRequest& request) const {
  const AnnotatedSample* sample = dataset_.find_sample(request.sample_id);
  if (!sample) throw Error("sample_not_found", "no sample '" + request.sample_id + "'");
  if (request.backend != "baseline") {
    throw Error("invalid_request", "unknown backend '" + request.backend + "'");
  }
  RenderResult out;
  out.request = request;
  out.cad_id = request.cad_id.value_or(sample->cad_id);
  const CadModel& cad = dataset_.catalog.at(out.cad_id);

  SphericalPose base{0.0, 0.0, 140.0};
  if (const auto* p = sample->pose()) base = *p;
  try {
    out.pose = SphericalPose::make(request.azimuth_deg.value_or(base.azimuth_deg),
                                   request.elevation_deg.value_or(base.elevation_deg),
                                   request.radius.value_or(base.radius));
  } catch (const Error& e) {
    throw Error("invalid_request", e.what());
  }
  out.synthesis = synthesize_view(*sample, viewpoint_from_spherical(out.pose), cad, dataset_.spec, baseline_,
                                  options_);
  return out;
}

RgbImage flatten_patches(const RgbaImage& patches) {
  RgbImage out = fill_image(patches.size(), kBackground);
  for (int y = 0; y < patches.height(); ++y) {
    for (int x = 0; x < patches.width(); ++x) {
      const std::uint8_t* p = patches.pixel(x, y);
      if (p[3] > 0) std::copy(p, p + 3, out.pixel(x, y));
    }
  }
  return out;
}

RgbImage tile_layers(const Synthesis& s) {
  const RgbImage layers[3] = {s.image, s.input.sketch, flatten_patches(s.input.patches)};
  const int w = s.image.width(), h = s.image.height();
  RgbImage out(3 * w, h);
  for (int i = 0; i < 3; ++i)
    for (int y = 0; y < h; ++y)
      std::copy(layers[i].pixel(0, y), layers[i].pixel(0, y) + 3 * w, out.pixel(i * w, y));
  return out;
}

std::vector<std::uint8_t> RenderService::render_png(const RenderRequest& request) const {
  const RenderResult r = render(request);
  switch (request.output) {
    case RenderOutput::kComposite: return encode_png(r.synthesis.image);
    case RenderOutput::kSketch: return encode_png(r.synthesis.input.sketch);
    case RenderOutput::kPatches: return encode_png(r.synthesis.input.patches);
    case RenderOutput::kAll: return encode_png(tile_layers(r.synthesis));
  }
  return {};
}

nlohmann::json RenderService::cads_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& m : dataset_.catalog.models) {
    list.push_back({{"id", m.id}, {"name", m.name}, {"face_count", m.mesh.face_count()}});
  }
  return list;
}

nlohmann::json RenderService::samples_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& s : dataset_.samples) {
    nlohmann::json j = {{"id", s.id}, {"cad_id", s.cad_id}, {"class", s.class_name}};
    if (const auto* p = s.pose()) {
      j["azimuth_deg"] = p->azimuth_deg;
      j["elevation_deg"] = p->elevation_deg;
      j["radius"] = p->radius;
    }
    list.push_back(std::move(j));
  }
  return list;
}

nlohmann::json RenderService::health_json() const {
  return {{"status", "ok"},
          {"class", dataset_.class_name},
          {"samples", dataset_.samples.size()},
          {"cads", dataset_.catalog.models.size()}};
}

int http_status_for(const std::string& kind) {
  if (kind == "sample_not_found" || kind == "cad_not_found" || kind == "not_found") return 404;
  if (kind == "invalid_request" || kind == "invalid_pose" || kind == "degenerate_up" ||
      kind == "non_positive_depth") {
    return 400;
  }
  return 500;
}

nlohmann::json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

struct HttpService::Impl {
  const RenderService& service;
  httplib::Server server;
  std::string host;
  int port = -1;

  explicit Impl(const RenderService& s) : service(s) {
    const auto send_json = [](httplib::Response& res, const nlohmann::json& j, int status = 200) {
      res.status = status;
      res.set_content(j.dump(), "application/json");
    };
    server.Get("/api/health", [this, send_json](const httplib::Request&, httplib::Response& res) {
      send_json(res, service.health_json());
    });
    server.Get("/api/cads", [this, send_json](const httplib::Request&, httplib::Response& res) {
      send_json(res, service.cads_json());
    });
    server.Get("/api/samples", [this, send_json](const httplib::Request&, httplib::Response& res) {
      send_json(res, service.samples_json());
    });
    server.Post("/api/render", [this, send_json](const httplib::Request& req, httplib::Response& res) {
      try {
        const nlohmann::json body = nlohmann::json::parse(req.body);
        const auto png = service.render_png(parse_render_request(body));
        res.status = 200;
        res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
      } catch (const nlohmann::json::exception& e) {
        send_json(res, error_json("invalid_request", e.what()), 400);
      } catch (const Error& e) {
        send_json(res, error_json(e.kind(), e.what()), http_status_for(e.kind()));
      } catch (const std::exception& e) {
        send_json(res, error_json("internal", e.what()), 500);
      }
    });
    server.set_error_handler([send_json](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        const std::string kind = res.status == 404 ? "not_found" : "http_error";
        send_json(res, error_json(kind, "HTTP " + std::to_string(res.status)), res.status);
      }
    });
  }
};

HttpService::HttpService(const RenderService& service) : impl_(std::make_unique<Impl>(service)) {}
HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  impl_->host = host;
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
  } else {
    impl_->port = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  return impl_->port;
}

bool HttpService::listen() { return impl_->server.listen_after_bind(); }

void HttpService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace patchview
