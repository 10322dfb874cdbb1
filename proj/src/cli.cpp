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

#include "patchview/cli.hpp"

#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <omp.h>

#include "patchview/error.hpp"
#include "patchview/metrics.hpp"
#include "patchview/service.hpp"
#include "patchview/toy.hpp"

namespace patchview {
namespace {

struct CommonFlags {
  std::string data;
  std::string out = ".";
  int size = 128;
  bool lab = false;
  double threshold = 0.5;
};

PipelineOptions pipeline_options(const CommonFlags& f) {
  if (f.size < 10) throw Error("invalid_argument", "--size must be at least 10");
  PipelineOptions o;
  o.size = {f.size, f.size};
  o.visibility.threshold = f.threshold;
  return o;
}

void add_common(CLI::App* app, CommonFlags& f, bool needs_out) {
  app->add_option("--data", f.data, "Dataset root")->required();
  if (needs_out) app->add_option("--out", f.out, "Output directory");
  app->add_option("--size", f.size, "Output side length in pixels")->capture_default_str();
  app->add_option("--threshold-visibility", f.threshold, "Patch visibility fraction threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << error_json(kind, message).dump() << '\n';
}

int exit_code_for(const std::string& kind) {
  return (kind == "sample_not_found" || kind == "cad_not_found") ? kExitNotFound : kExitFailure;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct RenderFlags {
  CommonFlags common;
  std::string sample;
  std::optional<int> cad;
  std::optional<double> azimuth, elevation, radius;
  std::string output = "all";
};

int run_render(const RenderFlags& f, std::ostream& out) {
  RenderService service(load_dataset(f.common.data), pipeline_options(f.common));
  RenderRequest req;
  req.sample_id = f.sample;
  req.cad_id = f.cad;
  req.azimuth_deg = f.azimuth;
  req.elevation_deg = f.elevation;
  req.radius = f.radius;
  req.output = parse_render_output(f.output);

  const RenderResult r = service.render(req);
  const std::filesystem::path dir = f.common.out;
  std::filesystem::create_directories(dir);
  const Synthesis& s = r.synthesis;
  const bool all = req.output == RenderOutput::kAll;
  if (all || req.output == RenderOutput::kComposite) write_png(dir / "composite.png", s.image);
  if (all || req.output == RenderOutput::kSketch) write_png(dir / "sketch.png", s.input.sketch);
  if (all || req.output == RenderOutput::kPatches) write_png(dir / "patches.png", s.input.patches);
  if (all) write_png(dir / "prior.png", s.input.prior.image);

  nlohmann::json timings = nlohmann::json::object();
  for (const auto& t : s.timings) timings[t.stage] = t.ms;
  nlohmann::json dropped = nlohmann::json::object();
  for (const auto& [name, p] : s.warped.patches) {
    if (p.dropped()) dropped[name] = to_string(p.drop);
  }
  out << nlohmann::json{{"sample_id", req.sample_id},
                        {"cad_id", r.cad_id},
                        {"azimuth_deg", r.pose.azimuth_deg},
                        {"elevation_deg", r.pose.elevation_deg},
                        {"radius", r.pose.radius},
                        {"dropped_patches", dropped},
                        {"timings_ms", timings}}
             .dump()
      << '\n';
  return kExitOk;
}

struct EmitFlags {
  CommonFlags common;
  std::uint64_t seed = 0;
  int limit = -1;
  std::string sampler = "empirical";
};

SamplerConfig sampler_config(const std::string& mode, const Dataset& ds) {
  SamplerConfig c;
  if (mode == "empirical") {
    c.mode = SamplerMode::kEmpirical;
    c.empirical = ds.empirical_poses();
  } else if (mode == "hemisphere") {
    c.mode = SamplerMode::kUniformHemisphere;
  } else if (mode == "ring") {
    c.mode = SamplerMode::kAzimuthRing;
  } else {
    throw Error("invalid_argument", "unknown sampler '" + mode + "'");
  }
  return c;
}

int run_emit(const EmitFlags& f, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset ds = load_dataset(f.common.data);
  const PipelineOptions options = pipeline_options(f.common);
  const SamplerConfig sampler = sampler_config(f.sampler, ds);
  const std::filesystem::path root = f.common.out;
  std::filesystem::create_directories(root);

  const std::size_t n = f.limit < 0 ? ds.samples.size() : std::min(ds.samples.size(), std::size_t(f.limit));
  struct Outcome {
    std::optional<TrainingPair> pair;
    std::string kind, message;
  };
  std::vector<Outcome> outcomes(n);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
    const AnnotatedSample& s = ds.samples[std::size_t(i)];
    Outcome& o = outcomes[std::size_t(i)];
    try {
      const std::uint64_t seed = derive_seed(f.seed, s.id);
      TrainingPair pair = emit_training_pair(s, ds.catalog.at(s.cad_id), ds.spec, sampler, seed, options);
      write_training_pair(pair, root / s.id, f.common.lab);
      pair.input = {};  // keep only the bookkeeping
      pair.target = {};
      o.pair = std::move(pair);
    } catch (const Error& e) {
      o.kind = e.kind();
      o.message = e.what();
    } catch (const std::exception& e) {
      o.kind = "internal";
      o.message = e.what();
    }
  }

  nlohmann::json dropout = nlohmann::json::object();
  for (const auto& [name, _] : ds.spec.patches) {
    dropout[name] = {{"dropped", 0}, {"emitted", 0}, {"reasons", nlohmann::json::object()}};
  }
  nlohmann::json failures = nlohmann::json::array();
  std::size_t written = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Outcome& o = outcomes[i];
    if (!o.pair) {
      failures.push_back({{"sample_id", ds.samples[i].id}, {"kind", o.kind}, {"message", o.message}});
      print_error(err, o.kind, o.message);
      continue;
    }
    ++written;
    for (const auto& [name, p] : o.pair->patches.patches) {
      auto& d = dropout[name];
      d["emitted"] = d["emitted"].get<int>() + 1;
      if (!p.dropped()) continue;
      d["dropped"] = d["dropped"].get<int>() + 1;
      auto& r = d["reasons"][to_string(p.drop)];
      r = r.is_null() ? 1 : r.get<int>() + 1;
    }
  }
  for (auto& [name, d] : dropout.items()) {
    const int emitted = d["emitted"].get<int>();
    d["rate"] = emitted ? double(d["dropped"].get<int>()) / emitted : 0.0;
  }
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& s : ds.skipped) skipped.push_back({{"sample_id", s.id}, {"kind", s.kind}, {"message", s.message}});

  const nlohmann::json summary = {
      {"seed", f.seed},
      {"size", f.common.size},
      {"sampler", f.sampler},
      {"color_space", f.common.lab ? "lab" : "rgb"},
      {"threshold_visibility", f.common.threshold},
      {"samples_written", written},
      {"failed", failures},
      {"skipped_at_load", skipped},
      {"patch_dropout", dropout},
  };
  std::ofstream(root / "summary.json", std::ios::binary) << summary.dump(2) << '\n';

  const double secs = seconds_since(t0);
  out << nlohmann::json{{"samples_written", written},
                        {"seconds", secs},
                        {"samples_per_second", secs > 0 ? double(written) / secs : 0.0}}
             .dump()
      << '\n';
  return kExitOk;
}

HttpService* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"patchview: patch-based novel view synthesis toolkit", "patchview"};
  app.require_subcommand(1);

  RenderFlags render;
  auto* cmd_render = app.add_subcommand("render", "Render a sample from a new viewpoint");
  add_common(cmd_render, render.common, true);
  cmd_render->add_option("--sample", render.sample, "Sample id")->required();
  cmd_render->add_option("--cad", render.cad, "CAD id (shape transfer)");
  cmd_render->add_option("--azimuth", render.azimuth, "Azimuth in degrees");
  cmd_render->add_option("--elevation", render.elevation, "Elevation in degrees");
  cmd_render->add_option("--radius", render.radius, "Camera distance");
  cmd_render->add_option("--output", render.output, "composite | sketch | patches | all")
      ->capture_default_str()
      ->check(CLI::IsMember({"composite", "sketch", "patches", "all"}));

  EmitFlags emit;
  auto* cmd_emit = app.add_subcommand("emit-pairs", "Write self-supervised training pairs");
  add_common(cmd_emit, emit.common, true);
  cmd_emit->add_option("--seed", emit.seed, "Base seed")->required();
  cmd_emit->add_flag("--lab", emit.common.lab, "Store color planes as 8-bit LAB");
  cmd_emit->add_option("--limit", emit.limit, "Emit at most this many samples");
  cmd_emit->add_option("--sampler", emit.sampler, "empirical | hemisphere | ring")
      ->capture_default_str()
      ->check(CLI::IsMember({"empirical", "hemisphere", "ring"}));

  std::string fid_a, fid_b;
  auto* cmd_fid = app.add_subcommand("fid", "Frechet distance between two feature files");
  cmd_fid->add_option("features_a", fid_a)->required()->check(CLI::ExistingFile);
  cmd_fid->add_option("features_b", fid_b)->required()->check(CLI::ExistingFile);

  CommonFlags serve;
  std::string bind = "127.0.0.1";
  int port = 8080;
  auto* cmd_serve = app.add_subcommand("serve", "Run the HTTP render service");
  add_common(cmd_serve, serve, false);
  cmd_serve->add_option("--bind", bind, "Bind address")->capture_default_str();
  cmd_serve->add_option("--port", port, "Port (0 picks a free one)")->capture_default_str();

  std::string toy_out;
  auto* cmd_toy = app.add_subcommand("make-toy", "Generate the procedural toy vehicle dataset");
  cmd_toy->add_option("--out", toy_out, "Output dataset root")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return kExitUsage;
  }

  try {
    if (*cmd_render) return run_render(render, out);
    if (*cmd_emit) return run_emit(emit, out, err);
    if (*cmd_fid) {
      const double d = frechet_distance(gaussian_stats(read_features(fid_a)), gaussian_stats(read_features(fid_b)));
      out << nlohmann::json{{"fid", d}}.dump() << '\n';
      return kExitOk;
    }
    if (*cmd_toy) {
      write_dataset(toy_out, make_toy_vehicle_dataset());
      return kExitOk;
    }
    if (*cmd_serve) {
      RenderService service(load_dataset(serve.data), pipeline_options(serve));
      HttpService http(service);
      const int bound = http.bind(bind, port);
      if (bound < 0) throw Error("bind_failed", "cannot bind " + bind + ":" + std::to_string(port));
      out << nlohmann::json{{"listening", bind + ":" + std::to_string(bound)}}.dump() << std::endl;
      g_server = &http;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      http.listen();
      g_server = nullptr;
      return kExitOk;
    }
  } catch (const Error& e) {
    print_error(err, e.kind(), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace patchview
