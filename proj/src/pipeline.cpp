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

#include "patchview/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "patchview/color.hpp"
#include "patchview/error.hpp"

namespace patchview {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

nlohmann::json view_json(const SampleView& view) {
  if (const auto* p = std::get_if<SphericalPose>(&view)) {
    return {{"azimuth_deg", p->azimuth_deg}, {"elevation_deg", p->elevation_deg}, {"radius", p->radius}};
  }
  return {{"matrix", std::get<Viewpoint>(view).to_matrix()}};
}

RgbImage lab_encoded(const RgbImage& image) { return encode_lab8(rgb_to_lab(image)); }

RgbaImage lab_encoded(const RgbaImage& image) {
  RgbImage rgb = lab_encoded(drop_alpha(image));
  RgbaImage out(image.size());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = rgb.at(x, y, c);
      out.at(x, y, 3) = image.at(x, y, 3);
    }
  }
  return out;
}

}  // namespace

PriorCrop appearance_prior(const RgbImage& image, double side_fraction) {
  const int s = image.width();
  if (image.height() != s) throw Error("invalid_argument", "appearance prior needs a square image");
  if (s < 10) throw Error("invalid_argument", "image too small for an appearance prior: " + std::to_string(s));
  PriorCrop crop;
  crop.side = std::max(1, int(std::floor(side_fraction * s)));
  crop.offset = (s - crop.side) / 2;
  crop.image = RgbImage(crop.side, crop.side);
  for (int y = 0; y < crop.side; ++y) {
    for (int x = 0; x < crop.side; ++x) {
      const std::uint8_t* p = image.pixel(crop.offset + x, crop.offset + y);
      std::copy(p, p + 3, crop.image.pixel(x, y));
    }
  }
  return crop;
}

Rgb mean_color(const RgbImage& image) {
  if (image.empty()) return kBackground;
  double sum[3] = {0, 0, 0};
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      for (int c = 0; c < 3; ++c) sum[c] += image.at(x, y, c);
  const double n = double(image.size().pixel_count());
  const auto ch = [&](int c) { return std::uint8_t(std::lround(sum[c] / n)); };
  return {ch(0), ch(1), ch(2)};
}

RgbaImage composite_patches(const PatchSet& patches) {
  RgbaImage out(patches.size);
  // std::map iterates in name order, so later names land on top.
  for (const auto& [name, p] : patches.patches) {
    if (p.dropped() || p.content.size() != patches.size) continue;
    for (int y = 0; y < out.height(); ++y) {
      for (int x = 0; x < out.width(); ++x) {
        const std::uint8_t* s = p.content.pixel(x, y);
        if (s[3] == 0) continue;
        std::copy(s, s + 4, out.pixel(x, y));
      }
    }
  }
  return out;
}

IcnInput assemble_input(const PatchSet& patches, const RgbImage& sketch, const Mask& silhouette,
                        const PriorCrop& prior) {
  if (sketch.size() != patches.size || silhouette.size() != patches.size) {
    throw Error("dimension_mismatch", "patches, sketch and silhouette must share one size");
  }
  return {composite_patches(patches), sketch, prior, silhouette};
}

RgbImage baseline_complete(const IcnInput& input) {
  const ImageSize size = input.sketch.size();
  if (input.patches.size() != size || input.silhouette.size() != size) {
    throw Error("dimension_mismatch", "completion input planes differ in size");
  }
  const Rgb fill = mean_color(input.prior.image);
  RgbImage out = fill_image(size, kBackground);
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      if (input.silhouette.at(x, y, 0) == 0) continue;
      std::uint8_t* o = out.pixel(x, y);
      const std::uint8_t* p = input.patches.pixel(x, y);
      if (p[3] > 0) {
        std::copy(p, p + 3, o);
      } else {
        o[0] = fill.r;
        o[1] = fill.g;
        o[2] = fill.b;
      }
    }
  }
  return out;
}

Intrinsics intrinsics_for(const AnnotatedSample& sample, const PipelineOptions& options) {
  const int native = sample.image.empty() ? options.size.width : sample.image.width();
  return Intrinsics::centered(options.size, options.focal * double(options.size.width) / double(native));
}

RgbImage working_image(const AnnotatedSample& sample, const PipelineOptions& options) {
  return resize_bilinear(sample.image, options.size);
}

TrainingPair emit_training_pair(const AnnotatedSample& sample, const CadModel& cad, const PatchSpec& spec,
                                const SamplerConfig& sampler, std::uint64_t seed, const PipelineOptions& options,
                                const std::optional<SphericalPose>& force_mid) {
  const ImageSize size = options.size;
  const Intrinsics k = intrinsics_for(sample, options);
  const RgbImage image = working_image(sample, options);

  TrainingPair pair;
  pair.sample_id = sample.id;
  pair.seed = seed;
  pair.src_view = sample.view;
  pair.mid_view = force_mid ? *force_mid : ViewpointSampler(sampler, seed).next();

  const Viewpoint src_view = sample.viewpoint();
  const Viewpoint mid_view = viewpoint_from_spherical(pair.mid_view);
  const RenderBuffers src_buf = rasterize(cad.mesh, src_view, k, size);
  const RenderBuffers mid_buf = rasterize(cad.mesh, mid_view, k, size);
  const VisibilityFlags vis_src =
      visibility_flags(patch_visibility(cad.keypoints, spec, src_buf, src_view, k, options.visibility));
  const VisibilityFlags vis_mid =
      visibility_flags(patch_visibility(cad.keypoints, spec, mid_buf, mid_view, k, options.visibility));
  const KeypointSet2D kps_mid = project_points(cad.keypoints, mid_view, k, size);

  pair.patches = dewarp_roundtrip(image, sample.keypoints, kps_mid, spec, vis_src, vis_mid);
  pair.dropped = pair.patches.dropped_names();

  const bool empty_silhouette =
      std::none_of(src_buf.silhouette.bytes().begin(), src_buf.silhouette.bytes().end(),
                   [](std::uint8_t v) { return v != 0; });
  if (empty_silhouette && pair.dropped.size() == pair.patches.patches.size()) {
    throw Error("sample_skipped", "sample '" + sample.id + "': no patch survived and the silhouette is empty");
  }

  pair.input = assemble_input(pair.patches, render_sketch(src_buf), src_buf.silhouette, appearance_prior(image));
  pair.target = fill_image(size, kBackground);
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      if (src_buf.silhouette.at(x, y, 0) == 0) continue;
      const std::uint8_t* s = image.pixel(x, y);
      std::copy(s, s + 3, pair.target.pixel(x, y));
    }
  }
  return pair;
}

void write_training_pair(const TrainingPair& pair, const std::filesystem::path& dir, bool lab) {
  std::filesystem::create_directories(dir);
  if (lab) {
    write_png(dir / "patches.png", lab_encoded(pair.input.patches));
    write_png(dir / "prior.png", lab_encoded(pair.input.prior.image));
    write_png(dir / "target.png", lab_encoded(pair.target));
  } else {
    write_png(dir / "patches.png", pair.input.patches);
    write_png(dir / "prior.png", pair.input.prior.image);
    write_png(dir / "target.png", pair.target);
  }
  write_png(dir / "sketch.png", pair.input.sketch);
  write_png(dir / "mask.png", pair.input.silhouette);

  nlohmann::json reasons = nlohmann::json::object();
  for (const auto& [name, p] : pair.patches.patches) {
    if (p.dropped()) reasons[name] = to_string(p.drop);
  }
  const nlohmann::json manifest = {
      {"sample_id", pair.sample_id},
      {"src_view", view_json(pair.src_view)},
      {"mid_view", view_json(pair.mid_view)},
      {"dropped_patches", pair.dropped},
      {"drop_reasons", reasons},
      {"seed", pair.seed},
      {"color_space", lab ? "lab" : "rgb"},
  };
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
  if (!out) throw Error("io_error", "cannot write " + (dir / "manifest.json").string());
}

Synthesis synthesize_view(const AnnotatedSample& sample, const Viewpoint& target, const CadModel& cad,
                          const PatchSpec& spec, const CompletionBackend& backend,
                          const PipelineOptions& options, const KeypointSet2D* keypoints) {
  const auto t_start = Clock::now();
  const ImageSize size = options.size;
  const Intrinsics k = intrinsics_for(sample, options);
  const RgbImage image = working_image(sample, options);
  const KeypointSet2D& kps_src = keypoints ? *keypoints : sample.keypoints;
  Synthesis out;

  auto t = Clock::now();
  const Viewpoint src_view = sample.viewpoint();
  const RenderBuffers src_buf = rasterize(cad.mesh, src_view, k, size);
  const RenderBuffers dst_buf = rasterize(cad.mesh, target, k, size);
  out.timings.push_back({"rasterize", ms_since(t)});

  t = Clock::now();
  out.visibility_src = patch_visibility(cad.keypoints, spec, src_buf, src_view, k, options.visibility);
  out.visibility_dst = patch_visibility(cad.keypoints, spec, dst_buf, target, k, options.visibility);
  const VisibilityFlags vis_src = visibility_flags(out.visibility_src);
  const VisibilityFlags vis_dst = visibility_flags(out.visibility_dst);
  out.timings.push_back({"visibility", ms_since(t)});

  t = Clock::now();
  PatchSet source = extract_patches(kps_src, spec, image);
  for (auto& [name, p] : source.patches) {
    const auto it = vis_src.find(name);
    if (!p.dropped() && (it == vis_src.end() || !it->second)) {
      p.drop = DropReason::kInvisibleSource;
      p.content = RgbaImage(size);
    }
  }
  const KeypointSet2D kps_dst = project_points(cad.keypoints, target, k, size);
  out.warped = warp_to_view(source, kps_src, kps_dst, spec, &vis_dst);
  if (options.symmetry) {
    out.warped = symmetry_transfer(source, out.warped, kps_src, kps_dst, vis_src, vis_dst, spec);
  }
  out.timings.push_back({"warp", ms_since(t)});

  t = Clock::now();
  const RgbImage sketch = render_sketch(dst_buf);
  out.input = assemble_input(out.warped, sketch, dst_buf.silhouette, appearance_prior(image));
  out.timings.push_back({"assemble", ms_since(t)});

  t = Clock::now();
  out.image = backend.complete(out.input);
  out.timings.push_back({"complete", ms_since(t)});
  out.timings.push_back({"total", ms_since(t_start)});
  return out;
}

}  // namespace patchview
