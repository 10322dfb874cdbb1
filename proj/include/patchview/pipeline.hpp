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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "patchview/dataset.hpp"
#include "patchview/raster.hpp"
#include "patchview/sampling.hpp"
#include "patchview/warp.hpp"

namespace patchview {

inline constexpr double kPriorSideFraction = 0.10;

/// Centered square crop of the input conveying its coarse appearance.
struct PriorCrop {
  RgbImage image;
  int offset = 0;  // same on both axes
  int side = 0;
};

/// side = floor(fraction * S), offset = floor((S - side) / 2). Requires a
/// square image; throws Error("invalid_argument") when S < 10.
PriorCrop appearance_prior(const RgbImage& image, double side_fraction = kPriorSideFraction);

/// Per-channel mean of the crop, rounded.
Rgb mean_color(const RgbImage& image);

/// Everything a completion model consumes, all planes sharing one size.
struct IcnInput {
  RgbaImage patches;  // composite of the (de)warped patches
  RgbImage sketch;
  PriorCrop prior;
  Mask silhouette;
};

/// Opaque patch pixels, later patch names drawn over earlier ones.
RgbaImage composite_patches(const PatchSet& patches);

/// Throws Error("dimension_mismatch") when the planes disagree in size.
IcnInput assemble_input(const PatchSet& patches, const RgbImage& sketch, const Mask& silhouette,
                        const PriorCrop& prior);

/// Inside the silhouette: opaque patch pixels, else the prior's mean color.
/// Outside: kBackground.
RgbImage baseline_complete(const IcnInput& input);

/// Completion model interface. Implementations must tolerate concurrent
/// calls on a shared instance.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string name() const = 0;
  virtual RgbImage complete(const IcnInput& input) const = 0;
};

class BaselineBackend final : public CompletionBackend {
 public:
  std::string name() const override { return "baseline"; }
  RgbImage complete(const IcnInput& input) const override { return baseline_complete(input); }
};

struct PipelineOptions {
  ImageSize size{128, 128};
  /// Focal length in pixels at the sample's native image width; scaled
  /// proportionally when rendering at another size.
  double focal = kDefaultFocal;
  VisibilityOptions visibility;
  bool symmetry = true;
};

/// Intrinsics for rendering a sample at `options.size`.
Intrinsics intrinsics_for(const AnnotatedSample& sample, const PipelineOptions& options);

/// Sample image brought to `options.size`.
RgbImage working_image(const AnnotatedSample& sample, const PipelineOptions& options);

struct TrainingPair {
  std::string sample_id;
  std::uint64_t seed = 0;
  SampleView src_view;
  SphericalPose mid_view;
  IcnInput input;
  RgbImage target;  // source image, kBackground outside the silhouette
  PatchSet patches; // dewarped set
  std::vector<std::string> dropped;
};

/// One self-supervised example: draw an intermediate pose, warp the source
/// patches there and back with visibility dropout, render the sketch at the
/// source pose and mask the target. `force_mid` replaces the draw.
///
/// Throws Error("sample_skipped") when every patch is dropped and the
/// silhouette is empty.
TrainingPair emit_training_pair(const AnnotatedSample& sample, const CadModel& cad, const PatchSpec& spec,
                                const SamplerConfig& sampler, std::uint64_t seed, const PipelineOptions& options,
                                const std::optional<SphericalPose>& force_mid = std::nullopt);

/// patches.png, sketch.png, prior.png, target.png, mask.png, manifest.json.
/// With `lab`, patches/prior/target RGB are stored as 8-bit LAB.
void write_training_pair(const TrainingPair& pair, const std::filesystem::path& dir, bool lab);

struct StageTiming {
  std::string stage;
  double ms = 0.0;
};

struct Synthesis {
  RgbImage image;
  IcnInput input;
  PatchSet warped;
  VisibilityReport visibility_src;
  VisibilityReport visibility_dst;
  std::vector<StageTiming> timings;
};

/// Novel view of `sample` from `target`, using `cad` for the target-view
/// keypoints, visibility and sketch. Passing a CAD other than the sample's
/// own performs shape transfer. `keypoints` overrides the annotated source
/// keypoints (used by the noise harness).
Synthesis synthesize_view(const AnnotatedSample& sample, const Viewpoint& target, const CadModel& cad,
                          const PatchSpec& spec, const CompletionBackend& backend,
                          const PipelineOptions& options, const KeypointSet2D* keypoints = nullptr);

}  // namespace patchview
