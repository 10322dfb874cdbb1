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
#include <random>
#include <string_view>
#include <vector>

#include "patchview/geometry.hpp"

namespace patchview {

enum class SamplerMode { kEmpirical, kUniformHemisphere, kAzimuthRing };

struct SamplerConfig {
  SamplerMode mode = SamplerMode::kEmpirical;
  /// Pool for kEmpirical; an empty pool falls back to the uniform hemisphere.
  std::vector<SphericalPose> empirical;
  double radius = 140.0;               // hemisphere and ring draws
  double ring_elevation_deg = 10.0;
  int ring_steps = 12;
};

inline constexpr int kAzimuthRingSteps = 12;

/// Seeded viewpoint source. Hemisphere draws are area-uniform over the upper
/// hemisphere (elevation density proportional to cos); the ring walks
/// 0, 30, ..., 330 degrees and repeats.
class ViewpointSampler {
 public:
  ViewpointSampler(SamplerConfig config, std::uint64_t seed);

  SphericalPose next();
  const SamplerConfig& config() const { return config_; }

 private:
  SamplerConfig config_;
  std::mt19937_64 rng_;
  std::size_t step_ = 0;
};

/// Adds independent N(0, sigma^2) noise to each normalized coordinate and
/// clamps into [0, 1].
KeypointSet2D perturb_keypoints(const KeypointSet2D& kps, double sigma, std::uint64_t seed);

/// Deterministic 64-bit mix of a base seed and a string (sample ids).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key);

}  // namespace patchview
