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

#include "patchview/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace patchview {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; avoids implementation-defined
// std::uniform_real_distribution output across standard libraries.
double unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : key) {
    h ^= std::uint8_t(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ splitmix64(h));
}

ViewpointSampler::ViewpointSampler(SamplerConfig config, std::uint64_t seed)
    : config_(std::move(config)), rng_(seed) {}

SphericalPose ViewpointSampler::next() {
  switch (config_.mode) {
    case SamplerMode::kAzimuthRing: {
      const int steps = std::max(1, config_.ring_steps);
      const double az = 360.0 * double(step_ % std::size_t(steps)) / steps;
      ++step_;
      return SphericalPose::make(az, config_.ring_elevation_deg, config_.radius);
    }
    case SamplerMode::kEmpirical:
      if (!config_.empirical.empty()) {
        const auto i = std::size_t(unit(rng_) * double(config_.empirical.size()));
        return config_.empirical[std::min(i, config_.empirical.size() - 1)];
      }
      [[fallthrough]];
    case SamplerMode::kUniformHemisphere: {
      const double az = 360.0 * unit(rng_);
      // sin(el) uniform on [0, 1) gives area-uniform directions.
      const double el = std::asin(unit(rng_)) * 180.0 / M_PI;
      return SphericalPose::make(az, el, config_.radius);
    }
  }
  return {};
}

KeypointSet2D perturb_keypoints(const KeypointSet2D& kps, double sigma, std::uint64_t seed) {
  if (sigma <= 0.0) return kps;
  std::mt19937_64 rng(seed);
  KeypointSet2D out;
  for (const auto& [name, p] : kps) {
    // Box-Muller on our own uniforms keeps draws identical across libraries.
    const double u1 = 1.0 - unit(rng), u2 = unit(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double nx = r * std::cos(2 * M_PI * u2), ny = r * std::sin(2 * M_PI * u2);
    out.emplace(name, Vec2(std::clamp(p.x() + sigma * nx, 0.0, 1.0), std::clamp(p.y() + sigma * ny, 0.0, 1.0)));
  }
  return out;
}

}  // namespace patchview
