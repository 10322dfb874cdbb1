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

// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include "patchview/raster.hpp"
#include "patchview/toy.hpp"
#include "patchview/warp.hpp"

using namespace patchview;

namespace {

ImageSize square(const benchmark::State& state) {
  const int side = int(state.range(0));
  return {side, side};
}

const Mesh& sphere() {
  static const Mesh m = make_icosphere(1.0, 5);
  return m;
}

Viewpoint sphere_view() { return viewpoint_from_spherical(SphericalPose::make(30, 20, 4)); }

template <RenderBuffers (*Raster)(const Mesh&, const Viewpoint&, const Intrinsics&, ImageSize)>
void BM_Rasterize(benchmark::State& state) {
  const ImageSize size = square(state);
  // Focal scaled so the sphere fills a similar share of every size.
  const Intrinsics k = Intrinsics::centered(size, 0.5 * size.width * 4 / 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(Raster(sphere(), sphere_view(), k, size));
  state.counters["faces"] = double(sphere().faces.size());
}

template <RgbaImage (*Warp)(const RgbaImage&, const Polygon&, const Homography&, ImageSize)>
void BM_WarpPatch(benchmark::State& state) {
  const ImageSize size = square(state);
  RgbImage img(size);
  for (int y = 0; y < size.height; ++y)
    for (int x = 0; x < size.width; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = std::uint8_t((x * 7 + y * 13 + c * 31) & 0xff);
  const double s = size.width;
  const Polygon src{{0.1 * s, 0.1 * s}, {0.9 * s, 0.15 * s}, {0.85 * s, 0.9 * s}, {0.15 * s, 0.85 * s}};
  const Polygon dst{{0.05 * s, 0.2 * s}, {0.95 * s, 0.05 * s}, {0.9 * s, 0.95 * s}, {0.1 * s, 0.8 * s}};
  const Homography h = estimate_homography(src, dst);
  const RgbaImage crop = source_crop(img, src);
  for (auto _ : state) benchmark::DoNotOptimize(Warp(crop, convex_hull(dst), h, size));
}

}  // namespace

BENCHMARK(BM_Rasterize<rasterize>)->Name("rasterize/openmp")->Arg(128)->Arg(512)->Arg(1024)->UseRealTime();
BENCHMARK(BM_Rasterize<rasterize_reference>)->Name("rasterize/serial")->Arg(128)->Arg(512)->Arg(1024)->UseRealTime();
BENCHMARK(BM_WarpPatch<warp_patch>)->Name("warp_patch/openmp")->Arg(128)->Arg(512)->Arg(1024)->UseRealTime();
BENCHMARK(BM_WarpPatch<warp_patch_reference>)->Name("warp_patch/serial")->Arg(128)->Arg(512)->Arg(1024)->UseRealTime();

BENCHMARK_MAIN();
