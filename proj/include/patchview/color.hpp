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

#include <vector>

#include "patchview/image.hpp"

namespace patchview {

/// CIELAB (D65 white point).
struct Lab {
  double l = 0, a = 0, b = 0;
};

Lab srgb_to_lab(const Rgb& rgb);
Rgb lab_to_srgb(const Lab& lab);

struct LabImage {
  ImageSize size;
  std::vector<Lab> pixels;
};

LabImage rgb_to_lab(const RgbImage& image);
RgbImage lab_to_rgb(const LabImage& image);

/// 8-bit storage encoding: L * 255 / 100, a + 128, b + 128 (rounded, clamped).
RgbImage encode_lab8(const LabImage& image);
LabImage decode_lab8(const RgbImage& image);

}  // namespace patchview
