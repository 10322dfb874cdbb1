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

#include "patchview/color.hpp"

#include <algorithm>
#include <cmath>

#include "patchview/error.hpp"

namespace patchview {

namespace {

// D65 reference white.
constexpr double kXn = 0.95047, kYn = 1.0, kZn = 1.08883;
constexpr double kDelta = 6.0 / 29.0;

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) {
  return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_inv(double t) { return t > kDelta ? t * t * t : 3 * kDelta * kDelta * (t - 4.0 / 29.0); }

std::uint8_t to_byte(double v) { return std::uint8_t(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

Lab srgb_to_lab(const Rgb& rgb) {
  const double r = srgb_to_linear(rgb.r / 255.0);
  const double g = srgb_to_linear(rgb.g / 255.0);
  const double b = srgb_to_linear(rgb.b / 255.0);
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  const double fx = lab_f(x / kXn), fy = lab_f(y / kYn), fz = lab_f(z / kZn);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Rgb lab_to_srgb(const Lab& lab) {
  const double fy = (lab.l + 16.0) / 116.0;
  const double x = kXn * lab_f_inv(fy + lab.a / 500.0);
  const double y = kYn * lab_f_inv(fy);
  const double z = kZn * lab_f_inv(fy - lab.b / 200.0);
  const double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
  const double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
  const double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
  const auto enc = [](double c) { return to_byte(255.0 * linear_to_srgb(std::clamp(c, 0.0, 1.0))); };
  return {enc(r), enc(g), enc(b)};
}

LabImage rgb_to_lab(const RgbImage& image) {
  LabImage out;
  out.size = image.size();
  out.pixels.reserve(image.size().pixel_count());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x) {
      const auto* p = image.pixel(x, y);
      out.pixels.push_back(srgb_to_lab({p[0], p[1], p[2]}));
    }
  return out;
}

RgbImage lab_to_rgb(const LabImage& image) {
  if (image.pixels.size() != image.size.pixel_count()) throw Error("invalid_argument", "malformed LAB image");
  RgbImage out(image.size);
  std::size_t i = 0;
  for (int y = 0; y < image.size.height; ++y)
    for (int x = 0; x < image.size.width; ++x) {
      const Rgb c = lab_to_srgb(image.pixels[i++]);
      auto* p = out.pixel(x, y);
      p[0] = c.r;
      p[1] = c.g;
      p[2] = c.b;
    }
  return out;
}

RgbImage encode_lab8(const LabImage& image) {
  if (image.pixels.size() != image.size.pixel_count()) throw Error("invalid_argument", "malformed LAB image");
  RgbImage out(image.size);
  std::size_t i = 0;
  for (int y = 0; y < image.size.height; ++y)
    for (int x = 0; x < image.size.width; ++x) {
      const Lab& v = image.pixels[i++];
      auto* p = out.pixel(x, y);
      p[0] = to_byte(v.l * 255.0 / 100.0);
      p[1] = to_byte(v.a + 128.0);
      p[2] = to_byte(v.b + 128.0);
    }
  return out;
}

LabImage decode_lab8(const RgbImage& image) {
  LabImage out;
  out.size = image.size();
  out.pixels.reserve(image.size().pixel_count());
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x) {
      const auto* p = image.pixel(x, y);
      out.pixels.push_back({p[0] * 100.0 / 255.0, p[1] - 128.0, p[2] - 128.0});
    }
  return out;
}

}  // namespace patchview
