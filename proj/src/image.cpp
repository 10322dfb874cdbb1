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

#include "patchview/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "patchview/error.hpp"

namespace patchview {

RgbImage fill_image(ImageSize size, Rgb color) {
  RgbImage out(size);
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      auto* p = out.pixel(x, y);
      p[0] = color.r;
      p[1] = color.g;
      p[2] = color.b;
    }
  }
  return out;
}

RgbImage resize_bilinear(const RgbImage& image, ImageSize size) {
  if (image.size() == size) return image;
  if (image.empty() || size.width <= 0 || size.height <= 0) {
    throw Error("invalid_argument", "resize_bilinear: empty image or target size");
  }
  RgbImage out(size);
  const double sx = double(image.width()) / size.width;
  const double sy = double(image.height()) / size.height;
  for (int y = 0; y < size.height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, double(image.height() - 1));
    const int y0 = int(fy);
    const int y1 = std::min(y0 + 1, image.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < size.width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, double(image.width() - 1));
      const int x0 = int(fx);
      const int x1 = std::min(x0 + 1, image.width() - 1);
      const double wx = fx - x0;
      for (int c = 0; c < 3; ++c) {
        const double top = image.at(x0, y0, c) * (1 - wx) + image.at(x1, y0, c) * wx;
        const double bottom = image.at(x0, y1, c) * (1 - wx) + image.at(x1, y1, c) * wx;
        out.at(x, y, c) = std::uint8_t(std::lround(top * (1 - wy) + bottom * wy));
      }
    }
  }
  return out;
}

RgbImage drop_alpha(const RgbaImage& image) {
  RgbImage out(image.size());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      std::memcpy(out.pixel(x, y), image.pixel(x, y), 3);
    }
  }
  return out;
}

namespace {

template <int C>
std::vector<std::uint8_t> encode(const Image<C>& image, png_uint_32 format) {
  if (image.empty()) throw Error("invalid_argument", "encode_png: empty image");
  png_image desc;
  std::memset(&desc, 0, sizeof(desc));
  desc.version = PNG_IMAGE_VERSION;
  desc.width = png_uint_32(image.width());
  desc.height = png_uint_32(image.height());
  desc.format = format;

  png_alloc_size_t size = 0;
  const auto* pixels = image.bytes().data();
  if (!png_image_write_to_memory(&desc, nullptr, &size, 0, pixels, 0, nullptr)) {
    throw Error("png_error", std::string("png size query failed: ") + desc.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&desc, out.data(), &size, 0, pixels, 0, nullptr)) {
    throw Error("png_error", std::string("png encode failed: ") + desc.message);
  }
  out.resize(size);
  return out;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("io_error", "cannot open for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!f) throw Error("io_error", "write failed: " + path.string());
}

template <int C>
Image<C> decode(const std::filesystem::path& path, png_uint_32 format) {
  png_image desc;
  std::memset(&desc, 0, sizeof(desc));
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&desc, path.c_str())) {
    throw Error("png_error", "cannot read png " + path.string() + ": " + desc.message);
  }
  desc.format = format;
  Image<C> out(int(desc.width), int(desc.height));
  if (!png_image_finish_read(&desc, nullptr, out.bytes().data(), 0, nullptr)) {
    png_image_free(&desc);
    throw Error("png_error", "cannot decode png " + path.string() + ": " + desc.message);
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const RgbImage& image) { return encode(image, PNG_FORMAT_RGB); }
std::vector<std::uint8_t> encode_png(const RgbaImage& image) { return encode(image, PNG_FORMAT_RGBA); }
std::vector<std::uint8_t> encode_png(const Mask& image) { return encode(image, PNG_FORMAT_GRAY); }

void write_png(const std::filesystem::path& path, const RgbImage& image) {
  write_bytes(path, encode_png(image));
}
void write_png(const std::filesystem::path& path, const RgbaImage& image) {
  write_bytes(path, encode_png(image));
}
void write_png(const std::filesystem::path& path, const Mask& image) {
  write_bytes(path, encode_png(image));
}

RgbImage read_png_rgb(const std::filesystem::path& path) { return decode<3>(path, PNG_FORMAT_RGB); }
RgbaImage read_png_rgba(const std::filesystem::path& path) { return decode<4>(path, PNG_FORMAT_RGBA); }

}  // namespace patchview
