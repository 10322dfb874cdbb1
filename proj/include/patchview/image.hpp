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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace patchview {

struct ImageSize {
  int width = 0;
  int height = 0;

  bool operator==(const ImageSize&) const = default;
  std::size_t pixel_count() const { return std::size_t(width) * std::size_t(height); }
};

/// Interleaved 8-bit image with a compile-time channel count, row-major.
template <int Channels>
class Image {
 public:
  static constexpr int kChannels = Channels;

  Image() = default;
  Image(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height),
        data_(std::size_t(width) * std::size_t(height) * Channels, fill) {}
  explicit Image(ImageSize size, std::uint8_t fill = 0) : Image(size.width, size.height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  ImageSize size() const { return {width_, height_}; }
  bool empty() const { return data_.empty(); }

  std::uint8_t* pixel(int x, int y) { return data_.data() + offset(x, y); }
  const std::uint8_t* pixel(int x, int y) const { return data_.data() + offset(x, y); }

  std::uint8_t& at(int x, int y, int c) { return data_[offset(x, y) + std::size_t(c)]; }
  std::uint8_t at(int x, int y, int c) const { return data_[offset(x, y) + std::size_t(c)]; }

  std::span<std::uint8_t> bytes() { return data_; }
  std::span<const std::uint8_t> bytes() const { return data_; }

  bool operator==(const Image&) const = default;

 private:
  std::size_t offset(int x, int y) const {
    return (std::size_t(y) * std::size_t(width_) + std::size_t(x)) * Channels;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

using RgbImage = Image<3>;
using RgbaImage = Image<4>;
using Mask = Image<1>;

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Background used for sketches, masked targets and completed renders.
inline constexpr Rgb kBackground{255, 255, 255};

RgbImage fill_image(ImageSize size, Rgb color);

/// Bilinear resize (pixel-center aligned). Returns a copy when sizes match.
RgbImage resize_bilinear(const RgbImage& image, ImageSize size);

RgbImage drop_alpha(const RgbaImage& image);

// PNG I/O. Encoding is deterministic: no timestamps or text chunks, fixed
// compression settings.
std::vector<std::uint8_t> encode_png(const RgbImage& image);
std::vector<std::uint8_t> encode_png(const RgbaImage& image);
std::vector<std::uint8_t> encode_png(const Mask& image);

void write_png(const std::filesystem::path& path, const RgbImage& image);
void write_png(const std::filesystem::path& path, const RgbaImage& image);
void write_png(const std::filesystem::path& path, const Mask& image);

/// Reads any 8-bit PNG and converts it to RGB (alpha dropped, gray expanded).
RgbImage read_png_rgb(const std::filesystem::path& path);
RgbaImage read_png_rgba(const std::filesystem::path& path);

}  // namespace patchview
