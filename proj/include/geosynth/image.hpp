#pragma once

// 8-bit RGB raster images, PNG encoding through libpng, square padding.

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "geosynth/error.hpp"

namespace geosynth {

struct Rgb {
  std::uint8_t r = 255, g = 255, b = 255;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB

  Image() = default;
  Image(int w, int h, Rgb fill = {}) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < pixels.size(); i += 3) {
      pixels[i] = fill.r;
      pixels[i + 1] = fill.g;
      pixels[i + 2] = fill.b;
    }
  }

  Rgb at(int x, int y) const {
    const auto i = index(x, y);
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }

  void set(int x, int y, Rgb c) {
    const auto i = index(x, y);
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
  }

  /// Alpha-composites `c` with coverage `alpha` in [0, 1].
  void blend(int x, int y, Rgb c, double alpha) {
    if (x < 0 || y < 0 || x >= width || y >= height || alpha <= 0.0) return;
    alpha = std::min(alpha, 1.0);
    const auto i = index(x, y);
    auto mix = [&](std::uint8_t dst, std::uint8_t src) {
      return static_cast<std::uint8_t>(std::lround(dst + (src - dst) * alpha));
    };
    pixels[i] = mix(pixels[i], c.r);
    pixels[i + 1] = mix(pixels[i + 1], c.g);
    pixels[i + 2] = mix(pixels[i + 2], c.b);
  }

 private:
  std::size_t index(int x, int y) const { return (static_cast<std::size_t>(y) * width + x) * 3; }
};

/// Pads to a square canvas of side max(width, height), original pixels
/// centred (offset rounded down), new area filled with `fill`.
inline Image pad_to_square(const Image& img, Rgb fill = {}) {
  const int side = std::max(img.width, img.height);
  if (img.width == side && img.height == side) return img;
  Image out(side, side, fill);
  const int ox = (side - img.width) / 2;
  const int oy = (side - img.height) / 2;
  for (int y = 0; y < img.height; ++y) {
    std::copy_n(img.pixels.begin() + static_cast<long>(y) * img.width * 3, img.width * 3,
                out.pixels.begin() + (static_cast<long>(y + oy) * side + ox) * 3);
  }
  return out;
}

inline std::vector<std::uint8_t> encode_png(const Image& img) {
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  desc.width = static_cast<png_uint_32>(img.width);
  desc.height = static_cast<png_uint_32>(img.height);
  desc.format = PNG_FORMAT_RGB;
  desc.flags = PNG_IMAGE_FLAG_FAST;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&desc, nullptr, &size, 0, img.pixels.data(), 0, nullptr)) {
    throw Error(Errc::Io, std::string("png encode: ") + desc.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&desc, out.data(), &size, 0, img.pixels.data(), 0, nullptr)) {
    throw Error(Errc::Io, std::string("png encode: ") + desc.message);
  }
  out.resize(size);
  return out;
}

inline Image decode_png(const std::vector<std::uint8_t>& bytes) {
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&desc, bytes.data(), bytes.size())) {
    throw Error(Errc::Io, std::string("png decode: ") + desc.message);
  }
  desc.format = PNG_FORMAT_RGB;
  Image img(static_cast<int>(desc.width), static_cast<int>(desc.height));
  if (!png_image_finish_read(&desc, nullptr, img.pixels.data(), 0, nullptr)) {
    png_image_free(&desc);
    throw Error(Errc::Io, std::string("png decode: ") + desc.message);
  }
  return img;
}

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw Error(Errc::Io, "short write to " + path.string());
}

inline void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  write_bytes(path, bytes.data(), bytes.size());
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  write_bytes(path, text.data(), text.size());
}

}  // namespace geosynth
