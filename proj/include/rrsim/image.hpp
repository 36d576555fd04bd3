#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rrsim {

// Row-major 32-bit integer pixel buffer. Pixels are signed 32-bit so filter
// results are bit-stable; out-of-range reads replicate the nearest interior
// pixel (the 1-pixel halo policy used by the stencils).
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> px;

  Image() = default;
  Image(int w, int h) : width(w), height(h), px(static_cast<std::size_t>(w) * h, 0) {}

  std::int32_t& at(int r, int c) { return px[static_cast<std::size_t>(r) * width + c]; }
  std::int32_t at(int r, int c) const { return px[static_cast<std::size_t>(r) * width + c]; }

  std::int32_t clamped(int r, int c) const {
    if (r < 0) r = 0;
    if (r >= height) r = height - 1;
    if (c < 0) c = 0;
    if (c >= width) c = width - 1;
    return at(r, c);
  }

  friend bool operator==(const Image&, const Image&) = default;
};

// Deterministic Tausworthe-filled image; pixel words are taken verbatim from
// the stream, so values span the full signed 32-bit range.
Image taus_image(int width, int height, std::uint32_t seed);

// Flat binary format: 8-byte header (width, height as little-endian int32)
// followed by row-major little-endian int32 pixels.
void write_image(const std::string& path, const Image& img);
Image read_image(const std::string& path);

}  // namespace rrsim
