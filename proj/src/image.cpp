#include "rrsim/image.hpp"

#include <cstdio>
#include <memory>
#include <stdexcept>

#include "rrsim/taus.hpp"

namespace rrsim {

namespace {

void put_i32_le(std::FILE* f, std::int32_t v) {
  unsigned char b[4];
  std::uint32_t u = static_cast<std::uint32_t>(v);
  b[0] = static_cast<unsigned char>(u & 0xFF);
  b[1] = static_cast<unsigned char>((u >> 8) & 0xFF);
  b[2] = static_cast<unsigned char>((u >> 16) & 0xFF);
  b[3] = static_cast<unsigned char>((u >> 24) & 0xFF);
  if (std::fwrite(b, 1, 4, f) != 4) {
    throw std::runtime_error("image write failed");
  }
}

std::int32_t get_i32_le(std::FILE* f) {
  unsigned char b[4];
  if (std::fread(b, 1, 4, f) != 4) {
    throw std::runtime_error("image read failed: truncated file");
  }
  std::uint32_t u = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                    (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  return static_cast<std::int32_t>(u);
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Image taus_image(int width, int height, std::uint32_t seed) {
  Image img(width, height);
  TausStream stream(seed);
  for (auto& p : img.px) {
    p = static_cast<std::int32_t>(stream.next());
  }
  return img;
}

void write_image(const std::string& path, const Image& img) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) {
    throw std::runtime_error("image write failed: cannot open " + path);
  }
  put_i32_le(f.get(), img.width);
  put_i32_le(f.get(), img.height);
  for (std::int32_t p : img.px) {
    put_i32_le(f.get(), p);
  }
}

Image read_image(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) {
    throw std::runtime_error("image read failed: cannot open " + path);
  }
  int w = get_i32_le(f.get());
  int h = get_i32_le(f.get());
  if (w < 0 || h < 0) {
    throw std::runtime_error("image read failed: negative dimensions in header");
  }
  Image img(w, h);
  for (auto& p : img.px) {
    p = get_i32_le(f.get());
  }
  return img;
}

}  // namespace rrsim
