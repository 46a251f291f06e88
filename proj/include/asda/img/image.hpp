#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "asda/core/error.hpp"
#include "asda/core/vec3.hpp"

namespace asda {

// Row-major RGB, 8 bits per channel.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RasterImage() = default;
  RasterImage(int w, int h) : width(w), height(h), pixels(std::size_t(w) * h * 3, 0) {}

  std::size_t offset(int x, int y) const { return (std::size_t(y) * width + x) * 3; }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    std::size_t o = offset(x, y);
    pixels[o] = r;
    pixels[o + 1] = g;
    pixels[o + 2] = b;
  }
  void set(int x, int y, const Vec3& rgb) {
    set(x, y, quantize(rgb.x), quantize(rgb.y), quantize(rgb.z));
  }
  Vec3 get(int x, int y) const {
    std::size_t o = offset(x, y);
    return {pixels[o] / 255.0, pixels[o + 1] / 255.0, pixels[o + 2] / 255.0};
  }

  static std::uint8_t quantize(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return std::uint8_t(std::lround(v * 255.0));
  }

  bool operator==(const RasterImage& o) const {
    return width == o.width && height == o.height && pixels == o.pixels;
  }

  double mean_luminance() const {
    double acc = 0;
    for (std::size_t i = 0; i + 2 < pixels.size(); i += 3)
      acc += 0.2126 * pixels[i] + 0.7152 * pixels[i + 1] + 0.0722 * pixels[i + 2];
    std::size_t n = pixels.size() / 3;
    return n ? acc / double(n) : 0.0;
  }

  // Bilinear sample at continuous pixel coordinates, clamped to the edge.
  Vec3 sample_bilinear(double x, double y) const {
    double fx = std::floor(x), fy = std::floor(y);
    double ax = x - fx, ay = y - fy;
    int x0 = std::clamp(int(fx), 0, width - 1);
    int y0 = std::clamp(int(fy), 0, height - 1);
    int x1 = std::clamp(x0 + 1, 0, width - 1);
    int y1 = std::clamp(y0 + 1, 0, height - 1);
    Vec3 c00 = get(x0, y0), c10 = get(x1, y0), c01 = get(x0, y1), c11 = get(x1, y1);
    Vec3 top = c00 * (1 - ax) + c10 * ax;
    Vec3 bot = c01 * (1 - ax) + c11 * ax;
    return top * (1 - ay) + bot * ay;
  }
};

inline void write_ppm(const std::filesystem::path& path, const RasterImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path.string() + "'");
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            std::streamsize(img.pixels.size()));
  if (!out) throw Error(Errc::IoError, "short write to '" + path.string() + "'");
}

inline RasterImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read '" + path.string() + "'");
  std::string magic;
  in >> magic;
  if (magic != "P6") throw Error(Errc::IoError, "not a P6 PPM: '" + path.string() + "'");
  int w = 0, h = 0, maxval = 0;
  in >> w >> h >> maxval;
  if (w <= 0 || h <= 0 || maxval != 255)
    throw Error(Errc::IoError, "unsupported PPM header in '" + path.string() + "'");
  in.get();  // single whitespace after header
  RasterImage img(w, h);
  in.read(reinterpret_cast<char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
  if (!in) throw Error(Errc::IoError, "truncated PPM '" + path.string() + "'");
  return img;
}

}  // namespace asda
