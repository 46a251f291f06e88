#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "asda/capture/render.hpp"
#include "asda/core/rng.hpp"
#include "asda/img/image.hpp"

namespace asda::post {

constexpr double kMinBoxArea = 4.0;  // px^2; smaller boxes are dropped

// Maps every bbox through a forward point transform: corners -> hull -> clip.
inline void transform_boxes(FrameAnnotation& ann, int width, int height,
                            const std::function<void(double&, double&)>& forward) {
  std::vector<InstanceAnnotation> kept;
  for (InstanceAnnotation inst : ann.instances) {
    double xs[4] = {inst.x_min, inst.x_max, inst.x_min, inst.x_max};
    double ys[4] = {inst.y_min, inst.y_min, inst.y_max, inst.y_max};
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (int i = 0; i < 4; ++i) {
      forward(xs[i], ys[i]);
      x_min = std::min(x_min, xs[i]);
      x_max = std::max(x_max, xs[i]);
      y_min = std::min(y_min, ys[i]);
      y_max = std::max(y_max, ys[i]);
    }
    inst.x_min = std::max(0.0, x_min);
    inst.y_min = std::max(0.0, y_min);
    inst.x_max = std::min(double(width), x_max);
    inst.y_max = std::min(double(height), y_max);
    double w = inst.x_max - inst.x_min, h = inst.y_max - inst.y_min;
    if (w > 0 && h > 0 && w * h >= kMinBoxArea) kept.push_back(std::move(inst));
  }
  ann.instances = std::move(kept);
}

// Random rotation about the image center, bilinear resampled, edge-filled.
inline RasterImage aug_rotate(const RasterImage& img, FrameAnnotation& ann, double max_left_deg,
                              double max_right_deg, RngStream& rng,
                              double* angle_out = nullptr) {
  if (!(max_left_deg >= 0 && max_left_deg <= 45 && max_right_deg >= 0 && max_right_deg <= 45))
    throw Error(Errc::InvalidRange, "rotation limits must be in [0,45] degrees");
  double angle_deg = rng.uniform(-max_left_deg, max_right_deg);
  if (angle_out) *angle_out = angle_deg;
  double a = angle_deg * kPi / 180.0;
  double c = std::cos(a), s = std::sin(a);
  double cx = (img.width - 1) / 2.0, cy = (img.height - 1) / 2.0;

  RasterImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double dx = x - cx, dy = y - cy;
      double sx = c * dx + s * dy + cx;   // inverse rotation
      double sy = -s * dx + c * dy + cy;
      out.set(x, y, img.sample_bilinear(sx, sy));
    }

  double ccx = img.width / 2.0, ccy = img.height / 2.0;
  transform_boxes(ann, img.width, img.height, [&](double& px, double& py) {
    double dx = px - ccx, dy = py - ccy;
    double nx = c * dx - s * dy + ccx;
    double ny = s * dx + c * dy + ccy;
    px = nx;
    py = ny;
  });
  return out;
}

// Mirror along the chosen axis; 'either' lets the stream decide.
inline RasterImage aug_flip(const RasterImage& img, FrameAnnotation& ann,
                            const std::string& axis, RngStream& rng,
                            char* axis_out = nullptr) {
  char chosen;
  if (axis == "h") chosen = 'h';
  else if (axis == "v") chosen = 'v';
  else if (axis == "either") chosen = rng.bernoulli(0.5) ? 'h' : 'v';
  else throw Error(Errc::InvalidParams, "flip axis must be h, v or either");
  if (axis_out) *axis_out = chosen;

  RasterImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      int sx = chosen == 'h' ? img.width - 1 - x : x;
      int sy = chosen == 'v' ? img.height - 1 - y : y;
      std::size_t so = img.offset(sx, sy), o = out.offset(x, y);
      out.pixels[o] = img.pixels[so];
      out.pixels[o + 1] = img.pixels[so + 1];
      out.pixels[o + 2] = img.pixels[so + 2];
    }

  transform_boxes(ann, img.width, img.height, [&](double& px, double& py) {
    if (chosen == 'h') px = img.width - px;
    else py = img.height - py;
  });
  return out;
}

// One noise-filled rectangle; annotations untouched.
inline RasterImage aug_random_erasing(const RasterImage& img, FrameAnnotation&,
                                      double frac_lo, double frac_hi, RngStream& rng) {
  if (!(frac_lo > 0 && frac_hi <= 0.4 && frac_lo <= frac_hi))
    throw Error(Errc::InvalidRange, "erase area fraction range must lie in (0, 0.4]");
  double frac = rng.uniform(frac_lo, frac_hi);
  double aspect = rng.uniform(0.5, 2.0);
  double area_px = frac * img.width * img.height;
  int rw = std::max(1, int(std::lround(std::sqrt(area_px * aspect))));
  rw = std::min(rw, img.width);
  int rh = std::max(1, int(std::lround(area_px / rw)));
  rh = std::min(rh, img.height);
  int x0 = int(rng.uniform_int(0, img.width - rw));
  int y0 = int(rng.uniform_int(0, img.height - rh));

  RasterImage out = img;
  for (int y = y0; y < y0 + rh; ++y)
    for (int x = x0; x < x0 + rw; ++x)
      out.set(x, y, std::uint8_t(rng.uniform_int(0, 255)), std::uint8_t(rng.uniform_int(0, 255)),
              std::uint8_t(rng.uniform_int(0, 255)));
  return out;
}

// Center crop by 1/factor then resize back, boxes scaled about the center.
inline RasterImage aug_zoom(const RasterImage& img, FrameAnnotation& ann, double factor_lo,
                            double factor_hi, RngStream& rng, double* factor_out = nullptr) {
  if (!(factor_lo >= 1.0 && factor_hi <= 2.0 && factor_lo <= factor_hi))
    throw Error(Errc::InvalidRange, "zoom factor range must lie in [1, 2]");
  double f = rng.uniform(factor_lo, factor_hi);
  if (factor_out) *factor_out = f;
  double cx = (img.width - 1) / 2.0, cy = (img.height - 1) / 2.0;

  RasterImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      out.set(x, y, img.sample_bilinear(cx + (x - cx) / f, cy + (y - cy) / f));

  double ccx = img.width / 2.0, ccy = img.height / 2.0;
  transform_boxes(ann, img.width, img.height, [&](double& px, double& py) {
    px = ccx + (px - ccx) * f;
    py = ccy + (py - ccy) * f;
  });
  return out;
}

namespace detail {

// Bilinear displacement field over an n x n control lattice.
struct LatticeField {
  int n = 2;
  int width = 0, height = 0;
  std::vector<double> dx, dy;

  static LatticeField randomized(int n, int width, int height, double max_disp,
                                 RngStream& rng) {
    LatticeField f;
    f.n = n;
    f.width = width;
    f.height = height;
    f.dx.resize(std::size_t(n) * n);
    f.dy.resize(std::size_t(n) * n);
    for (std::size_t i = 0; i < f.dx.size(); ++i) {
      f.dx[i] = rng.uniform(-max_disp, max_disp);
      f.dy[i] = rng.uniform(-max_disp, max_disp);
    }
    return f;
  }

  void displacement(double x, double y, double& ox, double& oy) const {
    double gx = std::clamp(x / (width - 1.0), 0.0, 1.0) * (n - 1);
    double gy = std::clamp(y / (height - 1.0), 0.0, 1.0) * (n - 1);
    int ix = std::min(int(gx), n - 2), iy = std::min(int(gy), n - 2);
    double fx = gx - ix, fy = gy - iy;
    auto at = [&](const std::vector<double>& v, int i, int j) {
      return v[std::size_t(j) * n + i];
    };
    ox = (1 - fx) * (1 - fy) * at(dx, ix, iy) + fx * (1 - fy) * at(dx, ix + 1, iy) +
         (1 - fx) * fy * at(dx, ix, iy + 1) + fx * fy * at(dx, ix + 1, iy + 1);
    oy = (1 - fx) * (1 - fy) * at(dy, ix, iy) + fx * (1 - fy) * at(dy, ix + 1, iy) +
         (1 - fx) * fy * at(dy, ix, iy + 1) + fx * fy * at(dy, ix + 1, iy + 1);
  }

  // forward warp: p -> p + D(p)
  void forward(double& x, double& y) const {
    double ox, oy;
    displacement(x, y, ox, oy);
    x += ox;
    y += oy;
  }

  // inverse by fixed-point iteration; |D| is small so this converges fast
  void inverse(double qx, double qy, double& px, double& py) const {
    px = qx;
    py = qy;
    for (int it = 0; it < 6; ++it) {
      double ox, oy;
      displacement(px, py, ox, oy);
      px = qx - ox;
      py = qy - oy;
    }
  }
};

}  // namespace detail

// Lattice warp: control nodes displaced uniformly, image warped through the
// interpolated field, boxes mapped through the forward warp of their corners.
inline RasterImage aug_grid_distortion(const RasterImage& img, FrameAnnotation& ann, int grid_n,
                                       double max_disp, RngStream& rng,
                                       detail::LatticeField* field_out = nullptr) {
  if (grid_n < 2) throw Error(Errc::InvalidRange, "grid size must be >= 2");
  if (!(max_disp >= 0) || max_disp > 0.1 * std::min(img.width, img.height))
    throw Error(Errc::InvalidRange, "max displacement above 10% of the min dimension");
  detail::LatticeField field =
      detail::LatticeField::randomized(grid_n, img.width, img.height, max_disp, rng);
  if (field_out) *field_out = field;

  RasterImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double sx, sy;
      field.inverse(x, y, sx, sy);
      out.set(x, y, img.sample_bilinear(sx, sy));
    }

  transform_boxes(ann, img.width, img.height,
                  [&](double& px, double& py) { field.forward(px, py); });
  return out;
}

namespace detail {

inline double lattice_value(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
  std::uint64_t h = mix64(seed ^ mix64(std::uint64_t(ix) * 0x9e3779b97f4a7c15ULL ^
                                       std::uint64_t(iy) + 0x517cc1b727220a95ULL));
  return double(h >> 11) * 0x1.0p-53;
}

inline double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

inline double value_noise(double x, double y, std::uint64_t seed) {
  double fx = std::floor(x), fy = std::floor(y);
  std::int64_t ix = std::int64_t(fx), iy = std::int64_t(fy);
  double tx = smoothstep(x - fx), ty = smoothstep(y - fy);
  double v00 = lattice_value(ix, iy, seed), v10 = lattice_value(ix + 1, iy, seed);
  double v01 = lattice_value(ix, iy + 1, seed), v11 = lattice_value(ix + 1, iy + 1, seed);
  return (v00 * (1 - tx) + v10 * tx) * (1 - ty) + (v01 * (1 - tx) + v11 * tx) * ty;
}

// 4 octaves, persistence 0.5, base frequency 4 cells across the image.
inline double fbm_noise(double u, double v, std::uint64_t seed) {
  double total = 0, amp = 1, norm = 0, freq = 4.0;
  for (int o = 0; o < 4; ++o) {
    total += amp * value_noise(u * freq, v * freq, seed + std::uint64_t(o) * 0x9e3779b9ULL);
    norm += amp;
    amp *= 0.5;
    freq *= 2.0;
  }
  return total / norm;
}

}  // namespace detail

using EffectFn = std::function<RasterImage(const RasterImage&, double intensity, RngStream&)>;

// Procedural cloud layer blended toward white; replicates low-visibility
// situations that are too expensive to render in 3D.
inline RasterImage effect_visibility(const RasterImage& img, double intensity, RngStream& rng) {
  std::uint64_t seed = rng.next_u64();
  RasterImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double a = intensity * detail::fbm_noise(double(x) / img.width, double(y) / img.height, seed);
      Vec3 c = img.get(x, y);
      out.set(x, y, c * (1.0 - a) + Vec3{1, 1, 1} * a);
    }
  return out;
}

inline std::map<std::string, EffectFn>& effect_registry() {
  static std::map<std::string, EffectFn> reg{{"visibility", effect_visibility}};
  return reg;
}

inline RasterImage aug_add_effect(const RasterImage& img, FrameAnnotation&,
                                  const std::string& effect_name, double intensity,
                                  RngStream& rng) {
  if (!(intensity >= 0 && intensity <= 1))
    throw Error(Errc::InvalidRange, "intensity must be in [0,1]");
  auto it = effect_registry().find(effect_name);
  if (it == effect_registry().end())
    throw Error(Errc::UnknownEffect, "effect '" + effect_name + "' is not registered");
  return it->second(img, intensity, rng);
}

}  // namespace asda::post
