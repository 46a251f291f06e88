#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "asda/capture/camera.hpp"
#include "asda/core/rng.hpp"
#include "asda/img/image.hpp"
#include "asda/scene/augmented.hpp"

namespace asda {

struct InstanceAnnotation {
  std::string class_name;
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;  // pixels, clipped
  double visibility = 0.0;  // fraction of depth-test wins over a sampling grid
  Vec3 position, rotation, scale;
};

struct FrameAnnotation {
  std::string scene_id;
  int variation_index = 0;
  int frame_index = 0;
  std::string weather;
  double weather_intensity = 0.0;
  double time_of_day = 12.0;
  double ambient_level = 0.7;
  int spotlight_count = 0;
  std::vector<InstanceAnnotation> instances;
};

namespace render_detail {

constexpr double kNearPlane = 0.05;
constexpr double kSpotFalloffDistance = 10.0;  // inverse-square scale, meters
constexpr double kNightAmbient = 0.15;
constexpr int kVisibilityGrid = 8;

struct LightEnv {
  double ambient = 0.7;
  Vec3 sun_dir{0, 1, 0};
  double sun_intensity = 0.0;
  const std::vector<Spotlight>* spotlights = nullptr;
};

// Sun elevation follows time of day: rises at 6, peaks at 12, sets at 18.
inline LightEnv make_light_env(const GlobalState& g) {
  LightEnv env;
  env.spotlights = &g.spotlights;
  double arc = kPi * (g.time_of_day - 6.0) / 12.0;
  double elevation = std::sin(arc);
  if (g.time_of_day >= 6.0 && g.time_of_day <= 18.0 && elevation > 0.0) {
    env.sun_intensity = elevation;
    env.sun_dir = Vec3{std::cos(arc), elevation, 0.0}.normalized();
    env.ambient = g.ambient_level;
  } else {
    env.sun_intensity = 0.0;
    env.ambient = std::max(g.ambient_level, kNightAmbient);
  }
  return env;
}

inline Vec3 shade_face(const Material& material, const Vec3& normal, const Vec3& center,
                       const LightEnv& env) {
  double light = env.ambient;
  if (env.sun_intensity > 0)
    light += env.sun_intensity * std::max(0.0, normal.dot(env.sun_dir));
  if (env.spotlights)
    for (const Spotlight& s : *env.spotlights) {
      Vec3 to_light = s.position - center;
      double d2 = to_light.dot(to_light);
      double k = kSpotFalloffDistance * kSpotFalloffDistance /
                 (kSpotFalloffDistance * kSpotFalloffDistance + d2);
      light += s.intensity * k * std::max(0.0, normal.dot(to_light.normalized()));
    }
  return material.rgb * std::min(1.0, light);
}

struct RenderBox {
  Affine transform;
  Aabb local;
  Material material;
};

// Everything renders as an oriented box.
inline std::vector<RenderBox> assemble_boxes(const AugmentedScene& scene,
                                             const std::vector<AssetInstance>& extra) {
  std::vector<RenderBox> boxes;
  const SceneSpecification& spec = *scene.base;
  for (const BaseBox& b : spec.base_boxes)
    boxes.push_back({Affine::identity(), b.aabb, b.material});
  if (spec.graph) {
    for (const std::string& id : spec.graph->preorder()) {
      const SceneNode& n = spec.graph->node(id);
      if (n.semantic_class == "world") continue;
      if (!(n.aabb.extent().norm() > 0)) continue;
      WorldTransform wt = world_transform(*spec.graph, id);
      Material m = n.material ? *n.material : Material{};
      boxes.push_back({wt.affine, n.aabb, m});
    }
  }
  auto add_instance = [&](const AssetInstance& inst) {
    const AssetPrototype* proto = spec.find_asset(inst.prototype);
    if (!proto) return;
    boxes.push_back({instance_transform(inst), proto->aabb, inst.material});
  };
  for (const AssetInstance& inst : scene.instances) add_instance(inst);
  for (const AssetInstance& inst : extra) add_instance(inst);
  return boxes;
}

struct CamVertex {
  Vec3 p;  // camera space
};

// Rasterizes one camera-space triangle with a z depth test.
inline void raster_triangle(const CameraIntrinsics& cam, const Vec3& a, const Vec3& b,
                            const Vec3& c, const Vec3& color, RasterImage& img,
                            std::vector<double>& zbuf) {
  double f = cam.focal_px();
  auto to_screen = [&](const Vec3& v) {
    double depth = -v.z;
    return Vec3{cam.width / 2.0 + (v.x / depth) * f, cam.height / 2.0 - (v.y / depth) * f,
                1.0 / depth};
  };
  Vec3 s0 = to_screen(a), s1 = to_screen(b), s2 = to_screen(c);

  double area = (s1.x - s0.x) * (s2.y - s0.y) - (s2.x - s0.x) * (s1.y - s0.y);
  if (area == 0) return;

  int min_x = std::max(0, int(std::floor(std::min({s0.x, s1.x, s2.x}))));
  int max_x = std::min(cam.width - 1, int(std::ceil(std::max({s0.x, s1.x, s2.x}))));
  int min_y = std::max(0, int(std::floor(std::min({s0.y, s1.y, s2.y}))));
  int max_y = std::min(cam.height - 1, int(std::ceil(std::max({s0.y, s1.y, s2.y}))));
  if (min_x > max_x || min_y > max_y) return;

  std::uint8_t r8 = RasterImage::quantize(color.x);
  std::uint8_t g8 = RasterImage::quantize(color.y);
  std::uint8_t b8 = RasterImage::quantize(color.z);

  for (int y = min_y; y <= max_y; ++y)
    for (int x = min_x; x <= max_x; ++x) {
      double px = x + 0.5, py = y + 0.5;
      double w0 = (s1.x - s0.x) * (py - s0.y) - (px - s0.x) * (s1.y - s0.y);
      double w1 = (s2.x - s1.x) * (py - s1.y) - (px - s1.x) * (s2.y - s1.y);
      double w2 = (s0.x - s2.x) * (py - s2.y) - (px - s2.x) * (s0.y - s2.y);
      bool inside = area > 0 ? (w0 >= 0 && w1 >= 0 && w2 >= 0)
                             : (w0 <= 0 && w1 <= 0 && w2 <= 0);
      if (!inside) continue;
      double l1 = w2 / area, l2 = w0 / area;
      double l0 = 1.0 - l1 - l2;
      double inv_depth = l0 * s0.z + l1 * s1.z + l2 * s2.z;
      if (inv_depth <= 0) continue;
      double depth = 1.0 / inv_depth;
      std::size_t idx = std::size_t(y) * cam.width + x;
      if (depth < zbuf[idx]) {
        zbuf[idx] = depth;
        img.set(x, y, r8, g8, b8);
      }
    }
}

// Clips a camera-space polygon against the near plane (z <= -near).
inline std::vector<Vec3> clip_near(const std::vector<Vec3>& poly) {
  std::vector<Vec3> out;
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& cur = poly[i];
    const Vec3& nxt = poly[(i + 1) % n];
    bool cur_in = cur.z <= -kNearPlane;
    bool nxt_in = nxt.z <= -kNearPlane;
    if (cur_in) out.push_back(cur);
    if (cur_in != nxt_in) {
      double t = (-kNearPlane - cur.z) / (nxt.z - cur.z);
      out.push_back(cur + (nxt - cur) * t);
    }
  }
  return out;
}

inline void raster_box(const CameraIntrinsics& cam, const TrajectoryPose& pose,
                       const RenderBox& box, const LightEnv& env, RasterImage& img,
                       std::vector<double>& zbuf) {
  static const int faces[6][4] = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1},
                                  {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
  auto corners = box.local.corners();
  std::array<Vec3, 8> world;
  for (int i = 0; i < 8; ++i) world[i] = box.transform.apply(corners[i]);
  Vec3 box_center = box.transform.apply(box.local.center());

  Mat3 world_to_cam = camera_rotation(pose).transposed();

  for (const auto& face : faces) {
    Vec3 a = world[face[0]], b = world[face[1]], c = world[face[2]], d = world[face[3]];
    Vec3 normal = (b - a).cross(c - a);
    double nn = normal.norm();
    if (nn <= 0) continue;
    normal = normal / nn;
    Vec3 face_center = (a + b + c + d) * 0.25;
    if (normal.dot(face_center - box_center) < 0) normal = -normal;
    if (normal.dot(pose.position - face_center) <= 0) continue;  // back face

    Vec3 color = shade_face(box.material, normal, face_center, env);
    std::vector<Vec3> cam_poly;
    for (const Vec3& w : std::array<Vec3, 4>{a, b, c, d})
      cam_poly.push_back(world_to_cam * (w - pose.position));
    std::vector<Vec3> clipped = clip_near(cam_poly);
    for (std::size_t i = 2; i < clipped.size(); ++i)
      raster_triangle(cam, clipped[0], clipped[i - 1], clipped[i], color, img, zbuf);
  }
}

// Slab-test a world ray against an oriented box; returns entry t or nothing.
inline std::optional<double> ray_box(const Vec3& origin, const Vec3& dir, const RenderBox& box) {
  Affine inv = box.transform.inverse();
  Vec3 o = inv.apply(origin);
  Vec3 d = inv.linear * dir;
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
  const Vec3& lo = box.local.min;
  const Vec3& hi = box.local.max;
  for (int axis = 0; axis < 3; ++axis) {
    double od = axis == 0 ? o.x : (axis == 1 ? o.y : o.z);
    double dd = axis == 0 ? d.x : (axis == 1 ? d.y : d.z);
    double l = axis == 0 ? lo.x : (axis == 1 ? lo.y : lo.z);
    double h = axis == 0 ? hi.x : (axis == 1 ? hi.y : hi.z);
    if (std::abs(dd) < 1e-15) {
      if (od < l || od > h) return std::nullopt;
      continue;
    }
    double t0 = (l - od) / dd, t1 = (h - od) / dd;
    if (t0 > t1) std::swap(t0, t1);
    t_min = std::max(t_min, t0);
    t_max = std::min(t_max, t1);
    if (t_min > t_max) return std::nullopt;
  }
  if (t_max < kNearPlane) return std::nullopt;
  return std::max(t_min, kNearPlane);
}

}  // namespace render_detail

struct RenderedFrame {
  RasterImage image;
  FrameAnnotation annotation;
};

// Depth-buffered flat-shaded rasterization of the scene plus any per-frame
// extra instances (deferred FOV obstacles).
inline RenderedFrame render_frame(const AugmentedScene& scene, const TrajectoryPose& pose,
                                  const CameraIntrinsics& cam,
                                  const std::vector<AssetInstance>& extra = {}) {
  using namespace render_detail;
  cam.validate();

  RenderedFrame out;
  out.image = RasterImage(cam.width, cam.height);
  out.annotation.scene_id = scene.scene_id;
  out.annotation.variation_index = scene.variation_index;
  out.annotation.frame_index = pose.frame_index;
  out.annotation.weather = weather_name(scene.global.weather);
  out.annotation.weather_intensity = scene.global.weather_intensity;
  out.annotation.time_of_day = scene.global.time_of_day;
  out.annotation.ambient_level = scene.global.ambient_level;
  out.annotation.spotlight_count = int(scene.global.spotlights.size());

  LightEnv env = make_light_env(scene.global);

  // horizon-gradient background scaled by the light level
  double sky_level = std::min(1.0, 0.2 + 0.8 * env.sun_intensity + 0.2 * env.ambient);
  Vec3 sky_top = Vec3{0.35, 0.55, 0.85} * sky_level;
  Vec3 sky_bottom = Vec3{0.75, 0.80, 0.90} * sky_level;
  for (int y = 0; y < cam.height; ++y) {
    double t = cam.height > 1 ? double(y) / (cam.height - 1) : 0.0;
    Vec3 c = sky_top * (1 - t) + sky_bottom * t;
    for (int x = 0; x < cam.width; ++x) out.image.set(x, y, c);
  }

  std::vector<double> zbuf(std::size_t(cam.width) * cam.height,
                           std::numeric_limits<double>::infinity());
  std::vector<RenderBox> boxes = assemble_boxes(scene, extra);
  for (const RenderBox& box : boxes) raster_box(cam, pose, box, env, out.image, zbuf);

  // annotations for main instances
  const SceneSpecification& spec = *scene.base;
  Mat3 cam_to_world = camera_rotation(pose);
  double f = cam.focal_px();
  for (const AssetInstance& inst : scene.instances) {
    if (inst.role != InstanceRole::Main) continue;
    const AssetPrototype* proto = spec.find_asset(inst.prototype);
    if (!proto) continue;
    RenderBox box{instance_transform(inst), proto->aabb, inst.material};

    // projected hull of corners, with edges clipped to the near plane
    auto corners = proto->aabb.corners();
    std::array<Vec3, 8> world;
    for (int i = 0; i < 8; ++i) world[i] = box.transform.apply(corners[i]);
    static const int edges[12][2] = {{0, 1}, {1, 3}, {3, 2}, {2, 0}, {4, 5}, {5, 7},
                                     {7, 6}, {6, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
    std::vector<Vec3> points;
    Mat3 world_to_cam = cam_to_world.transposed();
    std::array<Vec3, 8> cam_pts;
    for (int i = 0; i < 8; ++i) cam_pts[i] = world_to_cam * (world[i] - pose.position);
    for (int i = 0; i < 8; ++i)
      if (cam_pts[i].z <= -kNearPlane) points.push_back(cam_pts[i]);
    for (const auto& e : edges) {
      const Vec3& p0 = cam_pts[e[0]];
      const Vec3& p1 = cam_pts[e[1]];
      bool in0 = p0.z <= -kNearPlane, in1 = p1.z <= -kNearPlane;
      if (in0 != in1) {
        double t = (-kNearPlane - p0.z) / (p1.z - p0.z);
        points.push_back(p0 + (p1 - p0) * t);
      }
    }
    if (points.empty()) continue;

    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const Vec3& pc : points) {
      double depth = -pc.z;
      double px = cam.width / 2.0 + (pc.x / depth) * f;
      double py = cam.height / 2.0 - (pc.y / depth) * f;
      x_min = std::min(x_min, px);
      x_max = std::max(x_max, px);
      y_min = std::min(y_min, py);
      y_max = std::max(y_max, py);
    }
    x_min = std::max(0.0, x_min);
    y_min = std::max(0.0, y_min);
    x_max = std::min(double(cam.width), x_max);
    y_max = std::min(double(cam.height), y_max);
    if (!(x_max > x_min && y_max > y_min)) continue;

    // depth-test wins over a sampling grid inside the bbox
    int hits = 0, wins = 0;
    for (int gy = 0; gy < kVisibilityGrid; ++gy)
      for (int gx = 0; gx < kVisibilityGrid; ++gx) {
        double px = x_min + (x_max - x_min) * (gx + 0.5) / kVisibilityGrid;
        double py = y_min + (y_max - y_min) * (gy + 0.5) / kVisibilityGrid;
        Vec3 dir_cam{(px - cam.width / 2.0) / f, (cam.height / 2.0 - py) / f, -1.0};
        Vec3 dir = cam_to_world * dir_cam;
        auto t = ray_box(pose.position, dir, box);
        if (!t) continue;
        ++hits;
        int ix = std::clamp(int(px), 0, cam.width - 1);
        int iy = std::clamp(int(py), 0, cam.height - 1);
        double buffered = zbuf[std::size_t(iy) * cam.width + ix];
        if (*t <= buffered * (1.0 + 1e-3) + 1e-6) ++wins;
      }
    if (hits == 0 || wins == 0) continue;

    InstanceAnnotation ann;
    ann.class_name = inst.prototype;
    ann.x_min = x_min;
    ann.y_min = y_min;
    ann.x_max = x_max;
    ann.y_max = y_max;
    ann.visibility = double(wins) / hits;
    ann.position = inst.position;
    ann.rotation = inst.rotation;
    ann.scale = inst.scale;
    out.annotation.instances.push_back(std::move(ann));
  }

  // weather grading on the final buffer
  double wi = scene.global.weather_intensity;
  if (scene.global.weather == Weather::Rain && wi > 0) {
    for (std::size_t i = 0; i + 2 < out.image.pixels.size(); i += 3) {
      double scale = 1.0 - 0.3 * wi;
      double r = out.image.pixels[i] * scale;
      double g = out.image.pixels[i + 1] * scale;
      double b = out.image.pixels[i + 2] * scale + 0.08 * wi * 255.0;
      out.image.pixels[i] = RasterImage::quantize(r / 255.0);
      out.image.pixels[i + 1] = RasterImage::quantize(g / 255.0);
      out.image.pixels[i + 2] = RasterImage::quantize(b / 255.0);
    }
  } else if (scene.global.weather == Weather::Snow && wi > 0) {
    // lighten the background (pixels no geometry reached)
    double a = 0.5 * wi;
    for (int y = 0; y < cam.height; ++y)
      for (int x = 0; x < cam.width; ++x) {
        if (std::isfinite(zbuf[std::size_t(y) * cam.width + x])) continue;
        Vec3 c = out.image.get(x, y);
        out.image.set(x, y, c * (1 - a) + Vec3{1, 1, 1} * a);
      }
  }

  return out;
}

// Per-frame resolution of deferred FOV rules: each rule may spawn one
// obstacle inside the camera cone for this frame only.
struct FovSpawn {
  int frame_index = 0;
  std::string obstacle_asset;
  Vec3 position;
};

inline std::vector<AssetInstance> resolve_fov_obstacles(const AugmentedScene& scene,
                                                        const TrajectoryPose& pose,
                                                        const CameraIntrinsics& cam,
                                                        std::vector<FovSpawn>* log = nullptr) {
  std::vector<AssetInstance> extra;
  for (const FovRule& rule : scene.deferred_fov_rules) {
    RngStream rng(derive_seed(rule.seed, std::uint64_t(pose.frame_index)));
    if (!(rng.uniform() < rule.probability)) continue;
    const AssetPrototype* proto = scene.base->find_asset(rule.obstacle_asset);
    if (!proto) continue;

    double d = rng.uniform(rule.d_min, rule.d_max);
    // stay inside both FOV half-angles so the spawn projects on screen
    double half = rule.cone_margin * std::min(cam.hfov, cam.vfov()) / 2.0;
    double cos_half = std::cos(half);
    double cos_t = rng.uniform(cos_half, 1.0);
    double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    double phi = rng.uniform(0.0, 2.0 * kPi);
    Vec3 dir_cam{sin_t * std::cos(phi), sin_t * std::sin(phi), -cos_t};
    Vec3 dir = camera_rotation(pose) * dir_cam;

    AssetInstance inst;
    inst.prototype = rule.obstacle_asset;
    inst.position = pose.position + dir * d;
    auto it = scene.variants.find(rule.obstacle_asset);
    if (it != scene.variants.end() && !it->second.empty()) {
      std::size_t vi = std::size_t(rng.uniform_int(0, std::int64_t(it->second.size()) - 1));
      const AssetVariant& v = it->second[vi];
      inst.rotation = v.rotation;
      inst.scale = v.scale;
      inst.material = v.material;
      inst.variant_index = int(vi);
    } else {
      inst.rotation = {0, rng.uniform(0, 2 * kPi), 0};
      inst.material = proto->default_material;
    }
    inst.role = InstanceRole::Obstacle;
    if (log) log->push_back({pose.frame_index, rule.obstacle_asset, inst.position});
    extra.push_back(std::move(inst));
  }
  return extra;
}

}  // namespace asda
