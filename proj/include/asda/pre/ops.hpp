#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "asda/dist/geodata.hpp"
#include "asda/dist/sampling.hpp"
#include "asda/pre/pipeline.hpp"

namespace asda {
namespace ops {

// Default distribution ranges; every one is overridable per op invocation.
namespace defaults {
constexpr double kRotationLo = 0.0, kRotationHi = 2.0 * kPi;
constexpr double kScaleLo = 0.5, kScaleHi = 2.0;
constexpr double kShadowRadiusLoFactor = 1.5, kShadowRadiusHiFactor = 5.0;
constexpr double kSpotIntensityLo = 0.5, kSpotIntensityHi = 1.0;
constexpr double kFovDistanceLo = 2.0, kFovDistanceHi = 30.0;
constexpr double kFovConeMargin = 0.8;
constexpr double kStandoffLo = 5.0, kStandoffHi = 25.0;
constexpr double kAltitudeLo = 2.0, kAltitudeHi = 15.0;
constexpr double kCaptureDistanceLo = 2.0, kCaptureDistanceHi = 10.0;
constexpr double kPoseJitter = 0.15;
constexpr double kWeatherIntensityLo = 0.3, kWeatherIntensityHi = 1.0;
constexpr double kAmbientLo = 0.1, kAmbientHi = 1.0;
constexpr int kRingPoses = 12;
constexpr double kFixedAltitudeOffset = 6.0;
constexpr double kFixedCaptureDistance = 5.0;
constexpr double kAnchorMergeDistance = 0.5;
}  // namespace defaults

inline const AssetPrototype& require_asset(const AugmentedScene& scene, const std::string& name) {
  const AssetPrototype* proto = scene.base->find_asset(name);
  if (!proto) throw Error(Errc::UnknownAsset, "asset '" + name + "' is not in the catalog");
  return *proto;
}

inline bool axis_enabled(const std::vector<std::string>& axes, const char* axis) {
  return std::find(axes.begin(), axes.end(), axis) != axes.end();
}

// ---- layer 1: asset variation -------------------------------------------

inline void generate_rand_variation(AugmentedScene& scene, OpContext& ctx) {
  const ParamMap& p = ctx.spec.params;
  std::string asset = param_str(p, "asset");
  if (asset.empty()) throw Error(Errc::InvalidParams, "missing required parameter 'asset'");
  const AssetPrototype& proto = require_asset(scene, asset);

  int nvariations = int(param_num(p, "nvariations", 1));
  if (nvariations < 1) throw Error(Errc::InvalidParams, "nvariations must be >= 1");
  auto rot_axes = param_str_list(p, "rotation_axis", {"x", "y", "z"});
  auto scale_axes = param_str_list(p, "scale_axis", {"x", "y", "z"});
  bool material = param_flag(p, "material", true);
  auto rot_range = param_num_list(p, "rotation_range",
                                  {defaults::kRotationLo, defaults::kRotationHi});
  auto scale_range = param_num_list(p, "scale_range", {defaults::kScaleLo, defaults::kScaleHi});
  if (material && proto.textures_required && proto.texture_set.empty())
    throw Error(Errc::EmptyTextureSet, "asset '" + asset + "' declares textures mandatory");

  auto& registered = scene.variants[asset];
  for (int k = 0; k < nvariations; ++k) {
    AssetVariant v;
    v.material = proto.default_material;
    if (axis_enabled(rot_axes, "x")) v.rotation.x = ctx.rng.uniform(rot_range[0], rot_range[1]);
    if (axis_enabled(rot_axes, "y")) v.rotation.y = ctx.rng.uniform(rot_range[0], rot_range[1]);
    if (axis_enabled(rot_axes, "z")) v.rotation.z = ctx.rng.uniform(rot_range[0], rot_range[1]);
    if (axis_enabled(scale_axes, "x")) v.scale.x = ctx.rng.uniform(scale_range[0], scale_range[1]);
    if (axis_enabled(scale_axes, "y")) v.scale.y = ctx.rng.uniform(scale_range[0], scale_range[1]);
    if (axis_enabled(scale_axes, "z")) v.scale.z = ctx.rng.uniform(scale_range[0], scale_range[1]);
    if (material) {
      v.material.rgb = {ctx.rng.uniform(), ctx.rng.uniform(), ctx.rng.uniform()};
      if (!proto.texture_set.empty())
        v.material.texture =
            proto.texture_set[std::size_t(ctx.rng.uniform_int(0, proto.texture_set.size() - 1))];
    }
    registered.push_back(v);
  }
  ctx.resolved["asset"] = asset;
  ctx.resolved["nvariations"] = double(nvariations);
}

inline void random_shadow(AugmentedScene& scene, OpContext& ctx) {
  const ParamMap& p = ctx.spec.params;
  std::string asset = param_str(p, "asset");
  if (asset.empty()) throw Error(Errc::InvalidParams, "missing required parameter 'asset'");
  require_asset(scene, asset);

  PendingShadow shadow;
  shadow.asset = asset;
  auto rr = param_num_list(p, "radius_factor_range",
                           {defaults::kShadowRadiusLoFactor, defaults::kShadowRadiusHiFactor});
  auto ir = param_num_list(p, "intensity_range",
                           {defaults::kSpotIntensityLo, defaults::kSpotIntensityHi});
  shadow.radius_lo_factor = rr[0];
  shadow.radius_hi_factor = rr[1];
  shadow.intensity_lo = ir[0];
  shadow.intensity_hi = ir[1];
  shadow.seed = ctx.rng.next_u64();

  bool has_targets = false;
  for (const auto& inst : scene.instances) has_targets = has_targets || inst.prototype == asset;
  bool has_variants =
      scene.variants.count(asset) && !scene.variants.at(asset).empty();
  if (has_targets) {
    cast_shadow_spotlights(scene, shadow);
  } else if (has_variants || scene.base->find_asset(asset)) {
    scene.pending_shadows.push_back(shadow);  // placement has not happened yet
  } else {
    throw Error(Errc::NoTargetInstances, "no instances or variants of '" + asset + "'");
  }
  ctx.resolved["asset"] = asset;
}

// ---- layer 2: asset distribution -----------------------------------------

// Builds the spawn layer for a container class: scene-graph path for
// designed/NeRF scenes, geodata path for 3D maps.
inline DistributionLayer build_layer(const AugmentedScene& scene,
                                     const std::string& container_class,
                                     const std::vector<AttrFilter>& filters) {
  const SceneSpecification& spec = *scene.base;
  if (spec.base_map_kind == BaseMapKind::Map3d) {
    if (!spec.geodata_ref)
      throw Error(Errc::InconsistentBaseMap, "map3d scene without geodata_ref");
    GeodataRequest req;
    req.ref = *spec.geodata_ref;
    req.projection.origin = spec.map_origin;
    req.feature_class = container_class;
    req.filters = filters;
    return layer_from_geodata(req);
  }
  if (!spec.graph)
    throw Error(Errc::EmptyDistributionSpace, "scene has no graph to distribute over");
  DistributionSpace space = extract_distribution_space(*spec.graph, container_class, filters);
  return map_to_distribution_layer(space);
}

// Keep a random subset of n regions (deterministic per stream).
inline void restrict_regions(DistributionLayer& layer, std::size_t n, RngStream& rng) {
  if (n == 0 || n >= layer.regions.size()) return;
  std::vector<std::size_t> idx(layer.regions.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = idx.size() - 1; i > 0; --i)
    std::swap(idx[i], idx[std::size_t(rng.uniform_int(0, std::int64_t(i)))]);
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<SpawnRegion> kept;
  for (std::size_t i : idx) kept.push_back(layer.regions[i]);
  layer.regions = std::move(kept);
}

struct DistributeConfig {
  std::string asset;            // empty = every asset with registered variants
  std::string container_class = "building";
  std::vector<AttrFilter> filters;
  std::size_t nregions = 0;     // 0 = all
  SamplingPattern pattern = SamplingPattern::uniform();
  int count_per_region = 1;
  int total_count = 0;          // when > 0, overrides count_per_region
  double min_separation = -1;   // < 0 = derived from bounding radii
};

inline void distribute_with_config(AugmentedScene& scene, const DistributeConfig& cfg,
                                   RngStream& rng, ParamMap& resolved) {
  std::vector<std::string> targets;
  if (!cfg.asset.empty()) {
    targets.push_back(cfg.asset);
  } else {
    for (const auto& [name, vars] : scene.variants)
      if (!vars.empty()) targets.push_back(name);
    if (targets.empty())
      throw Error(Errc::UnknownAsset, "no asset given and no variants registered");
  }

  DistributionLayer layer = build_layer(scene, cfg.container_class, cfg.filters);
  restrict_regions(layer, cfg.nregions, rng);

  for (const std::string& asset : targets) {
    const AssetPrototype& proto = require_asset(scene, asset);
    std::vector<AssetVariant> variants;
    if (auto it = scene.variants.find(asset); it != scene.variants.end() && !it->second.empty())
      variants = it->second;
    else
      variants.push_back(AssetVariant{{0, 0, 0}, {1, 1, 1}, proto.default_material});

    double max_scale = 0;
    for (const auto& v : variants)
      max_scale = std::max(max_scale, v.scale.cwise_mul(proto.aabb.extent()).norm() * 0.5);
    double min_sep = cfg.min_separation >= 0 ? cfg.min_separation : 2.0 * max_scale;

    auto place = [&](const DistributionLayer& sub, std::size_t n,
                     const std::string& region_hint) {
      std::vector<SpawnPoint> points = sample_locations(sub, n, cfg.pattern, min_sep, rng);
      for (const SpawnPoint& pt : points) {
        std::size_t vi = std::size_t(rng.uniform_int(0, std::int64_t(variants.size()) - 1));
        const AssetVariant& v = variants[vi];
        AssetInstance inst;
        inst.prototype = asset;
        inst.rotation = v.rotation;
        inst.scale = v.scale;
        inst.material = v.material;
        inst.role = InstanceRole::Main;
        inst.variant_index = int(vi);
        inst.anchor_region =
            region_hint.empty() ? sub.regions[pt.region_index].region_id : region_hint;
        inst.position = pt.position;
        // rest the box bottom on the spawn elevation
        inst.position.y -= proto.aabb.min.y * v.scale.y;
        scene.instances.push_back(std::move(inst));
      }
    };

    if (cfg.total_count > 0) {
      place(layer, std::size_t(cfg.total_count), "");
    } else {
      for (const SpawnRegion& region : layer.regions) {
        DistributionLayer sub;
        sub.source = layer.source;
        sub.regions.push_back(region);
        place(sub, std::size_t(cfg.count_per_region), region.region_id);
      }
    }
    resolved["asset_" + asset] = double(scene.instances.size());
  }
  resolved["regions"] = double(layer.regions.size());
  resolved["min_separation"] = cfg.min_separation;
}

inline DistributeConfig distribute_config_from(const ParamMap& p) {
  DistributeConfig cfg;
  cfg.asset = param_str(p, "asset");
  cfg.container_class = param_str(p, "over", "building");
  if (has_param(p, "amenity"))
    cfg.filters.push_back({"amenity", AttrFilter::Op::Eq, Value(param_str(p, "amenity"))});
  if (has_param(p, "type"))
    cfg.filters.push_back({"amenity", AttrFilter::Op::Eq, Value(param_str(p, "type"))});
  cfg.nregions = std::size_t(param_num(p, "nregions", param_num(p, "number", 0)));
  cfg.count_per_region = int(param_num(p, "count_per_region", 1));
  cfg.total_count = int(param_num(p, "total_count", 0));
  cfg.min_separation = param_distance(p, "min_separation", -1);

  std::string pattern = param_str(p, "pattern", "uniform");
  if (has_param(p, "radius") || pattern == "radius") {
    double r = param_distance(p, "radius", 0);
    auto mode = param_str(p, "mode", "center") == "region_centroid"
                    ? SamplingPattern::CenterMode::RegionCentroid
                    : SamplingPattern::CenterMode::SceneCenter;
    cfg.pattern = SamplingPattern::within_radius(r, mode);
  } else if (pattern == "line") {
    auto p0 = param_num_list(p, "p0", {0, 0});
    auto p1 = param_num_list(p, "p1", {1, 0});
    cfg.pattern = SamplingPattern::along_line({p0[0], p0[1]}, {p1[0], p1[1]},
                                              param_distance(p, "jitter", 1.0));
  } else if (pattern == "polygon") {
    Polygon poly;
    auto it = p.find("vertices");
    if (it != p.end())
      for (const Value& pt : it->second.as_list()) {
        auto xy = pt.as_number_list();
        poly.push_back({xy[0], xy[1]});
      }
    cfg.pattern = SamplingPattern::within_polygon(std::move(poly));
  }
  return cfg;
}

inline void distribute_asset(AugmentedScene& scene, OpContext& ctx) {
  DistributeConfig cfg = distribute_config_from(ctx.spec.params);
  distribute_with_config(scene, cfg, ctx.rng, ctx.resolved);
}

// ---- layer 3: obstacle generation ----------------------------------------

inline void random_obstacle_over_asset(AugmentedScene& scene, OpContext& ctx) {
  const ParamMap& p = ctx.spec.params;
  std::string asset = param_str(p, "asset");
  std::string obstacle = param_str(p, "obstacle_asset");
  if (asset.empty() || obstacle.empty())
    throw Error(Errc::InvalidParams, "asset and obstacle_asset are required");
  const AssetPrototype& target_proto = require_asset(scene, asset);
  const AssetPrototype& obstacle_proto = require_asset(scene, obstacle);

  int max_count = int(param_num(p, "max_count", 4));
  if (max_count < 1) throw Error(Errc::InvalidParams, "max_count must be >= 1");
  double radius_factor = param_num(p, "radius_factor", 3.0);
  double abs_radius = param_distance(p, "radius", -1);  // absolute radius overrides

  const std::vector<AssetVariant>* registered = nullptr;
  if (auto it = scene.variants.find(obstacle); it != scene.variants.end() && !it->second.empty())
    registered = &it->second;

  int spawned = 0;
  std::size_t existing = scene.instances.size();
  for (std::size_t i = 0; i < existing; ++i) {
    const AssetInstance target = scene.instances[i];  // copy: the vector grows
    if (target.prototype != asset) continue;
    double sphere_r = abs_radius > 0
                          ? abs_radius
                          : radius_factor * instance_bounding_radius(target, target_proto);
    Vec3 center = instance_center(target, target_proto);
    int k = int(ctx.rng.uniform_int(1, max_count));
    for (int j = 0; j < k; ++j) {
      AssetInstance inst;
      inst.prototype = obstacle;
      if (registered) {
        std::size_t vi = std::size_t(ctx.rng.uniform_int(0, std::int64_t(registered->size()) - 1));
        const AssetVariant& v = (*registered)[vi];
        inst.rotation = v.rotation;
        inst.scale = v.scale;
        inst.material = v.material;
        inst.variant_index = int(vi);
      } else {
        inst.rotation = {ctx.rng.uniform(0, 2 * kPi), ctx.rng.uniform(0, 2 * kPi),
                         ctx.rng.uniform(0, 2 * kPi)};
        double s = ctx.rng.uniform(defaults::kScaleLo, defaults::kScaleHi);
        inst.scale = {s, s, s};
        inst.material = obstacle_proto.default_material;
        inst.material.rgb = {ctx.rng.uniform(), ctx.rng.uniform(), ctx.rng.uniform()};
      }
      double r = ctx.rng.uniform(0.0, sphere_r);
      inst.position = center + ctx.rng.unit_sphere() * r;
      inst.role = obstacle_proto.particle ? InstanceRole::Noise : InstanceRole::Obstacle;
      scene.instances.push_back(std::move(inst));
      ++spawned;
    }
  }
  ctx.resolved["spawned"] = double(spawned);
}

inline void random_obstacle_in_fov(AugmentedScene& scene, OpContext& ctx) {
  const ParamMap& p = ctx.spec.params;
  std::string obstacle = param_str(p, "obstacle_asset");
  if (obstacle.empty()) throw Error(Errc::InvalidParams, "obstacle_asset is required");
  require_asset(scene, obstacle);

  FovRule rule;
  rule.obstacle_asset = obstacle;
  rule.probability = param_num(p, "spawn_probability", 1.0);
  auto dr = param_num_list(p, "distance_range",
                           {defaults::kFovDistanceLo, defaults::kFovDistanceHi});
  if (dr.size() != 2 || !(0 < dr[0]) || !(dr[0] < dr[1]))
    throw Error(Errc::InvalidRange, "distance_range must satisfy 0 < d_min < d_max");
  rule.d_min = dr[0];
  rule.d_max = dr[1];
  rule.cone_margin = param_num(p, "cone_margin", defaults::kFovConeMargin);
  if (rule.cone_margin < 0 || rule.cone_margin > 1)
    throw Error(Errc::InvalidRange, "cone_margin must be in [0,1]");
  rule.seed = ctx.rng.next_u64();
  scene.deferred_fov_rules.push_back(rule);
  ctx.resolved["obstacle_asset"] = obstacle;
  ctx.resolved["d_min"] = rule.d_min;
  ctx.resolved["d_max"] = rule.d_max;
}

// ---- layer 4: global variation -------------------------------------------

inline void randomize_global(AugmentedScene& scene, OpContext& ctx, const std::string& parameter) {
  const ParamMap& p = ctx.spec.params;
  if (parameter == "weather") {
    std::vector<double> probs = param_num_list(p, "p", {});
    if (probs.empty()) probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    RangeSpec::validate_probability_vector(probs, weather_categories().size());
    std::size_t idx = ctx.rng.categorical(probs);
    scene.global.weather = idx == 0 ? Weather::Rain : (idx == 1 ? Weather::Sun : Weather::Snow);
    auto ir = param_num_list(p, "intensity_range",
                             {defaults::kWeatherIntensityLo, defaults::kWeatherIntensityHi});
    scene.global.weather_intensity = ctx.rng.uniform(ir[0], ir[1]);
    ctx.resolved["category"] = weather_categories()[idx];
    ctx.resolved["intensity"] = scene.global.weather_intensity;
  } else if (parameter == "time") {
    auto r = param_num_list(p, "range", {0.0, 24.0});
    scene.global.time_of_day = ctx.rng.uniform(r[0], r[1]);
    ctx.resolved["time_of_day"] = scene.global.time_of_day;
  } else if (parameter == "lighting") {
    auto r = param_num_list(p, "range", {defaults::kAmbientLo, defaults::kAmbientHi});
    scene.global.ambient_level = ctx.rng.uniform(r[0], r[1]);
    ctx.resolved["ambient_level"] = scene.global.ambient_level;
  } else {
    throw Error(Errc::InvalidParams, "unknown global parameter '" + parameter + "'");
  }
}

// ---- layer 5: trajectory ---------------------------------------------------

inline std::vector<Vec3> merge_anchors(std::vector<Vec3> anchors) {
  std::vector<Vec3> merged;
  for (const Vec3& a : anchors) {
    bool dup = false;
    for (const Vec3& m : merged)
      if ((a - m).norm() < defaults::kAnchorMergeDistance) {
        dup = true;
        break;
      }
    if (!dup) merged.push_back(a);
  }
  return merged;
}

inline void sample_trajectory_locations(AugmentedScene& scene, OpContext& ctx) {
  const ParamMap& p = ctx.spec.params;
  std::string container = param_str(p, "asset", param_str(p, "over", "building"));
  int npoints = int(param_num(p, "npoints", 10));
  if (npoints < 0) throw Error(Errc::InvalidParams, "npoints must be >= 0");

  std::vector<Vec3> anchors = scene.main_positions();
  if (npoints > 0) {
    DistributionLayer layer = build_layer(scene, container, {});
    std::vector<SpawnPoint> pts =
        sample_locations(layer, std::size_t(npoints), SamplingPattern::uniform(), 0.0, ctx.rng);
    for (const SpawnPoint& pt : pts) anchors.push_back(pt.position);
  }
  scene.trajectory.anchors = merge_anchors(std::move(anchors));
  ctx.resolved["anchors"] = double(scene.trajectory.anchors.size());
}

inline void randomize_trajectory(AugmentedScene& scene, OpContext& ctx) {
  const ParamMap& p = ctx.spec.params;
  auto types = param_str_list(p, "types", {"cylindrical"});
  if (types.empty()) throw Error(Errc::InvalidParams, "types must be nonempty");
  for (const auto& t : types)
    if (t != "cylindrical" && t != "point2point")
      throw Error(Errc::InvalidParams, "unknown trajectory type '" + t + "'");
  auto features = param_str_list(p, "features", {});
  int n_poses = int(param_num(p, "n_poses", defaults::kRingPoses));

  bool feat_pose = axis_enabled(features, "camera_pose");
  bool feat_altitude = axis_enabled(features, "altitude");
  bool feat_motion = axis_enabled(features, "motion");

  std::vector<Vec3> anchors = scene.trajectory.anchors;
  if (anchors.empty()) anchors = merge_anchors(scene.main_positions());

  scene.trajectory.anchors = anchors;
  scene.trajectory.entries.clear();
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    TrajectoryEntry e;
    std::size_t ti = types.size() == 1
                         ? 0
                         : std::size_t(ctx.rng.uniform_int(0, std::int64_t(types.size()) - 1));
    e.kind = types[ti] == "point2point" ? TrajKind::Point2Point : TrajKind::Cylindrical;
    e.anchor = anchors[i];
    e.n_poses = n_poses;
    if (e.kind == TrajKind::Cylindrical) {
      e.standoff = ctx.rng.uniform(defaults::kStandoffLo, defaults::kStandoffHi);
      e.altitude_offset = feat_altitude ? ctx.rng.uniform(defaults::kAltitudeLo, defaults::kAltitudeHi)
                                        : defaults::kFixedAltitudeOffset;
    } else {
      if (anchors.size() < 2)
        throw Error(Errc::NeedTwoAnchors, "point2point needs at least two anchors");
      e.anchor2 = anchors[(i + 1) % anchors.size()];
      e.capture_distance = feat_motion
                               ? ctx.rng.uniform(defaults::kCaptureDistanceLo,
                                                 defaults::kCaptureDistanceHi)
                               : defaults::kFixedCaptureDistance;
    }
    scene.trajectory.entries.push_back(e);
  }
  scene.trajectory.resolved = true;
  scene.trajectory.jitter_pose = feat_pose;
  scene.trajectory.jitter_mag = param_num(p, "jitter", defaults::kPoseJitter);
  scene.trajectory.jitter_seed = ctx.rng.next_u64();

  std::vector<Value> feats;
  for (const auto& f : features) feats.push_back(Value(f));
  ctx.resolved["features"] = Value(feats);
  ctx.resolved["entries"] = double(scene.trajectory.entries.size());
}

}  // namespace ops

// The built-in operation table. DSL facade names are first-class registry
// entries; several of them share one underlying implementation.
inline std::map<std::string, OpDef> builtin_registry() {
  using K = Value::Kind;
  std::map<std::string, OpDef> reg;

  auto add = [&](const char* name, int layer, std::map<std::string, ParamDecl> schema,
                 OpPerform perform, std::function<void(const OperationSpec&)> validate = {}) {
    OpDef def;
    def.name = name;
    def.layer = layer;
    def.schema = std::move(schema);
    def.perform = std::move(perform);
    def.validate = std::move(validate);
    reg.emplace(name, std::move(def));
  };

  std::map<std::string, ParamDecl> gen_schema{
      {"asset", {{K::String}, true}},
      {"nvariations", {{K::Number}, false}},
      {"rotation_axis", {{K::List}, false}},
      {"scale_axis", {{K::List}, false}},
      {"material", {{K::Bool, K::Number}, false}},
      {"rotation_range", {{K::List}, false}},
      {"scale_range", {{K::List}, false}},
  };
  add("generate_rand_variation", 1, gen_schema, ops::generate_rand_variation);

  add("random_shadow", 1,
      {{"asset", {{K::String}, true}},
       {"radius_factor_range", {{K::List}, false}},
       {"intensity_range", {{K::List}, false}}},
      ops::random_shadow);

  std::map<std::string, ParamDecl> dist_schema{
      {"asset", {{K::String}, false}},
      {"over", {{K::String}, false}},
      {"amenity", {{K::String}, false}},
      {"type", {{K::String}, false}},
      {"nregions", {{K::Number}, false}},
      {"number", {{K::Number}, false}},
      {"pattern", {{K::String}, false}},
      {"mode", {{K::String}, false}},
      {"radius", {{K::Number, K::String}, false}},
      {"distance", {{K::Number, K::String}, false}},
      {"p0", {{K::List}, false}},
      {"p1", {{K::List}, false}},
      {"jitter", {{K::Number, K::String}, false}},
      {"vertices", {{K::List}, false}},
      {"count_per_region", {{K::Number}, false}},
      {"total_count", {{K::Number}, false}},
      {"min_separation", {{K::Number, K::String}, false}},
  };
  add("distribute_asset", 2, dist_schema, ops::distribute_asset);
  add("distribute_asset_within_radius", 2, dist_schema, [](AugmentedScene& s, OpContext& c) {
    ops::DistributeConfig cfg = ops::distribute_config_from(c.spec.params);
    double r = param_distance(c.spec.params, "radius", 0);
    if (!(r > 0)) throw Error(Errc::InvalidParams, "radius must be > 0");
    auto mode = param_str(c.spec.params, "mode", "center") == "region_centroid"
                    ? SamplingPattern::CenterMode::RegionCentroid
                    : SamplingPattern::CenterMode::SceneCenter;
    cfg.pattern = SamplingPattern::within_radius(r, mode);
    ops::distribute_with_config(s, cfg, c.rng, c.resolved);
  });
  add("distribute_asset_over_area", 2, dist_schema, [](AugmentedScene& s, OpContext& c) {
    ops::DistributeConfig cfg = ops::distribute_config_from(c.spec.params);
    cfg.min_separation = param_distance(c.spec.params, "distance", 0);
    if (cfg.total_count == 0 && cfg.count_per_region == 1) {
      // "distribute N towers over the area": default batch size follows the
      // registered variant count
      std::size_t n = 0;
      if (!cfg.asset.empty()) {
        auto it = s.variants.find(cfg.asset);
        n = it != s.variants.end() ? it->second.size() : 1;
      } else {
        for (const auto& [name, vars] : s.variants) n = std::max(n, vars.size());
      }
      cfg.total_count = int(std::max<std::size_t>(1, n));
    }
    ops::distribute_with_config(s, cfg, c.rng, c.resolved);
  });
  add("distribute_asset_over_amenity", 2, dist_schema, [](AugmentedScene& s, OpContext& c) {
    ops::DistributeConfig cfg = ops::distribute_config_from(c.spec.params);
    if (cfg.filters.empty())
      throw Error(Errc::InvalidParams, "missing required parameter 'type'");
    ops::distribute_with_config(s, cfg, c.rng, c.resolved);
  });

  std::map<std::string, ParamDecl> obstacle_schema{
      {"asset", {{K::String}, true}},
      {"obstacle_asset", {{K::String}, true}},
      {"max_count", {{K::Number}, false}},
      {"radius_factor", {{K::Number}, false}},
      {"radius", {{K::Number, K::String}, false}},
  };
  add("random_obstacle_over_asset", 3, obstacle_schema, ops::random_obstacle_over_asset);

  std::map<std::string, ParamDecl> fov_schema{
      {"obstacle_asset", {{K::String}, true}},
      {"distance_range", {{K::List}, false}},
      {"cone_margin", {{K::Number}, false}},
      {"spawn_probability", {{K::Number}, false}},
  };
  add("random_obstacle_in_FOV", 3, fov_schema, ops::random_obstacle_in_fov);
  add("random_obstacle_in_fov", 3, fov_schema, ops::random_obstacle_in_fov);

  auto weather_validate = [](const OperationSpec& spec) {
    auto it = spec.params.find("p");
    if (it != spec.params.end())
      RangeSpec::validate_probability_vector(it->second.as_number_list(),
                                             weather_categories().size());
  };
  add("random_weather", 4,
      {{"p", {{K::List}, false}}, {"intensity_range", {{K::List}, false}}},
      [](AugmentedScene& s, OpContext& c) { ops::randomize_global(s, c, "weather"); },
      weather_validate);
  add("random_time", 4, {{"range", {{K::List}, false}}},
      [](AugmentedScene& s, OpContext& c) { ops::randomize_global(s, c, "time"); });
  add("random_lighting", 4, {{"range", {{K::List}, false}}},
      [](AugmentedScene& s, OpContext& c) { ops::randomize_global(s, c, "lighting"); });

  std::map<std::string, ParamDecl> sample_schema{
      {"asset", {{K::String}, false}},
      {"over", {{K::String}, false}},
      {"npoints", {{K::Number}, false}},
  };
  add("sample_location", 5, sample_schema, ops::sample_trajectory_locations);

  std::map<std::string, ParamDecl> traj_schema{
      {"types", {{K::List}, false}},
      {"features", {{K::List}, false}},
      {"n_poses", {{K::Number}, false}},
      {"jitter", {{K::Number}, false}},
  };
  add("random_trajectory", 5, traj_schema, ops::randomize_trajectory);

  return reg;
}

inline Pipeline make_pipeline(std::uint64_t master_seed) {
  return Pipeline(master_seed, builtin_registry());
}

}  // namespace asda
