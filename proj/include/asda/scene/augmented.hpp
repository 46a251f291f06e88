#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "asda/core/value.hpp"
#include "asda/scene/spec.hpp"

namespace asda {

// One randomized appearance of an asset prototype, registered by layer-1 ops
// and consumed by distribution/obstacle ops.
struct AssetVariant {
  Vec3 rotation{0, 0, 0};
  Vec3 scale{1, 1, 1};
  Material material;
};

enum class TrajKind { Cylindrical, Point2Point };

struct TrajectoryEntry {
  TrajKind kind = TrajKind::Cylindrical;
  Vec3 anchor{0, 0, 0};
  Vec3 anchor2{0, 0, 0};       // point2point segment end
  double standoff = 10.0;      // cylindrical: horizontal ring radius, meters
  double altitude_offset = 6.0;
  int n_poses = 12;
  double capture_distance = 5.0;  // point2point: spacing between frames
};

struct TrajectorySpec {
  std::vector<Vec3> anchors;
  std::vector<TrajectoryEntry> entries;
  bool resolved = false;       // set once a trajectory op has run
  bool jitter_pose = false;    // per-pose pitch/yaw/roll jitter
  double jitter_mag = 0.15;    // radians
  std::uint64_t jitter_seed = 0;
};

// Per-frame obstacle spawning inside the camera cone, resolved at capture
// time because it needs the pose.
struct FovRule {
  std::string obstacle_asset;
  double probability = 1.0;
  double d_min = 2.0;
  double d_max = 30.0;
  double cone_margin = 0.8;
  std::uint64_t seed = 0;
};

struct ProvenanceEntry {
  std::string op;
  int layer = 0;
  std::uint64_t seed = 0;
  bool applied = false;
  std::string reason;  // "filtered", "gated", "" when applied
  ParamMap resolved;
};

// Shadow casting requested before placement has happened (layer ordering
// puts asset variation before distribution); resolved after the last op.
struct PendingShadow {
  std::string asset;
  double radius_lo_factor = 1.5;
  double radius_hi_factor = 5.0;
  double intensity_lo = 0.5;
  double intensity_hi = 1.0;
  std::uint64_t seed = 0;
};

// One fully resolved scene variation flowing through the pipeline.
struct AugmentedScene {
  std::shared_ptr<const SceneSpecification> base;
  std::string scene_id;
  int variation_index = 0;
  std::vector<AssetInstance> instances;
  GlobalState global;
  std::map<std::string, std::vector<AssetVariant>> variants;
  std::vector<FovRule> deferred_fov_rules;
  std::vector<PendingShadow> pending_shadows;
  TrajectorySpec trajectory;
  std::vector<ProvenanceEntry> provenance;

  std::vector<Vec3> main_positions() const {
    std::vector<Vec3> out;
    for (const auto& inst : instances)
      if (inst.role == InstanceRole::Main) out.push_back(inst.position);
    return out;
  }
};

inline Affine instance_transform(const AssetInstance& inst) {
  return Affine::trs(inst.position, inst.rotation, inst.scale);
}

inline Vec3 instance_center(const AssetInstance& inst, const AssetPrototype& proto) {
  return instance_transform(inst).apply(proto.aabb.center());
}

// Half-diagonal of the scaled box; rotation does not change it.
inline double instance_bounding_radius(const AssetInstance& inst, const AssetPrototype& proto) {
  return inst.scale.cwise_mul(proto.aabb.extent()).norm() * 0.5;
}

inline AugmentedScene make_variation(std::shared_ptr<const SceneSpecification> spec,
                                     int variation_index) {
  AugmentedScene s;
  s.scene_id = spec->scene_id;
  s.global = spec->default_global;
  s.base = std::move(spec);
  s.variation_index = variation_index;
  return s;
}

}  // namespace asda
