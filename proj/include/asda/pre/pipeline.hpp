#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "asda/core/rng.hpp"
#include "asda/pre/params.hpp"
#include "asda/scene/augmented.hpp"

namespace asda {

// Matches a scene when empty, or when the scene id or class is listed.
struct SceneFilter {
  std::vector<std::string> values;

  bool empty() const { return values.empty(); }
  bool matches(const std::string& scene_id, const std::string& scene_class) const {
    if (values.empty()) return true;
    for (const std::string& v : values)
      if (v == scene_id || v == scene_class) return true;
    return false;
  }
};

inline std::string trim_copy(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  std::size_t b = s.find_last_not_of(" \t");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

struct OperationSpec {
  std::string name;
  int layer = 0;  // filled from the registry at add time
  double probability = 1.0;
  SceneFilter scene_filter;
  ParamMap params;
};

struct OpContext {
  const OperationSpec& spec;
  RngStream& rng;
  ParamMap& resolved;  // recorded into provenance
};

using OpPerform = std::function<void(AugmentedScene&, OpContext&)>;

struct ParamDecl {
  std::vector<Value::Kind> kinds;  // accepted kinds; empty = any
  bool required = false;
};

struct OpDef {
  std::string name;
  int layer = 1;
  std::map<std::string, ParamDecl> schema;
  std::function<void(const OperationSpec&)> validate;  // optional semantic check
  OpPerform perform;
};

struct RunError {
  std::string scene_id;
  int variation_index = 0;
  std::string op;
  std::string message;
};

struct RunResult {
  std::vector<AugmentedScene> scenes;
  std::vector<RunError> errors;
};

// Runs fn over [0, n) with up to `workers` threads. Work items must be
// independent; results land in caller-owned slots so output order is fixed.
// The first exception thrown by any item is rethrown after all threads join.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  std::size_t count = std::min<std::size_t>(std::size_t(workers), n);
  pool.reserve(count);
  for (std::size_t w = 0; w < count; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Spotlight casting around each instance of an asset: position sampled on a
// randomized sphere shell, direction resampled until it points upward.
inline void cast_shadow_spotlights(AugmentedScene& scene, const PendingShadow& shadow) {
  const AssetPrototype* proto = scene.base->find_asset(shadow.asset);
  if (!proto) throw Error(Errc::UnknownAsset, "asset '" + shadow.asset + "'");
  RngStream rng(shadow.seed);
  for (const AssetInstance& inst : scene.instances) {
    if (inst.prototype != shadow.asset) continue;
    double r = instance_bounding_radius(inst, *proto);
    double radius = rng.uniform(shadow.radius_lo_factor * r, shadow.radius_hi_factor * r);
    Vec3 dir = rng.unit_sphere();
    while (!(dir.y > 0)) dir = rng.unit_sphere();
    double intensity = rng.uniform(shadow.intensity_lo, shadow.intensity_hi);
    scene.global.spotlights.push_back({instance_center(inst, *proto) + dir * radius, intensity});
  }
}

inline void resolve_pending_shadows(AugmentedScene& scene) {
  for (const PendingShadow& shadow : scene.pending_shadows)
    cast_shadow_spotlights(scene, shadow);
  scene.pending_shadows.clear();
}

// Ordered, probability-gated randomization operations applied in layers.
// Each (scene, variation, op) tuple owns an independent RNG stream derived
// from the master seed, so results do not depend on execution order.
class Pipeline {
 public:
  explicit Pipeline(std::uint64_t master_seed, std::map<std::string, OpDef> registry)
      : master_seed_(master_seed), registry_(std::move(registry)) {}

  std::uint64_t master_seed() const { return master_seed_; }
  const std::vector<OperationSpec>& ops() const { return ops_; }
  const std::map<std::string, OpDef>& registry() const { return registry_; }

  void register_custom(const std::string& name, int layer, OpPerform perform) {
    if (registry_.count(name)) throw Error(Errc::DuplicateName, "operation '" + name + "'");
    if (layer < 1 || layer > 5) throw Error(Errc::InvalidParams, "layer must be in 1..5");
    OpDef def;
    def.name = name;
    def.layer = layer;
    def.perform = std::move(perform);
    registry_.emplace(name, std::move(def));
  }

  void add(OperationSpec spec) {
    auto it = registry_.find(spec.name);
    if (it == registry_.end())
      throw Error(Errc::UnknownOperation, "operation '" + spec.name + "' is not registered");
    const OpDef& def = it->second;
    if (!(spec.probability >= 0.0 && spec.probability <= 1.0))
      throw Error(Errc::InvalidParams, "probability must be in [0,1], got " +
                                           format_number(spec.probability));
    spec.layer = def.layer;

    // scene/scenes/scene_class params become the scene filter
    for (const char* key : {"scene", "scenes", "scene_class"}) {
      auto pit = spec.params.find(key);
      if (pit == spec.params.end()) continue;
      if (pit->second.is_string()) {
        spec.scene_filter.values.push_back(trim_copy(pit->second.str));
      } else if (pit->second.is_list()) {
        for (const auto& v : pit->second.as_string_list())
          spec.scene_filter.values.push_back(trim_copy(v));
      } else {
        throw Error(Errc::InvalidParams, std::string("parameter '") + key +
                                             "' must be a string or list");
      }
      spec.params.erase(pit);
    }

    if (!def.schema.empty()) {
      for (const auto& [key, value] : spec.params) {
        auto sit = def.schema.find(key);
        if (sit == def.schema.end())
          throw Error(Errc::InvalidParams, "unknown parameter '" + key + "' for op '" +
                                               spec.name + "'");
        const ParamDecl& decl = sit->second;
        if (!decl.kinds.empty() &&
            std::find(decl.kinds.begin(), decl.kinds.end(), value.kind) == decl.kinds.end())
          throw Error(Errc::InvalidParams, "parameter '" + key + "' has the wrong type");
      }
      for (const auto& [key, decl] : def.schema)
        if (decl.required && !spec.params.count(key))
          throw Error(Errc::InvalidParams, "missing required parameter '" + key + "'");
    }
    if (def.validate) def.validate(spec);
    ops_.push_back(std::move(spec));
  }

  RunResult run(const std::vector<std::shared_ptr<const SceneSpecification>>& specs,
                int variations_per_scene, int workers = 1) const {
    if (variations_per_scene < 1)
      throw Error(Errc::InvalidParams, "variations_per_scene must be >= 1");

    // execution order: stable sort by layer, insertion order breaks ties
    std::vector<std::size_t> order(ops_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ops_[a].layer < ops_[b].layer; });

    std::size_t total = specs.size() * std::size_t(variations_per_scene);
    std::vector<std::optional<AugmentedScene>> slots(total);
    std::vector<std::optional<RunError>> errors(total);

    parallel_for(total, workers, [&](std::size_t flat) {
      std::size_t spec_idx = flat / variations_per_scene;
      int variation = int(flat % variations_per_scene);
      const auto& spec = specs[spec_idx];
      AugmentedScene scene = make_variation(spec, variation);
      std::string current_op;
      try {
        for (std::size_t ordinal : order) {
          current_op = ops_[ordinal].name;
          run_op(scene, ops_[ordinal], ordinal);
        }
        current_op = "resolve_shadows";
        resolve_pending_shadows(scene);
        slots[flat] = std::move(scene);
      } catch (const std::exception& e) {
        errors[flat] = RunError{spec->scene_id, variation, current_op, e.what()};
      }
    });

    RunResult result;
    for (std::size_t i = 0; i < total; ++i) {
      if (slots[i]) result.scenes.push_back(std::move(*slots[i]));
      if (errors[i]) result.errors.push_back(std::move(*errors[i]));
    }
    return result;
  }

  std::uint64_t op_stream_seed(const std::string& scene_id, int variation,
                               std::size_t ordinal) const {
    return derive_seed(master_seed_, scene_id, std::uint64_t(variation),
                       std::uint64_t(ordinal));
  }

 private:
  void run_op(AugmentedScene& scene, const OperationSpec& op, std::size_t ordinal) const {
    std::uint64_t seed = op_stream_seed(scene.scene_id, scene.variation_index, ordinal);
    ProvenanceEntry entry;
    entry.op = op.name;
    entry.layer = op.layer;
    entry.seed = seed;

    if (!op.scene_filter.matches(scene.scene_id, scene.base->scene_class)) {
      entry.applied = false;
      entry.reason = "filtered";
      scene.provenance.push_back(std::move(entry));
      return;
    }

    RngStream rng(seed);
    if (!(rng.uniform() < op.probability)) {
      entry.applied = false;
      entry.reason = "gated";
      scene.provenance.push_back(std::move(entry));
      return;
    }

    const OpDef& def = registry_.at(op.name);
    OpContext ctx{op, rng, entry.resolved};
    def.perform(scene, ctx);
    entry.applied = true;
    scene.provenance.push_back(std::move(entry));
  }

  std::uint64_t master_seed_;
  std::map<std::string, OpDef> registry_;
  std::vector<OperationSpec> ops_;
};

}  // namespace asda
