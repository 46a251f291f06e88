#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "asda/core/rng.hpp"
#include "asda/opt/scaling.hpp"

namespace asda::opt {

enum class OpKind { Generation, Distribution, Other };

struct CatalogOp {
  std::string name;
  OpKind kind = OpKind::Other;
};

// The searchable operation space; generation ops must be chased by a
// distribution op so sampled variants actually land in the scene.
inline std::vector<CatalogOp> default_op_catalog() {
  return {
      {"generate_rand_variation", OpKind::Generation},
      {"random_obstacle_over_asset", OpKind::Generation},
      {"random_obstacle_in_FOV", OpKind::Generation},
      {"distribute_asset", OpKind::Distribution},
      {"distribute_asset_within_radius", OpKind::Distribution},
      {"distribute_asset_over_area", OpKind::Distribution},
      {"distribute_asset_over_amenity", OpKind::Distribution},
      {"random_shadow", OpKind::Other},
      {"random_weather", OpKind::Other},
      {"random_time", OpKind::Other},
      {"random_lighting", OpKind::Other},
      {"sample_location", OpKind::Other},
      {"random_trajectory", OpKind::Other},
  };
}

inline OpKind catalog_kind(const std::vector<CatalogOp>& catalog, const std::string& name) {
  for (const CatalogOp& op : catalog)
    if (op.name == name) return op.kind;
  return OpKind::Other;
}

constexpr int kMagnitudeBins = 10;  // 1..10, mapping linearly into each op's range

struct SubPolicy {
  std::vector<std::string> op_names;
  std::vector<double> probabilities;   // per op, grid {0.0, 0.1, ..., 1.0}
  std::vector<int> magnitude_bins;     // per op, 1..10
};

struct Policy {
  std::vector<SubPolicy> sub_policies;
  std::uint64_t data_size_target = 1;
};

inline bool sequencing_holds(const SubPolicy& sub, const std::vector<CatalogOp>& catalog) {
  for (std::size_t i = 0; i < sub.op_names.size(); ++i) {
    if (catalog_kind(catalog, sub.op_names[i]) != OpKind::Generation) continue;
    if (i + 1 >= sub.op_names.size() ||
        catalog_kind(catalog, sub.op_names[i + 1]) != OpKind::Distribution)
      return false;
  }
  return true;
}

// Random policy: 1-5 sub-policies of 1-3 sampled ops each; any generation op
// gets its distribution op appended right after.
inline Policy sample_policy(const std::vector<CatalogOp>& catalog, RngStream& rng) {
  if (catalog.empty()) throw Error(Errc::InvalidParams, "operation catalog is empty");
  std::vector<const CatalogOp*> distribution_ops;
  for (const CatalogOp& op : catalog)
    if (op.kind == OpKind::Distribution) distribution_ops.push_back(&op);

  Policy policy;
  int n_sub = int(rng.uniform_int(1, 5));
  for (int s = 0; s < n_sub; ++s) {
    SubPolicy sub;
    int n_ops = int(rng.uniform_int(1, 3));
    for (int k = 0; k < n_ops; ++k) {
      const CatalogOp& op = catalog[std::size_t(rng.uniform_int(0, std::int64_t(catalog.size()) - 1))];
      sub.op_names.push_back(op.name);
      if (op.kind == OpKind::Generation && !distribution_ops.empty()) {
        const CatalogOp* dist =
            distribution_ops[std::size_t(rng.uniform_int(0, std::int64_t(distribution_ops.size()) - 1))];
        sub.op_names.push_back(dist->name);
      }
    }
    for (std::size_t i = 0; i < sub.op_names.size(); ++i) {
      sub.probabilities.push_back(double(rng.uniform_int(0, 10)) / 10.0);
      sub.magnitude_bins.push_back(int(rng.uniform_int(1, kMagnitudeBins)));
    }
    policy.sub_policies.push_back(std::move(sub));
  }
  return policy;
}

// IncreaseSize keeps the op sequences and only nudges magnitudes;
// ChangeSetting throws the sub-policies away and re-samples.
inline Policy update_policy(const Policy& policy, const Decision& decision,
                            const std::vector<CatalogOp>& catalog, RngStream& rng) {
  Policy next = policy;
  if (decision.kind == Decision::Kind::IncreaseSize) {
    for (SubPolicy& sub : next.sub_policies)
      for (int& bin : sub.magnitude_bins) {
        int delta = rng.bernoulli(0.5) ? 1 : -1;
        bin = std::clamp(bin + delta, 1, kMagnitudeBins);
      }
    next.data_size_target =
        std::max<std::uint64_t>(decision.n_star, policy.data_size_target + 1);
  } else {
    Policy resampled = sample_policy(catalog, rng);
    next.sub_policies = std::move(resampled.sub_policies);
    // data_size_target intentionally unchanged
  }
  return next;
}

}  // namespace asda::opt
