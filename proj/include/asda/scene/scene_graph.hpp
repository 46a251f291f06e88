#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asda/core/error.hpp"
#include "asda/core/value.hpp"
#include "asda/core/vec3.hpp"

namespace asda {

struct Material {
  Vec3 rgb{0.7, 0.7, 0.7};
  std::string texture;

  bool operator==(const Material& o) const { return rgb == o.rgb && texture == o.texture; }
};

struct SceneNode {
  std::string id;
  std::optional<std::string> parent_id;
  std::vector<std::string> children;
  std::string semantic_class;
  Vec3 local_translation{0, 0, 0};
  Vec3 local_rotation{0, 0, 0};  // Euler ZYX, radians
  Vec3 local_scale{1, 1, 1};
  Aabb aabb;
  AttrMap attributes;
  std::optional<Material> material;

  Affine local_transform() const {
    return Affine::trs(local_translation, local_rotation, local_scale);
  }
};

struct Violation {
  std::string node_id;
  std::string code;    // "cycle", "degenerate aabb", ...
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Hierarchical scene model. Nodes are stored flat and addressed by id;
// child order follows insertion order so traversal is deterministic.
class SceneGraph {
 public:
  SceneGraph() = default;

  SceneNode& add_node(SceneNode node) {
    order_.push_back(node.id);
    auto [it, inserted] = nodes_.emplace(node.id, std::move(node));
    if (!inserted) {
      order_.pop_back();
      throw Error(Errc::SchemaMismatch, "duplicate node id '" + it->first + "'");
    }
    SceneNode& n = it->second;
    if (n.parent_id) {
      auto pit = nodes_.find(*n.parent_id);
      if (pit != nodes_.end()) pit->second.children.push_back(n.id);
    }
    return n;
  }

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }

  bool has(const std::string& id) const { return nodes_.count(id) != 0; }
  const SceneNode& node(const std::string& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw Error(Errc::UnknownNode, "no node '" + id + "'");
    return it->second;
  }
  SceneNode& node(const std::string& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw Error(Errc::UnknownNode, "no node '" + id + "'");
    return it->second;
  }

  // ids in insertion order
  const std::vector<std::string>& insertion_order() const { return order_; }

  std::optional<std::string> root_id() const {
    for (const std::string& id : order_) {
      const SceneNode& n = nodes_.at(id);
      if (!n.parent_id && n.semantic_class == "world") return id;
    }
    return std::nullopt;
  }

  // Preorder ids starting at the root; nodes unreachable from it are omitted.
  std::vector<std::string> preorder() const {
    std::vector<std::string> out;
    auto root = root_id();
    if (!root) return out;
    std::vector<std::string> stack{*root};
    std::set<std::string> seen;
    while (!stack.empty()) {
      std::string id = stack.back();
      stack.pop_back();
      if (!seen.insert(id).second) continue;  // guard against malformed cycles
      auto it = nodes_.find(id);
      if (it == nodes_.end()) continue;
      out.push_back(id);
      const auto& ch = it->second.children;
      for (auto rit = ch.rbegin(); rit != ch.rend(); ++rit) stack.push_back(*rit);
    }
    return out;
  }

 private:
  std::map<std::string, SceneNode> nodes_;
  std::vector<std::string> order_;
};

// Checks every structural invariant; violations are report entries, never throws.
inline ValidationReport validate_scene_graph(const SceneGraph& graph) {
  ValidationReport report;
  auto add = [&](const std::string& id, const std::string& code, const std::string& detail) {
    report.violations.push_back({id, code, detail});
  };

  std::vector<std::string> roots;
  for (const std::string& id : graph.insertion_order()) {
    const SceneNode& n = graph.node(id);
    if (!n.parent_id) {
      roots.push_back(id);
      if (n.semantic_class != "world")
        add(id, "root class", "root node must have semantic_class 'world'");
    } else if (!graph.has(*n.parent_id)) {
      add(id, "missing parent", "parent '" + *n.parent_id + "' does not exist");
    }
    if (!(n.local_scale.x > 0 && n.local_scale.y > 0 && n.local_scale.z > 0))
      add(id, "nonpositive scale", "all scale components must be > 0");
    if (!n.aabb.valid())
      add(id, "degenerate aabb", "aabb.min must be <= aabb.max and finite");
    if (!n.local_translation.all_finite() || !n.local_rotation.all_finite() ||
        !n.local_scale.all_finite())
      add(id, "nonfinite", "transform components must be finite");
  }
  if (roots.empty() && !graph.empty())
    add("", "no root", "no parentless 'world' node");
  if (roots.size() > 1)
    add(roots[1], "multiple roots", "graph must have exactly one root");

  // cycle detection by walking parent chains
  for (const std::string& id : graph.insertion_order()) {
    std::set<std::string> seen{id};
    const SceneNode* cur = &graph.node(id);
    while (cur->parent_id && graph.has(*cur->parent_id)) {
      if (!seen.insert(*cur->parent_id).second) {
        add(id, "cycle", "parent chain loops back");
        break;
      }
      cur = &graph.node(*cur->parent_id);
    }
  }

  if (!roots.empty()) {
    std::set<std::string> reachable;
    for (const std::string& id : graph.preorder()) reachable.insert(id);
    for (const std::string& id : graph.insertion_order())
      if (!reachable.count(id))
        add(id, "unreachable", "not reachable from the root");
  }
  return report;
}

struct WorldTransform {
  Affine affine;
  Vec3 position;
  Vec3 rotation;  // Euler ZYX recovered from the composed linear part
  Vec3 scale;
};

// Composes local transforms root -> node.
inline WorldTransform world_transform(const SceneGraph& graph, const std::string& node_id) {
  if (!graph.has(node_id)) throw Error(Errc::UnknownNode, "no node '" + node_id + "'");

  std::vector<const SceneNode*> chain;
  const SceneNode* cur = &graph.node(node_id);
  std::set<std::string> seen;
  while (true) {
    if (!seen.insert(cur->id).second)
      throw Error(Errc::UnknownNode, "cycle through node '" + cur->id + "'");
    chain.push_back(cur);
    if (!cur->parent_id) break;
    cur = &graph.node(*cur->parent_id);
  }

  Affine world = Affine::identity();
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    world = world.compose((*it)->local_transform());

  WorldTransform out;
  out.affine = world;
  out.position = world.t;
  out.scale = {world.linear.col(0).norm(), world.linear.col(1).norm(),
               world.linear.col(2).norm()};
  Mat3 rot = world.linear;
  for (int j = 0; j < 3; ++j) {
    double s = out.scale[j];
    if (s > 0)
      for (int i = 0; i < 3; ++i) rot.m[i][j] /= s;
  }
  // Euler ZYX back out of the rotation matrix
  double sy = -rot.m[2][0];
  sy = std::max(-1.0, std::min(1.0, sy));
  double y = std::asin(sy);
  double x, z;
  if (std::abs(sy) < 1.0 - 1e-12) {
    x = std::atan2(rot.m[2][1], rot.m[2][2]);
    z = std::atan2(rot.m[1][0], rot.m[0][0]);
  } else {  // gimbal lock
    x = std::atan2(-rot.m[1][2], rot.m[1][1]);
    z = 0.0;
  }
  out.rotation = {x, y, z};
  return out;
}

// Attribute predicate for scene queries.
struct AttrFilter {
  enum class Op { Eq, Gt, Lt, Ge, Le };
  std::string key;
  Op op = Op::Eq;
  Value value;

  bool matches(const AttrMap& attrs) const {
    auto it = attrs.find(key);
    if (it == attrs.end()) return false;
    const Value& a = it->second;
    if (op == Op::Eq) return a == value;
    if (!a.is_number() || !value.is_number()) return false;
    switch (op) {
      case Op::Gt: return a.num > value.num;
      case Op::Lt: return a.num < value.num;
      case Op::Ge: return a.num >= value.num;
      case Op::Le: return a.num <= value.num;
      default: return false;
    }
  }
};

// Nodes matching class + all filters, in preorder.
inline std::vector<std::string> query_nodes(const SceneGraph& graph,
                                            const std::string& semantic_class,
                                            const std::vector<AttrFilter>& filters = {}) {
  std::vector<std::string> out;
  for (const std::string& id : graph.preorder()) {
    const SceneNode& n = graph.node(id);
    if (n.semantic_class != semantic_class) continue;
    bool ok = true;
    for (const AttrFilter& f : filters)
      if (!f.matches(n.attributes)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(id);
  }
  return out;
}

}  // namespace asda
