#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asda/core/error.hpp"
#include "asda/scene/assets.hpp"
#include "asda/scene/scene_graph.hpp"

namespace asda {

using json = nlohmann::json;

enum class BaseMapKind { Designed3d, Map3d, NerfBlock };

inline const char* base_map_kind_name(BaseMapKind k) {
  switch (k) {
    case BaseMapKind::Designed3d: return "designed3d";
    case BaseMapKind::Map3d: return "map3d";
    case BaseMapKind::NerfBlock: return "nerf_block";
  }
  return "?";
}

inline BaseMapKind base_map_kind_from(const std::string& s) {
  if (s == "designed3d") return BaseMapKind::Designed3d;
  if (s == "map3d") return BaseMapKind::Map3d;
  if (s == "nerf_block") return BaseMapKind::NerfBlock;
  throw Error(Errc::SchemaMismatch, "unknown base_map_kind '" + s + "'");
}

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

// geodata_ref: either a fixture file or a remote query descriptor.
struct GeodataRef {
  std::string fixture_path;  // resolved relative to the spec file
  bool remote = false;
  std::array<double, 4> bbox{0, 0, 0, 0};  // south, west, north, east
  std::string feature_class = "building";
};

// A flat-shaded box belonging to the base map (derived from geodata for
// map3d scenes so the renderer has ground/building geometry to draw).
struct BaseBox {
  Aabb aabb;  // world frame
  Material material;
  std::string label;
};

struct SceneSpecification {
  std::string scene_id;
  std::string scene_class;
  BaseMapKind base_map_kind = BaseMapKind::Designed3d;
  std::optional<SceneGraph> graph;
  std::optional<GeodataRef> geodata_ref;
  std::vector<AssetPrototype> asset_catalog;
  GlobalState default_global;
  GeoPoint map_origin;
  std::vector<BaseBox> base_boxes;  // render geometry cache for map3d scenes

  const AssetPrototype* find_asset(const std::string& name) const {
    for (const auto& a : asset_catalog)
      if (a.name == name) return &a;
    return nullptr;
  }
};

namespace detail {

inline Vec3 vec3_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw Error(Errc::SchemaMismatch, where + " must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json vec3_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline Aabb aabb_from(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("min") || !j.contains("max"))
    throw Error(Errc::MissingField, where + ".min/max");
  return {vec3_from(j["min"], where + ".min"), vec3_from(j["max"], where + ".max")};
}

inline json aabb_to(const Aabb& b) {
  return json{{"min", vec3_to(b.min)}, {"max", vec3_to(b.max)}};
}

inline Value value_from(const json& j) {
  if (j.is_number()) return Value(j.get<double>());
  if (j.is_string()) return Value(j.get<std::string>());
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_array()) {
    std::vector<Value> l;
    for (const auto& e : j) l.push_back(value_from(e));
    return Value(std::move(l));
  }
  throw Error(Errc::SchemaMismatch, "attribute values must be scalar or list");
}

inline json value_to(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Number: return v.num;
    case Value::Kind::String: return v.str;
    case Value::Kind::Bool: return v.boolean;
    case Value::Kind::List: {
      json a = json::array();
      for (const auto& e : v.list) a.push_back(value_to(e));
      return a;
    }
  }
  return nullptr;
}

inline Material material_from(const json& j, const std::string& where) {
  Material m;
  if (j.contains("rgb")) m.rgb = vec3_from(j["rgb"], where + ".rgb");
  if (j.contains("texture")) m.texture = j["texture"].get<std::string>();
  return m;
}

inline json material_to(const Material& m) {
  return json{{"rgb", vec3_to(m.rgb)}, {"texture", m.texture}};
}

inline GlobalState global_from(const json& j) {
  GlobalState g;
  if (j.contains("weather")) {
    const json& w = j["weather"];
    std::string cat = w.value("category", "sun");
    if (cat == "rain") g.weather = Weather::Rain;
    else if (cat == "sun") g.weather = Weather::Sun;
    else if (cat == "snow") g.weather = Weather::Snow;
    else throw Error(Errc::SchemaMismatch, "unknown weather category '" + cat + "'");
    g.weather_intensity = std::clamp(w.value("intensity", 0.0), 0.0, 1.0);
  }
  if (j.contains("time_of_day")) g.time_of_day = j["time_of_day"].get<double>();
  if (j.contains("ambient_level"))
    g.ambient_level = std::clamp(j["ambient_level"].get<double>(), 0.0, 1.0);
  if (j.contains("spotlights"))
    for (const auto& s : j["spotlights"])
      g.spotlights.push_back({vec3_from(s["position"], "spotlight.position"),
                              std::clamp(s.value("intensity", 1.0), 0.0, 1.0)});
  return g;
}

inline json global_to(const GlobalState& g) {
  json spots = json::array();
  for (const auto& s : g.spotlights)
    spots.push_back({{"position", vec3_to(s.position)}, {"intensity", s.intensity}});
  return json{{"weather", {{"category", weather_name(g.weather)},
                           {"intensity", g.weather_intensity}}},
              {"time_of_day", g.time_of_day},
              {"ambient_level", g.ambient_level},
              {"spotlights", spots}};
}

}  // namespace detail

// Parses a scene specification document. Strict about top-level keys and
// validates the embedded graph when present.
inline SceneSpecification parse_scene_spec(const json& doc,
                                           const std::filesystem::path& base_dir = {}) {
  using detail::vec3_from;
  if (!doc.is_object()) throw Error(Errc::SchemaMismatch, "spec must be a JSON object");

  static const std::vector<std::string> known{
      "scene_id", "scene_class", "base_map_kind", "graph",     "geodata_ref",
      "map_origin", "assets",     "default_global"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == it.key();
    if (!ok) throw Error(Errc::SchemaMismatch, "unknown top-level key '" + it.key() + "'");
  }

  for (const char* field : {"scene_id", "scene_class", "base_map_kind"})
    if (!doc.contains(field)) throw Error(Errc::MissingField, field);

  SceneSpecification spec;
  spec.scene_id = doc["scene_id"].get<std::string>();
  if (spec.scene_id.empty()) throw Error(Errc::SchemaMismatch, "scene_id must be nonempty");
  spec.scene_class = doc["scene_class"].get<std::string>();
  spec.base_map_kind = base_map_kind_from(doc["base_map_kind"].get<std::string>());

  if (doc.contains("map_origin")) {
    spec.map_origin.lat = doc["map_origin"].value("lat", 0.0);
    spec.map_origin.lon = doc["map_origin"].value("lon", 0.0);
  }

  bool has_graph = doc.contains("graph") && !doc["graph"].is_null();
  bool has_geo = doc.contains("geodata_ref") && !doc["geodata_ref"].is_null();
  bool needs_geo = spec.base_map_kind == BaseMapKind::Map3d;
  if (needs_geo && !has_geo)
    throw Error(Errc::InconsistentBaseMap, "base_map_kind=map3d requires geodata_ref");
  if (!needs_geo && has_geo)
    throw Error(Errc::InconsistentBaseMap,
                "geodata_ref is only valid for base_map_kind=map3d");
  if (needs_geo && has_graph)
    throw Error(Errc::InconsistentBaseMap, "map3d scene must not embed a graph");

  if (has_graph) {
    const json& g = doc["graph"];
    if (!g.is_object() || !g.contains("nodes"))
      throw Error(Errc::MissingField, "graph.nodes");
    SceneGraph graph;
    for (const json& jn : g["nodes"]) {
      SceneNode n;
      if (!jn.contains("id")) throw Error(Errc::MissingField, "node.id");
      n.id = jn["id"].get<std::string>();
      if (jn.contains("parent_id") && !jn["parent_id"].is_null())
        n.parent_id = jn["parent_id"].get<std::string>();
      n.semantic_class = jn.value("semantic_class", "");
      if (jn.contains("translation")) n.local_translation = vec3_from(jn["translation"], "translation");
      if (jn.contains("rotation")) n.local_rotation = vec3_from(jn["rotation"], "rotation");
      if (jn.contains("scale")) n.local_scale = vec3_from(jn["scale"], "scale");
      if (jn.contains("aabb")) n.aabb = detail::aabb_from(jn["aabb"], "node.aabb");
      if (jn.contains("attributes"))
        for (auto it = jn["attributes"].begin(); it != jn["attributes"].end(); ++it)
          n.attributes[it.key()] = detail::value_from(it.value());
      if (jn.contains("material")) n.material = detail::material_from(jn["material"], "node.material");
      graph.add_node(std::move(n));
    }
    ValidationReport report = validate_scene_graph(graph);
    if (!report.ok())
      throw Error(Errc::SchemaMismatch,
                  "invalid scene graph: " + report.violations.front().code + " at node '" +
                      report.violations.front().node_id + "'");
    spec.graph = std::move(graph);
  }

  if (has_geo) {
    const json& gr = doc["geodata_ref"];
    GeodataRef ref;
    if (gr.is_string()) {
      std::filesystem::path p = gr.get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      ref.fixture_path = p.string();
    } else if (gr.is_object() && gr.contains("remote")) {
      ref.remote = true;
      const json& r = gr["remote"];
      if (r.contains("bbox")) {
        const json& b = r["bbox"];
        if (!b.is_array() || b.size() != 4)
          throw Error(Errc::SchemaMismatch, "geodata_ref.remote.bbox must have 4 numbers");
        for (int i = 0; i < 4; ++i) ref.bbox[i] = b[i].get<double>();
      }
      ref.feature_class = r.value("feature_class", "building");
    } else {
      throw Error(Errc::SchemaMismatch, "geodata_ref must be a path or remote descriptor");
    }
    spec.geodata_ref = std::move(ref);
  }

  if (doc.contains("assets")) {
    for (const json& ja : doc["assets"]) {
      AssetPrototype a;
      if (!ja.contains("name")) throw Error(Errc::MissingField, "asset.name");
      a.name = ja["name"].get<std::string>();
      if (!ja.contains("aabb")) throw Error(Errc::MissingField, "asset.aabb ('" + a.name + "')");
      a.aabb = detail::aabb_from(ja["aabb"], "asset.aabb");
      if (ja.contains("material")) a.default_material = detail::material_from(ja["material"], "asset.material");
      if (ja.contains("textures"))
        for (const auto& t : ja["textures"]) a.texture_set.push_back(t.get<std::string>());
      a.textures_required = ja.value("textures_required", false);
      a.particle = ja.value("particle", false);
      spec.asset_catalog.push_back(std::move(a));
    }
  }

  if (doc.contains("default_global")) spec.default_global = detail::global_from(doc["default_global"]);
  return spec;
}

inline json scene_spec_to_json(const SceneSpecification& spec) {
  json doc;
  doc["scene_id"] = spec.scene_id;
  doc["scene_class"] = spec.scene_class;
  doc["base_map_kind"] = base_map_kind_name(spec.base_map_kind);
  if (spec.map_origin.lat != 0.0 || spec.map_origin.lon != 0.0)
    doc["map_origin"] = {{"lat", spec.map_origin.lat}, {"lon", spec.map_origin.lon}};
  if (spec.graph) {
    json nodes = json::array();
    for (const std::string& id : spec.graph->insertion_order()) {
      const SceneNode& n = spec.graph->node(id);
      json jn{{"id", n.id}, {"semantic_class", n.semantic_class}};
      if (n.parent_id) jn["parent_id"] = *n.parent_id;
      jn["translation"] = detail::vec3_to(n.local_translation);
      jn["rotation"] = detail::vec3_to(n.local_rotation);
      jn["scale"] = detail::vec3_to(n.local_scale);
      jn["aabb"] = detail::aabb_to(n.aabb);
      if (!n.attributes.empty()) {
        json attrs;
        for (const auto& [k, v] : n.attributes) attrs[k] = detail::value_to(v);
        jn["attributes"] = attrs;
      }
      if (n.material) jn["material"] = detail::material_to(*n.material);
      nodes.push_back(std::move(jn));
    }
    doc["graph"] = {{"nodes", nodes}};
  }
  if (spec.geodata_ref) {
    if (spec.geodata_ref->remote)
      doc["geodata_ref"] = {{"remote",
                             {{"bbox", spec.geodata_ref->bbox}, {"feature_class", spec.geodata_ref->feature_class}}}};
    else
      doc["geodata_ref"] = spec.geodata_ref->fixture_path;
  }
  json assets = json::array();
  for (const auto& a : spec.asset_catalog) {
    json ja{{"name", a.name},
            {"aabb", detail::aabb_to(a.aabb)},
            {"material", detail::material_to(a.default_material)}};
    if (!a.texture_set.empty()) ja["textures"] = a.texture_set;
    if (a.textures_required) ja["textures_required"] = true;
    if (a.particle) ja["particle"] = true;
    assets.push_back(std::move(ja));
  }
  doc["assets"] = assets;
  doc["default_global"] = detail::global_to(spec.default_global);
  return doc;
}

inline SceneSpecification load_scene_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot read '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaMismatch, std::string("bad JSON: ") + e.what());
  }
  return parse_scene_spec(doc, path.parent_path());
}

}  // namespace asda
