#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "asda/capture/render.hpp"
#include "asda/capture/trajectory.hpp"
#include "asda/pre/pipeline.hpp"

namespace asda {

inline const char* kToolVersion = "0.1.0";

struct DatasetRecord {
  std::string image_path;       // relative to the output root
  std::string annotation_path;  // relative to the output root
  std::string scene_id;
  int variation_index = 0;
  int frame_index = 0;
  std::string digest;
  bool augmented = false;
  std::string source_image;              // augmented records: the original
  std::vector<std::string> ops_applied;  // augmented records: which ops fired
};

// Stable hash over the provenance list; identifies a scene variation.
inline std::string provenance_digest(const AugmentedScene& scene) {
  std::string text;
  for (const ProvenanceEntry& e : scene.provenance) {
    text += e.op + "|" + std::to_string(e.layer) + "|" + std::to_string(e.seed) + "|" +
            (e.applied ? "1" : "0") + "|" + e.reason;
    for (const auto& [k, v] : e.resolved) text += "|" + k + "=" + to_text(v);
    text += ";";
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash_str(text)));
  return buf;
}

inline nlohmann::json annotation_to_json(const FrameAnnotation& ann) {
  nlohmann::json doc;
  doc["scene_id"] = ann.scene_id;
  doc["variation_index"] = ann.variation_index;
  doc["frame_index"] = ann.frame_index;
  doc["tags"] = {{"weather", ann.weather},
                 {"weather_intensity", ann.weather_intensity},
                 {"time_of_day", ann.time_of_day},
                 {"ambient_level", ann.ambient_level},
                 {"spotlights", ann.spotlight_count}};
  nlohmann::json instances = nlohmann::json::array();
  for (const InstanceAnnotation& inst : ann.instances) {
    instances.push_back(
        {{"class", inst.class_name},
         {"bbox", {inst.x_min, inst.y_min, inst.x_max, inst.y_max}},
         {"visibility", inst.visibility},
         {"position", {inst.position.x, inst.position.y, inst.position.z}},
         {"rotation", {inst.rotation.x, inst.rotation.y, inst.rotation.z}},
         {"scale", {inst.scale.x, inst.scale.y, inst.scale.z}}});
  }
  doc["instances"] = instances;
  return doc;
}

inline FrameAnnotation annotation_from_json(const nlohmann::json& doc) {
  FrameAnnotation ann;
  ann.scene_id = doc.value("scene_id", "");
  ann.variation_index = doc.value("variation_index", 0);
  ann.frame_index = doc.value("frame_index", 0);
  if (doc.contains("tags")) {
    const auto& t = doc["tags"];
    ann.weather = t.value("weather", "sun");
    ann.weather_intensity = t.value("weather_intensity", 0.0);
    ann.time_of_day = t.value("time_of_day", 12.0);
    ann.ambient_level = t.value("ambient_level", 0.7);
    ann.spotlight_count = t.value("spotlights", 0);
  }
  if (doc.contains("instances"))
    for (const auto& ji : doc["instances"]) {
      InstanceAnnotation inst;
      inst.class_name = ji.value("class", "");
      const auto& b = ji["bbox"];
      inst.x_min = b[0];
      inst.y_min = b[1];
      inst.x_max = b[2];
      inst.y_max = b[3];
      inst.visibility = ji.value("visibility", 0.0);
      if (ji.contains("position"))
        inst.position = {ji["position"][0], ji["position"][1], ji["position"][2]};
      if (ji.contains("rotation"))
        inst.rotation = {ji["rotation"][0], ji["rotation"][1], ji["rotation"][2]};
      if (ji.contains("scale"))
        inst.scale = {ji["scale"][0], ji["scale"][1], ji["scale"][2]};
      ann.instances.push_back(std::move(inst));
    }
  return ann;
}

inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw Error(Errc::IoError, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::IoError, "cannot move manifest into place: " + ec.message());
}

// Writes the manifest: stable record ordering, duplicate keys rejected.
inline void write_dataset(const std::vector<DatasetRecord>& records,
                          const std::filesystem::path& manifest_path,
                          std::uint64_t master_seed) {
  std::vector<DatasetRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const DatasetRecord& a, const DatasetRecord& b) {
                     if (a.scene_id != b.scene_id) return a.scene_id < b.scene_id;
                     if (a.variation_index != b.variation_index)
                       return a.variation_index < b.variation_index;
                     if (a.frame_index != b.frame_index) return a.frame_index < b.frame_index;
                     return a.augmented < b.augmented;
                   });
  std::set<std::string> keys;
  for (const DatasetRecord& r : sorted) {
    std::string key = r.scene_id + "/" + std::to_string(r.variation_index) + "/" +
                      std::to_string(r.frame_index) + (r.augmented ? "/aug" : "");
    if (!keys.insert(key).second)
      throw Error(Errc::DuplicateRecord, "duplicate record key " + key);
  }

  nlohmann::json doc;
  doc["tool_version"] = kToolVersion;
  doc["master_seed"] = master_seed;
  nlohmann::json recs = nlohmann::json::array();
  for (const DatasetRecord& r : sorted) {
    nlohmann::json jr{{"image", r.image_path},
                      {"annotation", r.annotation_path},
                      {"scene_id", r.scene_id},
                      {"variation_index", r.variation_index},
                      {"frame_index", r.frame_index},
                      {"digest", r.digest}};
    if (r.augmented) {
      jr["augmented"] = true;
      jr["source_image"] = r.source_image;
      jr["ops_applied"] = r.ops_applied;
    }
    recs.push_back(std::move(jr));
  }
  doc["records"] = recs;
  write_text_atomic(manifest_path, doc.dump(2) + "\n");
}

struct CaptureConfig {
  CameraIntrinsics camera;
  std::filesystem::path output_dir;
  std::uint64_t master_seed = 0;
  int workers = 1;
};

struct CollectResult {
  std::vector<DatasetRecord> records;
  std::filesystem::path manifest_path;
  std::filesystem::path provenance_path;
};

// The data-collection step: pose generation, per-frame FOV resolution,
// rasterization and dataset emission. Frames are independent, so they can be
// distributed over workers without changing a single output byte.
inline CollectResult collect_data(const std::vector<AugmentedScene>& scenes,
                                  const CaptureConfig& config) {
  namespace fs = std::filesystem;
  config.camera.validate();
  std::error_code ec;
  fs::create_directories(config.output_dir / "images", ec);
  fs::create_directories(config.output_dir / "annotations", ec);
  if (!fs::exists(config.output_dir / "images") ||
      !fs::exists(config.output_dir / "annotations"))
    throw Error(Errc::IoError, "cannot create output directories under '" +
                                   config.output_dir.string() + "'");

  struct FrameTask {
    std::size_t scene_idx;
    TrajectoryPose pose;
  };
  std::vector<FrameTask> tasks;
  std::vector<std::vector<TrajectoryPose>> all_poses(scenes.size());
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    all_poses[s] = generate_poses(scenes[s], config.camera);
    for (const TrajectoryPose& pose : all_poses[s]) tasks.push_back({s, pose});
  }

  std::vector<DatasetRecord> records(tasks.size());
  std::vector<std::vector<FovSpawn>> spawn_logs(tasks.size());

  parallel_for(tasks.size(), config.workers, [&](std::size_t i) {
    const FrameTask& task = tasks[i];
    const AugmentedScene& scene = scenes[task.scene_idx];
    std::vector<AssetInstance> extra =
        resolve_fov_obstacles(scene, task.pose, config.camera, &spawn_logs[i]);
    RenderedFrame frame = render_frame(scene, task.pose, config.camera, extra);

    std::string stem = scene.scene_id + "_" + std::to_string(scene.variation_index) + "_" +
                       std::to_string(task.pose.frame_index);
    std::string image_rel = "images/" + stem + ".ppm";
    std::string ann_rel = "annotations/" + stem + ".json";
    write_ppm(config.output_dir / image_rel, frame.image);
    {
      std::ofstream out(config.output_dir / ann_rel);
      if (!out) throw Error(Errc::IoError, "cannot write '" + ann_rel + "'");
      out << annotation_to_json(frame.annotation).dump(2) << "\n";
    }
    DatasetRecord rec;
    rec.image_path = image_rel;
    rec.annotation_path = ann_rel;
    rec.scene_id = scene.scene_id;
    rec.variation_index = scene.variation_index;
    rec.frame_index = task.pose.frame_index;
    rec.digest = provenance_digest(scene);
    records[i] = std::move(rec);
  });

  CollectResult result;
  result.records = std::move(records);
  result.manifest_path = config.output_dir / "manifest.json";
  result.provenance_path = config.output_dir / "provenance.json";

  write_dataset(result.records, result.manifest_path, config.master_seed);

  // provenance: pipeline history per variation, plus capture-time spawns
  nlohmann::json prov;
  prov["tool_version"] = kToolVersion;
  prov["master_seed"] = config.master_seed;
  nlohmann::json variations = nlohmann::json::array();
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    const AugmentedScene& scene = scenes[s];
    nlohmann::json jv;
    jv["scene_id"] = scene.scene_id;
    jv["variation_index"] = scene.variation_index;
    jv["digest"] = provenance_digest(scene);
    nlohmann::json ops = nlohmann::json::array();
    for (const ProvenanceEntry& e : scene.provenance) {
      nlohmann::json je{{"op", e.op},
                        {"layer", e.layer},
                        {"seed", e.seed},
                        {"applied", e.applied}};
      if (!e.reason.empty()) je["reason"] = e.reason;
      if (!e.resolved.empty()) {
        nlohmann::json jr;
        for (const auto& [k, v] : e.resolved) jr[k] = detail::value_to(v);
        je["resolved"] = jr;
      }
      ops.push_back(std::move(je));
    }
    jv["operations"] = ops;
    nlohmann::json insts = nlohmann::json::array();
    for (const AssetInstance& inst : scene.instances)
      insts.push_back({{"prototype", inst.prototype},
                       {"role", role_name(inst.role)},
                       {"variant_index", inst.variant_index},
                       {"region", inst.anchor_region},
                       {"position", {inst.position.x, inst.position.y, inst.position.z}}});
    jv["instances"] = insts;
    nlohmann::json spawns = nlohmann::json::array();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].scene_idx != s) continue;
      for (const FovSpawn& sp : spawn_logs[i])
        spawns.push_back({{"frame_index", sp.frame_index},
                          {"obstacle", sp.obstacle_asset},
                          {"position", {sp.position.x, sp.position.y, sp.position.z}}});
    }
    jv["fov_spawns"] = spawns;
    variations.push_back(std::move(jv));
  }
  prov["variations"] = variations;
  write_text_atomic(result.provenance_path, prov.dump(2) + "\n");
  return result;
}

}  // namespace asda
