#pragma once

#include <string>
#include <vector>

#include "asda/capture/dataset.hpp"
#include "asda/post/ops.hpp"
#include "asda/pre/params.hpp"

namespace asda::post {

struct AugmentOpSpec {
  std::string name;  // rotate | flip | random_erasing | zoom | grid_distortion | add_effect
  double probability = 1.0;
  ParamMap params;
};

inline const std::vector<std::string>& builtin_augment_ops() {
  static const std::vector<std::string> names{"rotate",          "flip", "random_erasing",
                                              "zoom",            "grid_distortion",
                                              "add_effect"};
  return names;
}

inline void validate_augment_spec(const AugmentOpSpec& spec) {
  const auto& names = builtin_augment_ops();
  if (std::find(names.begin(), names.end(), spec.name) == names.end())
    throw Error(Errc::UnknownOperation, "augmentation '" + spec.name + "' is not registered");
  if (!(spec.probability >= 0 && spec.probability <= 1))
    throw Error(Errc::InvalidParams, "probability must be in [0,1]");
  const ParamMap& p = spec.params;
  if (spec.name == "rotate") {
    double l = param_num(p, "max_left_rotation", 10);
    double r = param_num(p, "max_right_rotation", 10);
    if (!(l >= 0 && l <= 45 && r >= 0 && r <= 45))
      throw Error(Errc::InvalidRange, "rotation limits must be in [0,45]");
  } else if (spec.name == "flip") {
    std::string axis = param_str(p, "axis", "either");
    if (axis != "h" && axis != "v" && axis != "either")
      throw Error(Errc::InvalidParams, "flip axis must be h, v or either");
  } else if (spec.name == "random_erasing") {
    auto r = param_num_list(p, "area", {0.02, 0.2});
    if (r.size() != 2 || !(r[0] > 0 && r[1] <= 0.4 && r[0] <= r[1]))
      throw Error(Errc::InvalidRange, "erase area range must lie in (0, 0.4]");
  } else if (spec.name == "zoom") {
    auto r = param_num_list(p, "factor", {1.0, 1.5});
    if (r.size() != 2 || !(r[0] >= 1.0 && r[1] <= 2.0 && r[0] <= r[1]))
      throw Error(Errc::InvalidRange, "zoom factor range must lie in [1, 2]");
  } else if (spec.name == "grid_distortion") {
    if (param_num(p, "grid", 4) < 2) throw Error(Errc::InvalidRange, "grid must be >= 2");
    if (param_num(p, "max_disp", 8) < 0)
      throw Error(Errc::InvalidRange, "max_disp must be >= 0");
  } else if (spec.name == "add_effect") {
    std::string effect = param_str(p, "effect_name", "visibility");
    if (!effect_registry().count(effect))
      throw Error(Errc::UnknownEffect, "effect '" + effect + "' is not registered");
    double intensity = param_num(p, "intensity", 0.5);
    if (!(intensity >= 0 && intensity <= 1))
      throw Error(Errc::InvalidRange, "intensity must be in [0,1]");
  }
}

struct PostOpApplication {
  std::string op;
  bool applied = false;
  ParamMap resolved;
};

// Probability-gated augmentations for collected frames. Each record gets an
// RNG stream derived from (seed, record key, op ordinal): worker-count
// independent, like the pre-processing side.
class PostPipeline {
 public:
  explicit PostPipeline(std::uint64_t master_seed) : master_seed_(master_seed) {}

  void add(AugmentOpSpec spec) {
    validate_augment_spec(spec);
    ops_.push_back(std::move(spec));
  }
  const std::vector<AugmentOpSpec>& ops() const { return ops_; }
  std::uint64_t master_seed() const { return master_seed_; }

  std::vector<PostOpApplication> apply(RasterImage& image, FrameAnnotation& annotation,
                                       const std::string& record_key) const {
    std::vector<PostOpApplication> log;
    for (std::size_t ordinal = 0; ordinal < ops_.size(); ++ordinal) {
      const AugmentOpSpec& op = ops_[ordinal];
      PostOpApplication app;
      app.op = op.name;
      RngStream rng(derive_seed(master_seed_, "post", record_key, std::uint64_t(ordinal)));
      if (!(rng.uniform() < op.probability)) {
        log.push_back(std::move(app));
        continue;
      }
      const ParamMap& p = op.params;
      if (op.name == "rotate") {
        double angle = 0;
        image = aug_rotate(image, annotation, param_num(p, "max_left_rotation", 10),
                           param_num(p, "max_right_rotation", 10), rng, &angle);
        app.resolved["angle_deg"] = angle;
      } else if (op.name == "flip") {
        char axis = 0;
        image = aug_flip(image, annotation, param_str(p, "axis", "either"), rng, &axis);
        app.resolved["axis"] = std::string(1, axis);
      } else if (op.name == "random_erasing") {
        auto r = param_num_list(p, "area", {0.02, 0.2});
        image = aug_random_erasing(image, annotation, r[0], r[1], rng);
      } else if (op.name == "zoom") {
        auto r = param_num_list(p, "factor", {1.0, 1.5});
        double f = 1;
        image = aug_zoom(image, annotation, r[0], r[1], rng, &f);
        app.resolved["factor"] = f;
      } else if (op.name == "grid_distortion") {
        image = aug_grid_distortion(image, annotation, int(param_num(p, "grid", 4)),
                                    param_num(p, "max_disp", 8), rng);
      } else if (op.name == "add_effect") {
        image = aug_add_effect(image, annotation, param_str(p, "effect_name", "visibility"),
                               param_num(p, "intensity", 0.5), rng);
      }
      app.applied = true;
      log.push_back(std::move(app));
    }
    return log;
  }

 private:
  std::uint64_t master_seed_;
  std::vector<AugmentOpSpec> ops_;
};

struct PostRunResult {
  std::vector<DatasetRecord> augmented;
  std::vector<RunError> errors;
  std::map<std::string, std::size_t> applied_counts;
};

// File-level runner: reads each original record, applies the gated ops and
// writes `<stem>_aug` siblings. Originals are preserved untouched.
inline PostRunResult postproc_run(const PostPipeline& pipeline,
                                  const std::vector<DatasetRecord>& records,
                                  const std::filesystem::path& dataset_dir, int workers = 1) {
  std::vector<std::optional<DatasetRecord>> slots(records.size());
  std::vector<std::optional<RunError>> errors(records.size());
  std::vector<std::vector<PostOpApplication>> logs(records.size());

  parallel_for(records.size(), workers, [&](std::size_t i) {
    const DatasetRecord& rec = records[i];
    if (rec.augmented) return;
    try {
      RasterImage image = read_ppm(dataset_dir / rec.image_path);
      FrameAnnotation annotation;
      {
        std::ifstream in(dataset_dir / rec.annotation_path);
        if (!in) throw Error(Errc::IoError, "cannot read '" + rec.annotation_path + "'");
        nlohmann::json doc;
        in >> doc;
        annotation = annotation_from_json(doc);
      }
      std::string key = rec.scene_id + "/" + std::to_string(rec.variation_index) + "/" +
                        std::to_string(rec.frame_index);
      logs[i] = pipeline.apply(image, annotation, key);

      auto stem_of = [](const std::string& path) {
        std::string s = path;
        auto dot = s.rfind('.');
        return dot == std::string::npos ? s : s.substr(0, dot);
      };
      DatasetRecord aug = rec;
      aug.augmented = true;
      aug.source_image = rec.image_path;
      aug.image_path = stem_of(rec.image_path) + "_aug.ppm";
      aug.annotation_path = stem_of(rec.annotation_path) + "_aug.json";
      for (const PostOpApplication& app : logs[i])
        if (app.applied) aug.ops_applied.push_back(app.op);
      write_ppm(dataset_dir / aug.image_path, image);
      {
        std::ofstream out(dataset_dir / aug.annotation_path);
        if (!out) throw Error(Errc::IoError, "cannot write '" + aug.annotation_path + "'");
        out << annotation_to_json(annotation).dump(2) << "\n";
      }
      slots[i] = std::move(aug);
    } catch (const std::exception& e) {
      errors[i] = RunError{rec.scene_id, rec.variation_index, "postproc", e.what()};
    }
  });

  PostRunResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (slots[i]) result.augmented.push_back(std::move(*slots[i]));
    if (errors[i]) result.errors.push_back(std::move(*errors[i]));
    for (const PostOpApplication& app : logs[i])
      if (app.applied) ++result.applied_counts[app.op];
  }
  return result;
}

}  // namespace asda::post
