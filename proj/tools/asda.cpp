// asda: procedural scene augmentation and synthetic dataset generation.
//
//   asda generate --script strategy.asda --scenes <dir> --out <dir> --seed 42
//   asda optimize --config optimizer.json --history loc_history.jsonl
//   asda stats --dataset <dir>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asda/capture/dataset.hpp"
#include "asda/dist/geodata.hpp"
#include "asda/dsl/binder.hpp"
#include "asda/opt/loop.hpp"
#include "asda/post/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;
constexpr int kExitBudget = 3;

struct GenerateOptions {
  std::string script_path;
  std::string scenes_dir;
  std::string out_dir;
  std::uint64_t seed = 42;
  int max_variations = 1;
  int width = 256;
  int height = 256;
  double hfov_deg = 90.0;
  int workers = 1;
  bool dry_run = false;
};

std::vector<std::shared_ptr<const asda::SceneSpecification>> load_scene_dir(
    const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    fs::path p = entry.path();
    if (p.extension() != ".json") continue;
    if (p.string().ends_with(".geojson")) continue;
    files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  std::vector<std::shared_ptr<const asda::SceneSpecification>> specs;
  for (const fs::path& p : files) {
    asda::SceneSpecification spec = asda::load_scene_spec(p);
    asda::hydrate_base_geometry(spec);
    specs.push_back(std::make_shared<const asda::SceneSpecification>(std::move(spec)));
  }
  if (specs.empty())
    throw asda::Error(asda::Errc::IoError, "no scene specs (*.json) in '" + dir + "'");
  return specs;
}

int cmd_generate(const GenerateOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();

  std::string text;
  {
    std::ifstream in(opt.script_path);
    if (!in) {
      std::cerr << "error: cannot read script '" << opt.script_path << "'\n";
      return kExitFatal;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  asda::dsl::StrategyScript script;
  try {
    script = asda::dsl::parse_strategy_script(text);
  } catch (const asda::dsl::ParseError& e) {
    std::cerr << "error: " << opt.script_path << ": " << e.what() << "\n";
    return kExitFatal;
  } catch (const asda::Error& e) {
    std::cerr << "error: " << opt.script_path << ": " << e.what() << "\n";
    return kExitFatal;
  }

  asda::dsl::BoundScript bound(opt.seed);
  try {
    bound = asda::dsl::bind_script(script, opt.seed);
  } catch (const asda::Error& e) {
    std::cerr << "error: " << opt.script_path << ": " << e.what() << "\n";
    return kExitFatal;
  }
  for (const std::string& w : bound.warnings) std::cerr << "warning: " << w << "\n";

  if (opt.dry_run) {
    std::cout << "script ok: " << bound.pre.ops().size() << " pre op(s), "
              << (bound.has_collect ? "collect_data, " : "no collect_data, ")
              << bound.post.ops().size() << " post op(s)\n";
    for (const auto& op : bound.pre.ops())
      std::cout << "  pre  layer " << op.layer << "  " << op.name
                << "  p=" << asda::format_number(op.probability) << "\n";
    for (const auto& op : bound.post.ops())
      std::cout << "  post " << op.name << "  p=" << asda::format_number(op.probability)
                << "\n";
    return kExitOk;
  }

  std::vector<std::shared_ptr<const asda::SceneSpecification>> specs;
  try {
    specs = load_scene_dir(opt.scenes_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }

  asda::RunResult pre = bound.pre.run(specs, opt.max_variations, opt.workers);
  for (const asda::RunError& e : pre.errors)
    std::cerr << "variation failed: scene " << e.scene_id << " variation "
              << e.variation_index << " op " << e.op << ": " << e.message << "\n";
  if (pre.scenes.empty()) {
    std::cerr << "error: every variation failed\n";
    return kExitFatal;
  }

  std::size_t ops_applied = 0;
  for (const auto& scene : pre.scenes)
    for (const auto& entry : scene.provenance) ops_applied += entry.applied ? 1 : 0;

  std::size_t record_count = 0;
  std::vector<asda::RunError> post_errors;
  if (bound.has_collect) {
    asda::CaptureConfig capture;
    capture.camera.width = opt.width;
    capture.camera.height = opt.height;
    capture.camera.hfov = opt.hfov_deg * asda::kPi / 180.0;
    capture.output_dir = opt.out_dir;
    capture.master_seed = opt.seed;
    capture.workers = opt.workers;

    asda::CollectResult collected;
    try {
      collected = asda::collect_data(pre.scenes, capture);
    } catch (const asda::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitFatal;
    }

    std::vector<asda::DatasetRecord> all_records = collected.records;
    if (!bound.post.ops().empty()) {
      asda::post::PostRunResult post =
          asda::post::postproc_run(bound.post, collected.records, opt.out_dir, opt.workers);
      post_errors = post.errors;
      for (const asda::RunError& e : post.errors)
        std::cerr << "augmentation failed: " << e.scene_id << "/" << e.variation_index << ": "
                  << e.message << "\n";
      all_records.insert(all_records.end(), post.augmented.begin(), post.augmented.end());
      asda::write_dataset(all_records, collected.manifest_path, opt.seed);
    }
    record_count = all_records.size();
  }

  auto t1 = std::chrono::steady_clock::now();
  double secs = std::chrono::duration<double>(t1 - t0).count();
  std::cout << "scenes: " << specs.size() << "  variations: " << pre.scenes.size()
            << "  ops applied: " << ops_applied << "  records: " << record_count
            << "  wall: " << asda::format_number(secs) << " s\n";

  return (pre.errors.empty() && post_errors.empty()) ? kExitOk : kExitPartial;
}

int cmd_optimize(const std::string& config_path, std::string history_path) {
  asda::opt::OptimizerSetup setup;
  try {
    setup = asda::opt::load_optimizer_config(config_path);
  } catch (const asda::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  if (history_path.empty())
    history_path = (fs::path(config_path).parent_path() / "loc_history.jsonl").string();

  asda::RngStream rng(setup.seed);
  asda::opt::LocHistory history;
  try {
    history = asda::opt::run_loc_loop(setup.oracle, setup.config, rng);
  } catch (const asda::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }

  std::printf("%4s %10s %8s %8s %8s  %s\n", "t", "q_t", "V", "alpha", "C", "decision");
  for (const auto& rec : history.records) {
    std::string decision = "-";
    if (rec.decision)
      decision = rec.decision->kind == asda::opt::Decision::Kind::IncreaseSize
                     ? "IncreaseSize(" + std::to_string(rec.decision->n_star) + ")"
                     : "ChangeSetting";
    std::printf("%4d %10llu %8.4f %8s %8s  %s\n", rec.iteration,
                static_cast<unsigned long long>(rec.collected_size), rec.score,
                rec.fit ? asda::format_number(rec.fit->alpha).c_str() : "-",
                rec.fit ? asda::format_number(rec.fit->transfer_gap_c).c_str() : "-",
                decision.c_str());
  }
  try {
    asda::opt::write_history(history, history_path);
  } catch (const asda::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  std::cout << "history: " << history_path << "\n";
  if (!history.reached_target) {
    std::cerr << "target not reached within " << setup.config.max_iterations
              << " iterations\n";
    return kExitBudget;
  }
  return kExitOk;
}

int cmd_stats(const std::string& dataset_dir) {
  fs::path manifest_path = fs::path(dataset_dir) / "manifest.json";
  nlohmann::json manifest;
  {
    std::ifstream in(manifest_path);
    if (!in) {
      std::cerr << "error: MissingManifest: no manifest at '" << manifest_path.string()
                << "'\n";
      return kExitFatal;
    }
    try {
      in >> manifest;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: MissingManifest: cannot parse manifest: " << e.what() << "\n";
      return kExitFatal;
    }
  }

  std::size_t total = 0, augmented = 0;
  std::set<std::pair<std::string, int>> variations;
  std::map<std::pair<std::string, int>, std::string> first_annotation;
  for (const auto& rec : manifest.value("records", nlohmann::json::array())) {
    ++total;
    if (rec.value("augmented", false)) ++augmented;
    auto key = std::make_pair(rec.value("scene_id", std::string()),
                              rec.value("variation_index", 0));
    variations.insert(key);
    if (!rec.value("augmented", false) && !first_annotation.count(key))
      first_annotation[key] = rec.value("annotation", std::string());
  }

  // per-op application rates and per-variation instance tables
  std::map<std::string, std::pair<std::size_t, std::size_t>> op_counts;  // applied, seen
  std::map<std::pair<std::string, int>, std::vector<std::pair<int, std::string>>> instance_table;
  {
    std::ifstream in(fs::path(dataset_dir) / "provenance.json");
    if (in) {
      nlohmann::json prov;
      try {
        in >> prov;
        for (const auto& jv : prov.value("variations", nlohmann::json::array())) {
          auto key = std::make_pair(jv.value("scene_id", std::string()),
                                    jv.value("variation_index", 0));
          for (const auto& je : jv.value("operations", nlohmann::json::array())) {
            auto& [applied, seen] = op_counts[je.value("op", std::string())];
            ++seen;
            if (je.value("applied", false)) ++applied;
          }
          for (const auto& ji : jv.value("instances", nlohmann::json::array()))
            if (ji.value("role", std::string()) == "main")
              instance_table[key].push_back(
                  {ji.value("variant_index", -1), ji.value("region", std::string())});
        }
      } catch (const nlohmann::json::exception&) {
        // provenance is optional for stats
      }
    }
  }

  // distinct (weather, time bucket, variant, region) combinations
  std::set<std::string> combos;
  for (const auto& [key, ann_rel] : first_annotation) {
    std::string weather = "sun";
    int bucket = 4;
    if (!ann_rel.empty()) {
      std::ifstream in(fs::path(dataset_dir) / ann_rel);
      if (in) {
        try {
          nlohmann::json ann;
          in >> ann;
          weather = ann["tags"].value("weather", "sun");
          bucket = int(ann["tags"].value("time_of_day", 12.0) / 3.0);
        } catch (const nlohmann::json::exception&) {
        }
      }
    }
    auto it = instance_table.find(key);
    if (it == instance_table.end()) continue;
    for (const auto& [variant, region] : it->second)
      combos.insert(weather + "|" + std::to_string(bucket) + "|" + std::to_string(variant) +
                    "|" + region);
  }

  std::cout << "records: " << total << " (" << augmented << " augmented)\n";
  std::cout << "variations: " << variations.size() << "\n";
  std::cout << "distinct (weather, time, variant, region) combinations: " << combos.size()
            << "\n";
  std::cout << "op application rates:\n";
  for (const auto& [name, counts] : op_counts) {
    double rate = counts.second ? double(counts.first) / counts.second : 0.0;
    std::cout << "  " << name << ": " << counts.first << "/" << counts.second << " ("
              << asda::format_number(rate) << ")\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"procedural scene augmentation and synthetic dataset generation"};
  app.require_subcommand(1);

  GenerateOptions gen;
  CLI::App* generate = app.add_subcommand("generate", "run a strategy script end to end");
  generate->add_option("--script", gen.script_path, "strategy script (.asda)")->required();
  generate->add_option("--scenes", gen.scenes_dir, "directory of scene specs");
  generate->add_option("--out", gen.out_dir, "output dataset directory");
  generate->add_option("--seed", gen.seed, "master seed");
  generate->add_option("--max-variations", gen.max_variations, "variations per scene");
  generate->add_option("--width", gen.width, "image width");
  generate->add_option("--height", gen.height, "image height");
  generate->add_option("--hfov", gen.hfov_deg, "horizontal field of view, degrees");
  generate->add_option("--workers", gen.workers, "worker threads");
  generate->add_flag("--dry-run", gen.dry_run, "parse and bind only");

  std::string config_path, history_path, dataset_dir;
  CLI::App* optimize = app.add_subcommand("optimize", "run the data-collection optimizer");
  optimize->add_option("--config", config_path, "optimizer config (JSON)")->required();
  optimize->add_option("--history", history_path, "history output path (JSON lines)");

  CLI::App* stats = app.add_subcommand("stats", "dataset diversity report");
  stats->add_option("--dataset", dataset_dir, "dataset directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      if (!gen.dry_run && (gen.scenes_dir.empty() || gen.out_dir.empty())) {
        std::cerr << "error: --scenes and --out are required unless --dry-run\n";
        return kExitFatal;
      }
      return cmd_generate(gen);
    }
    if (optimize->parsed()) return cmd_optimize(config_path, history_path);
    if (stats->parsed()) return cmd_stats(dataset_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}
