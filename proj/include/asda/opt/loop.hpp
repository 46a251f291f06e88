#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asda/opt/policy.hpp"
#include "asda/opt/scaling.hpp"

namespace asda::opt {

struct LocConfig {
  double v_star = 0.9;        // target score
  int max_iterations = 10;
  double alpha_min = 0.3;     // below this, more data is pointless
  std::uint64_t n_0 = 10;     // first collection size
  double growth_cap = 4.0;    // per-iteration size multiplier bound
  double target_margin = 0.1; // shrink the target error before inverting, to
                              // absorb score noise near the threshold

  void validate() const {
    if (!(v_star > 0 && v_star <= 1))
      throw Error(Errc::ConfigError, "v_star must be in (0, 1]");
    if (max_iterations < 1) throw Error(Errc::ConfigError, "max_iterations must be >= 1");
    if (n_0 < 1) throw Error(Errc::ConfigError, "n_0 must be >= 1");
    if (!(growth_cap > 1)) throw Error(Errc::ConfigError, "growth_cap must be > 1");
    if (!(target_margin >= 0 && target_margin < 1))
      throw Error(Errc::ConfigError, "target_margin must be in [0, 1)");
  }
};

// Maps (policy, dataset size) to a score in [0,1].
using PerformanceOracle = std::function<double(const Policy&, std::uint64_t)>;

// Analytic oracle: the error law itself plus gaussian score noise. Lets the
// whole loop be exercised without training anything.
struct SyntheticOracle {
  double d = 0.8;
  double alpha = 0.5;
  double c = 0.02;
  double noise_sigma = 0.005;
  std::uint64_t seed = 1;

  double operator()(const Policy&, std::uint64_t n) const {
    ScalingLawParams law{d, alpha, c, 0.0};
    RngStream rng(derive_seed(seed, std::uint64_t(n)));
    double v = 1.0 - law.error_at(double(n)) + rng.gaussian(0.0, noise_sigma);
    return std::clamp(v, 0.0, 1.0);
  }
};

// Shells out: `command <manifest_path> <data_size>` and reads one float.
struct ExternalCommandOracle {
  std::string command;
  std::string manifest_path;

  double operator()(const Policy&, std::uint64_t n) const {
    std::string cmd = command + " " + manifest_path + " " + std::to_string(n);
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) throw Error(Errc::IoError, "cannot run oracle command");
    char buf[128] = {0};
    std::string out;
    while (std::fgets(buf, sizeof(buf), pipe)) out += buf;
    int status = ::pclose(pipe);
    if (status != 0)
      throw Error(Errc::IoError, "oracle command exited with status " + std::to_string(status));
    try {
      return std::stod(out);
    } catch (const std::exception&) {
      throw Error(Errc::IoError, "oracle output is not a number: '" + out + "'");
    }
  }
};

struct LocIterationRecord {
  int iteration = 0;
  std::uint64_t collected_size = 0;  // q_t
  double score = 0.0;                // V(D_qt)
  std::optional<ScalingLawParams> fit;
  std::optional<Decision> decision;
  Policy policy;
};

struct LocHistory {
  std::vector<LocIterationRecord> records;
  bool reached_target = false;
};

// Learn-Optimize-Collect: collect, score, fit the law once enough points
// exist, decide between growing the dataset and re-sampling the policy.
// History resets on a setting change: points collected under different op
// sequences do not describe one law.
inline LocHistory run_loc_loop(const PerformanceOracle& oracle, const LocConfig& config,
                               RngStream& rng,
                               const std::vector<CatalogOp>& catalog = default_op_catalog()) {
  config.validate();
  LocHistory history;

  Policy policy = sample_policy(catalog, rng);
  policy.data_size_target = config.n_0;
  std::vector<SizeErrorPoint> points;
  std::uint64_t q_prev = 0;

  // stricter effective target: decide/invert against it so threshold noise
  // does not stall the loop
  double e_eff = (1.0 - config.v_star) * (1.0 - config.target_margin);
  double v_eff = 1.0 - e_eff;

  for (int t = 0; t < config.max_iterations; ++t) {
    std::uint64_t q = std::max<std::uint64_t>(policy.data_size_target, q_prev + 1);
    double v = std::clamp(oracle(policy, q), 0.0, 1.0);

    LocIterationRecord rec;
    rec.iteration = t;
    rec.collected_size = q;
    rec.score = v;
    rec.policy = policy;

    if (v >= config.v_star) {
      history.records.push_back(std::move(rec));
      history.reached_target = true;
      break;
    }

    points.push_back({double(q), std::clamp(1.0 - v, 1e-9, 1.0 - 1e-9)});
    if (points.size() >= 3) {
      ScalingLawParams params = fit_scaling_law(points);
      rec.fit = params;
      Decision decision = decide_action(params, v_eff, config.alpha_min);
      rec.decision = decision;
      if (decision.kind == Decision::Kind::IncreaseSize) {
        std::uint64_t cap = std::uint64_t(double(q) * config.growth_cap) + 1;
        Decision capped = decision;
        capped.n_star = std::min(decision.n_star, cap);
        policy = update_policy(policy, capped, catalog, rng);
      } else {
        policy = update_policy(policy, decision, catalog, rng);
        policy.data_size_target = q;  // q_{t+1} = q+1 via the monotone rule
        points.clear();               // new setting, new law
      }
    } else {
      policy.data_size_target = q * 2;  // pre-fit growth
    }
    history.records.push_back(std::move(rec));
    q_prev = q;
  }
  return history;
}

// ---- config / history serialization ---------------------------------------

struct OptimizerSetup {
  LocConfig config;
  PerformanceOracle oracle;
  std::string oracle_kind;
  std::uint64_t seed = 1;
};

inline OptimizerSetup load_optimizer_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot read '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("bad config JSON: ") + e.what());
  }

  OptimizerSetup setup;
  setup.config.v_star = doc.value("v_star", 0.9);
  setup.config.max_iterations = doc.value("max_iterations", 10);
  setup.config.alpha_min = doc.value("alpha_min", 0.3);
  setup.config.n_0 = doc.value("n_0", std::uint64_t(10));
  setup.config.growth_cap = doc.value("growth_cap", 4.0);
  setup.config.target_margin = doc.value("target_margin", 0.1);
  setup.seed = doc.value("seed", std::uint64_t(1));
  setup.config.validate();

  nlohmann::json oracle = doc.value("oracle", nlohmann::json::object());
  setup.oracle_kind = oracle.value("kind", "synthetic");
  if (setup.oracle_kind == "synthetic") {
    SyntheticOracle syn;
    nlohmann::json params = oracle.value("params", nlohmann::json::object());
    syn.d = params.value("d", 0.8);
    syn.alpha = params.value("alpha", 0.5);
    syn.c = params.value("c", 0.02);
    syn.noise_sigma = params.value("noise_sigma", 0.005);
    syn.seed = setup.seed;
    setup.oracle = syn;
  } else if (setup.oracle_kind == "external-command") {
    ExternalCommandOracle ext;
    nlohmann::json params = oracle.value("params", nlohmann::json::object());
    ext.command = params.value("command", "");
    ext.manifest_path = params.value("manifest", "");
    if (ext.command.empty())
      throw Error(Errc::ConfigError, "external-command oracle needs a command");
    setup.oracle = ext;
  } else {
    throw Error(Errc::ConfigError, "unknown oracle kind '" + setup.oracle_kind + "'");
  }
  return setup;
}

inline nlohmann::json iteration_to_json(const LocIterationRecord& rec) {
  nlohmann::json doc;
  doc["iteration"] = rec.iteration;
  doc["q"] = rec.collected_size;
  doc["score"] = rec.score;
  if (rec.fit)
    doc["fit"] = {{"d", rec.fit->coeff_d},
                  {"alpha", rec.fit->alpha},
                  {"c", rec.fit->transfer_gap_c},
                  {"sse", rec.fit->fit_sse}};
  if (rec.decision)
    doc["decision"] = rec.decision->kind == Decision::Kind::IncreaseSize
                          ? "IncreaseSize(" + std::to_string(rec.decision->n_star) + ")"
                          : "ChangeSetting";
  nlohmann::json subs = nlohmann::json::array();
  for (const SubPolicy& sub : rec.policy.sub_policies) {
    nlohmann::json js;
    js["ops"] = sub.op_names;
    js["probabilities"] = sub.probabilities;
    js["magnitudes"] = sub.magnitude_bins;
    subs.push_back(std::move(js));
  }
  doc["policy"] = {{"sub_policies", subs}, {"data_size_target", rec.policy.data_size_target}};
  return doc;
}

// JSON lines, one iteration per line.
inline void write_history(const LocHistory& history, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path.string() + "'");
  for (const LocIterationRecord& rec : history.records)
    out << iteration_to_json(rec).dump() << "\n";
}

}  // namespace asda::opt
