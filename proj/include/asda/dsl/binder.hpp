#pragma once

#include <string>
#include <vector>

#include "asda/dsl/parser.hpp"
#include "asda/post/pipeline.hpp"
#include "asda/pre/ops.hpp"

namespace asda::dsl {

struct BoundScript {
  Pipeline pre;
  bool has_collect = false;
  post::PostPipeline post;
  std::vector<std::string> warnings;

  explicit BoundScript(std::uint64_t master_seed)
      : pre(make_pipeline(master_seed)), post(master_seed) {}
};

namespace detail {

inline Error with_line(const Error& e, int line) {
  return Error(e.code(), std::string(e.what()) + " (line " + std::to_string(line) + ")");
}

// probability: first numeric positional, probability= kwarg wins on conflict
inline double extract_probability(const ActionPrompt& prompt, std::vector<std::string>& warnings) {
  const Value* kw = prompt.kwarg("probability");
  std::optional<double> positional;
  for (const Value& v : prompt.positional)
    if (v.is_number()) {
      positional = v.num;
      break;
    }
  if (kw && kw->is_number()) {
    if (positional && *positional != kw->num)
      warnings.push_back("line " + std::to_string(prompt.source_line) +
                         ": probability given twice; using probability=" +
                         format_number(kw->num));
    return kw->num;
  }
  return positional.value_or(1.0);
}

inline ParamMap kwargs_to_params(const ActionPrompt& prompt) {
  ParamMap params;
  for (const auto& [k, v] : prompt.kwargs)
    if (k != "probability") params[k] = v;
  return params;
}

}  // namespace detail

// Maps parsed prompts onto registered operations in both pipelines.
inline BoundScript bind_script(const StrategyScript& script, std::uint64_t master_seed) {
  BoundScript bound(master_seed);

  for (const ActionPrompt& prompt : script.prompts) {
    int line = prompt.source_line;
    if (prompt.target == Target::Bare) {
      bound.has_collect = true;  // collect_data; parser enforced the method name
      continue;
    }
    double probability = detail::extract_probability(prompt, bound.warnings);
    std::size_t numeric_positionals = 0;
    for (const Value& v : prompt.positional)
      if (v.is_number()) ++numeric_positionals;
    if (numeric_positionals > 1 || prompt.positional.size() > numeric_positionals)
      throw Error(Errc::InvalidParams,
                  "only one positional (the probability) is supported (line " +
                      std::to_string(line) + ")");

    if (prompt.target == Target::PreProcessing) {
      ParamMap params = detail::kwargs_to_params(prompt);
      std::string method = prompt.method;
      if (!bound.pre.registry().count(method))
        throw Error(Errc::UnknownMethod,
                    "unknown pre-processing method '" + method + "' (line " +
                        std::to_string(line) + ")");

      // sample_location may carry trajectory types; they belong to the
      // trajectory randomization op and are forwarded there
      std::optional<Value> forwarded_types;
      if (method == "sample_location") {
        auto it = params.find("types");
        if (it != params.end()) {
          forwarded_types = it->second;
          params.erase(it);
        }
        // "sample points from <asset>" names a container class here
      }

      OperationSpec op;
      op.name = method;
      op.probability = probability;
      op.params = std::move(params);
      try {
        bound.pre.add(op);
        if (forwarded_types) {
          OperationSpec traj;
          traj.name = "random_trajectory";
          traj.probability = probability;
          traj.params["types"] = *forwarded_types;
          bound.pre.add(traj);
        }
      } catch (const Error& e) {
        throw detail::with_line(e, line);
      }
    } else {
      post::AugmentOpSpec op;
      op.name = prompt.method;
      op.probability = probability;
      op.params = detail::kwargs_to_params(prompt);
      const auto& names = post::builtin_augment_ops();
      if (std::find(names.begin(), names.end(), op.name) == names.end())
        throw Error(Errc::UnknownMethod, "unknown post-processing method '" + op.name +
                                             "' (line " + std::to_string(line) + ")");
      try {
        bound.post.add(std::move(op));
      } catch (const Error& e) {
        throw detail::with_line(e, line);
      }
    }
  }
  return bound;
}

}  // namespace asda::dsl
