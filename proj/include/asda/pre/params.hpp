#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "asda/core/error.hpp"
#include "asda/core/rng.hpp"
#include "asda/core/value.hpp"

namespace asda {

// Continuous or categorical sampling range for operation parameters.
struct RangeSpec {
  enum class Kind { Uniform, Categorical };
  Kind kind = Kind::Uniform;
  double lo = 0.0, hi = 1.0;
  std::vector<std::string> values;
  std::vector<double> probabilities;

  static RangeSpec uniform(double lo, double hi) {
    if (!(lo <= hi)) throw Error(Errc::InvalidRange, "uniform range needs lo <= hi");
    RangeSpec r;
    r.lo = lo;
    r.hi = hi;
    return r;
  }
  static RangeSpec categorical(std::vector<std::string> values, std::vector<double> probs) {
    validate_probability_vector(probs, values.size());
    RangeSpec r;
    r.kind = Kind::Categorical;
    r.values = std::move(values);
    r.probabilities = std::move(probs);
    return r;
  }

  static void validate_probability_vector(const std::vector<double>& p, std::size_t n) {
    if (p.size() != n)
      throw Error(Errc::InvalidProbabilityVector,
                  "expected " + std::to_string(n) + " probabilities, got " +
                      std::to_string(p.size()));
    double sum = 0;
    for (double v : p) {
      if (v < 0) throw Error(Errc::InvalidProbabilityVector, "negative probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw Error(Errc::InvalidProbabilityVector,
                  "probabilities sum to " + format_number(sum) + ", expected 1");
  }

  double sample_value(RngStream& rng) const { return rng.uniform(lo, hi); }
  std::size_t sample_index(RngStream& rng) const { return rng.categorical(probabilities); }
};

inline bool has_param(const ParamMap& params, const std::string& key) {
  return params.count(key) != 0;
}

inline double param_num(const ParamMap& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (!it->second.is_number())
    throw Error(Errc::InvalidParams, "parameter '" + key + "' must be a number");
  return it->second.num;
}

inline std::string param_str(const ParamMap& params, const std::string& key,
                             const std::string& fallback = "") {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (!it->second.is_string())
    throw Error(Errc::InvalidParams, "parameter '" + key + "' must be a string");
  return it->second.str;
}

inline std::vector<std::string> param_str_list(const ParamMap& params, const std::string& key,
                                               std::vector<std::string> fallback = {}) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (!it->second.is_list())
    throw Error(Errc::InvalidParams, "parameter '" + key + "' must be a list");
  return it->second.as_string_list();
}

inline std::vector<double> param_num_list(const ParamMap& params, const std::string& key,
                                          std::vector<double> fallback = {}) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (!it->second.is_list())
    throw Error(Errc::InvalidParams, "parameter '" + key + "' must be a list");
  return it->second.as_number_list();
}

inline bool param_flag(const ParamMap& params, const std::string& key, bool fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (it->second.is_bool()) return it->second.boolean;
  if (it->second.is_number()) return it->second.num != 0;
  throw Error(Errc::InvalidParams, "parameter '" + key + "' must be a flag");
}

// Distances may be numbers or unit-suffixed strings ("200m", "12mi").
inline double param_distance(const ParamMap& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  return distance_value_m(it->second);
}

}  // namespace asda
