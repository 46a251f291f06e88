#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "asda/core/vec3.hpp"

namespace asda {

// splitmix64 finalizer; used both as the generator step and for seed mixing.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_str(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based stream: draws depend only on the seed, never on which other
// streams ran before. Distribution code is hand-rolled so results are
// bit-identical across platforms and std library versions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // integers in [lo, hi] inclusive
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = std::uint64_t(hi - lo) + 1;
    return lo + std::int64_t(next_u64() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  double gaussian(double mean = 0.0, double stddev = 1.0) {
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double u2 = uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Uniform direction on the unit sphere.
  Vec3 unit_sphere() {
    double cos_t = uniform(-1.0, 1.0);
    double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    double phi = uniform(0.0, 2.0 * kPi);
    return {sin_t * std::cos(phi), cos_t, sin_t * std::sin(phi)};
  }

  // Index drawn from a normalized weight vector.
  std::size_t categorical(const std::vector<double>& probs) {
    double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

 private:
  std::uint64_t state_;
};

// Derives substream seeds from a root seed plus any mix of labels/indices.
inline std::uint64_t derive_seed(std::uint64_t root) { return mix64(root); }

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t part, Rest... rest);
template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t root, std::string_view part, Rest... rest);

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t part, Rest... rest) {
  return derive_seed(mix64(root ^ mix64(part)), rest...);
}

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t root, std::string_view part, Rest... rest) {
  return derive_seed(root, hash_str(part), rest...);
}

}  // namespace asda
