#pragma once

#include <string>
#include <vector>

#include "asda/core/vec3.hpp"
#include "asda/scene/scene_graph.hpp"

namespace asda {

struct AssetPrototype {
  std::string name;
  Aabb aabb;
  Material default_material;
  std::vector<std::string> texture_set;
  bool textures_required = false;
  bool particle = false;  // particle-class assets spawn as noise, not obstacles

  double bounding_radius() const { return aabb.bounding_radius(); }
};

enum class InstanceRole { Main, Obstacle, Noise };

inline const char* role_name(InstanceRole r) {
  switch (r) {
    case InstanceRole::Main: return "main";
    case InstanceRole::Obstacle: return "obstacle";
    case InstanceRole::Noise: return "noise";
  }
  return "?";
}

struct AssetInstance {
  std::string prototype;
  Vec3 position{0, 0, 0};
  Vec3 rotation{0, 0, 0};  // Euler ZYX, radians
  Vec3 scale{1, 1, 1};
  Material material;
  InstanceRole role = InstanceRole::Main;
  std::string anchor_region;  // provenance: region the instance was sampled from
  int variant_index = -1;     // which registered variant produced it
};

struct Spotlight {
  Vec3 position{0, 0, 0};
  double intensity = 1.0;
};

enum class Weather { Rain, Sun, Snow };

inline const char* weather_name(Weather w) {
  switch (w) {
    case Weather::Rain: return "rain";
    case Weather::Sun: return "sun";
    case Weather::Snow: return "snow";
  }
  return "?";
}

// Category order matches the probability-vector convention [rain, sun, snow].
inline const std::vector<std::string>& weather_categories() {
  static const std::vector<std::string> cats{"rain", "sun", "snow"};
  return cats;
}

struct GlobalState {
  Weather weather = Weather::Sun;
  double weather_intensity = 0.0;  // [0,1]
  double time_of_day = 12.0;       // hours, [0,24)
  double ambient_level = 0.7;      // [0,1]
  std::vector<Spotlight> spotlights;
};

}  // namespace asda
