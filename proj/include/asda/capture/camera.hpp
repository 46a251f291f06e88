#pragma once

#include <cmath>
#include <optional>

#include "asda/core/error.hpp"
#include "asda/core/vec3.hpp"

namespace asda {

struct CameraIntrinsics {
  int width = 256;
  int height = 256;
  double hfov = kPi / 2;  // radians

  void validate() const {
    if (width < 16 || height < 16)
      throw Error(Errc::InvalidParams, "image must be at least 16x16");
    if (!(hfov > 0 && hfov < kPi))
      throw Error(Errc::InvalidParams, "hfov must be in (0, pi)");
  }

  double focal_px() const { return (width / 2.0) / std::tan(hfov / 2.0); }
  // Square pixels: vertical FOV follows from hfov and the aspect ratio.
  double vfov() const { return 2.0 * std::atan(std::tan(hfov / 2.0) * height / double(width)); }
};

struct TrajectoryPose {
  Vec3 position{0, 0, 0};
  double yaw = 0.0;    // about +Y
  double pitch = 0.0;  // about +X
  double roll = 0.0;   // about -Z (camera forward)
  int frame_index = 0;
};

// Camera-to-world rotation, yaw * pitch * roll. The camera looks down its
// local -Z axis; +X is image right, +Y image up.
inline Mat3 camera_rotation(const TrajectoryPose& pose) {
  return Mat3::rot_y(pose.yaw) * Mat3::rot_x(pose.pitch) * Mat3::rot_z(pose.roll);
}

inline Vec3 camera_forward(const TrajectoryPose& pose) {
  return camera_rotation(pose) * Vec3{0, 0, -1};
}

// Yaw/pitch that aim the camera (roll 0) from `from` toward `at`.
inline void aim_camera(TrajectoryPose& pose, const Vec3& from, const Vec3& at) {
  Vec3 d = (at - from).normalized();
  pose.position = from;
  pose.pitch = std::asin(std::clamp(d.y, -1.0, 1.0));
  pose.yaw = std::atan2(-d.x, -d.z);
  pose.roll = 0.0;
}

struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
  double depth = 0.0;
};

// Pinhole projection; nothing is returned for points behind the camera.
inline std::optional<PixelPoint> project_point(const CameraIntrinsics& cam,
                                               const TrajectoryPose& pose,
                                               const Vec3& world_point) {
  Mat3 world_to_cam = camera_rotation(pose).transposed();
  Vec3 pc = world_to_cam * (world_point - pose.position);
  double depth = -pc.z;
  if (depth <= 1e-9) return std::nullopt;
  double f = cam.focal_px();
  PixelPoint out;
  out.x = cam.width / 2.0 + (pc.x / depth) * f;
  out.y = cam.height / 2.0 - (pc.y / depth) * f;
  out.depth = depth;
  return out;
}

inline bool pixel_in_bounds(const CameraIntrinsics& cam, const PixelPoint& p) {
  return p.x >= 0 && p.x < cam.width && p.y >= 0 && p.y < cam.height;
}

}  // namespace asda
