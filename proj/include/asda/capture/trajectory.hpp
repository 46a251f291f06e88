#pragma once

#include <cmath>
#include <vector>

#include "asda/capture/camera.hpp"
#include "asda/core/rng.hpp"
#include "asda/scene/augmented.hpp"

namespace asda {

// Realizes the trajectory spec into camera poses. All randomness was fixed
// by the pipeline (entry parameters + jitter seed), so this is a pure replay.
inline std::vector<TrajectoryPose> generate_poses(const AugmentedScene& scene,
                                                  const CameraIntrinsics& cam) {
  cam.validate();
  TrajectorySpec spec = scene.trajectory;
  if (!spec.resolved) {
    // default rule: one ring per main-asset anchor
    std::vector<Vec3> anchors = spec.anchors;
    if (anchors.empty()) {
      for (const Vec3& p : scene.main_positions()) {
        bool dup = false;
        for (const Vec3& a : anchors)
          if ((p - a).norm() < 0.5) {
            dup = true;
            break;
          }
        if (!dup) anchors.push_back(p);
      }
    }
    spec.entries.clear();
    for (const Vec3& a : anchors) {
      TrajectoryEntry e;
      e.kind = TrajKind::Cylindrical;
      e.anchor = a;
      spec.entries.push_back(e);
    }
  }
  if (spec.entries.empty())
    throw Error(Errc::NoAnchors, "no trajectory anchors; nothing to capture");

  std::vector<TrajectoryPose> poses;
  for (const TrajectoryEntry& e : spec.entries) {
    if (e.kind == TrajKind::Cylindrical) {
      for (int k = 0; k < e.n_poses; ++k) {
        double theta = 2.0 * kPi * k / e.n_poses;
        Vec3 from = e.anchor + Vec3{e.standoff * std::cos(theta), e.altitude_offset,
                                    e.standoff * std::sin(theta)};
        TrajectoryPose pose;
        aim_camera(pose, from, e.anchor);
        poses.push_back(pose);
      }
    } else {
      Vec3 seg = e.anchor2 - e.anchor;
      double len = seg.norm();
      int steps = len > 0 ? int(std::floor(len / e.capture_distance)) : 0;
      Vec3 dir = len > 0 ? seg / len : Vec3{1, 0, 0};
      for (int k = 0; k <= steps; ++k) {
        Vec3 from = e.anchor + dir * (k * e.capture_distance);
        TrajectoryPose pose;
        pose.position = from;
        pose.yaw = std::atan2(-dir.x, -dir.z);
        pose.pitch = std::asin(std::clamp(dir.y, -1.0, 1.0));
        poses.push_back(pose);
      }
    }
  }

  if (spec.jitter_pose) {
    RngStream jitter(spec.jitter_seed);
    for (TrajectoryPose& pose : poses) {
      pose.pitch += jitter.uniform(-spec.jitter_mag, spec.jitter_mag);
      pose.yaw += jitter.uniform(-spec.jitter_mag, spec.jitter_mag);
      pose.roll += jitter.uniform(-spec.jitter_mag, spec.jitter_mag);
    }
  }
  for (std::size_t i = 0; i < poses.size(); ++i) poses[i].frame_index = int(i);
  return poses;
}

}  // namespace asda
