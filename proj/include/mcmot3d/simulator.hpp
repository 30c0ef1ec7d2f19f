#pragma once

#include "mcmot3d/skeletons.hpp"
#include "mcmot3d/types.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace mcmot {

struct GaitParams {
  double stride_hz = 0.8;
  double swing_amplitude = 0.10;  // meters of forward limb swing
  double bob_amplitude = 0.02;    // meters of vertical bounce
};

// A person walking waypoint to waypoint at constant speed, present on frames
// [spawn_frame, despawn_frame).
struct ActorSpec {
  std::int64_t spawn_frame = 0;
  std::int64_t despawn_frame = 0;
  std::vector<Vec2> waypoints;
  Vec3 half_extents = Vec3(0.3, 0.3, 0.9);
  GaitParams gait;
};

// Frame intervals [on, off) when a camera is producing detections.
struct CameraSchedule {
  std::vector<std::pair<std::int64_t, std::int64_t>> on_intervals;

  bool active_at(std::int64_t t) const {
    for (const auto& [on, off] : on_intervals) {
      if (t >= on && t < off) return true;
    }
    return false;
  }
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  std::int64_t frame_count = 0;
  double dt = 1.0 / 30.0;
  int keypoint_count = 15;
  double max_speed = 3.0;  // m/s; faster paths are rejected
  std::vector<CameraModel> cameras;
  std::map<int, CameraSchedule> schedule;  // absent camera id = always on
  std::vector<ActorSpec> actors;
  std::map<int, double> detection_prob;  // per camera id, default 1.0
  std::map<int, double> clutter_rate;    // Poisson mean per frame, default 0
  double bbox_noise_px = 0.0;
  double keypoint_noise_px = 0.0;
};

struct ActorState {
  Vec3 center = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 half_extents = Vec3::Ones();
  std::vector<Vec3> joints;
};

// frames[t] maps actor index to its state; absent actors have no entry.
struct GroundTruth {
  std::vector<std::map<int, ActorState>> frames;
};

// Deterministic actor states for every frame. Throws std::invalid_argument
// for empty waypoint lists, non-positive lifetimes, or paths faster than
// max_speed.
GroundTruth simulate_ground_truth(const ScenarioConfig& scenario);

bool camera_active(const ScenarioConfig& scenario, int camera_id, std::int64_t t);

// Render one frame: project each actor into each active camera, drop
// detections by the per-camera detection probability, jitter boxes and
// joints, and add Poisson clutter whose box sizes mimic this frame's real
// detections. Depends only on (truth, scenario, t), never on other frames.
std::map<int, std::vector<Detection>> render_detections(const GroundTruth& truth,
                                                        const ScenarioConfig& scenario,
                                                        std::int64_t t);

// Every detection independently removed with the given probability.
std::map<int, std::vector<Detection>> delete_detections(
    const std::map<int, std::vector<Detection>>& detections, double rate, std::uint64_t seed);

}  // namespace mcmot
