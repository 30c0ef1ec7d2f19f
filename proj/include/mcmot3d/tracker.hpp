#pragma once

#include "mcmot3d/association.hpp"
#include "mcmot3d/skeletons.hpp"

#include <cstdint>
#include <map>

namespace mcmot {

// New: born this frame. Active: boxed in at least one camera this frame.
// Tentative: carried by prediction only, counting misses.
enum class TrackStatus { kNew, kActive, kTentative };

struct Track {
  std::int64_t id = 0;
  TrackStatus status = TrackStatus::kNew;
  GaussianState state;
  int consecutive_misses = 0;
  std::int64_t birth_frame = 0;
  std::int64_t last_update_frame = 0;
};

struct BirthConfig {
  double cluster_bandwidth = 0.5;  // meters, on the ground plane
  int min_cluster_size = 1;
  double birth_height = 0.9;               // initial center height
  Vec3 shape_prior = Vec3(0.3, 0.3, 0.9);  // half-extents, meters
  // The multi-view cluster centroid locates a person to a few decimeters, so
  // the prior stays tight enough that a fresh track's predicted box remains
  // confident enough to pass the assignment cost gate even near a camera.
  double position_var = 0.16;
  double velocity_var = 1.0;
  double shape_var = 0.01;  // on log half-lengths
  double keypoint_position_var = 0.25;
  double keypoint_velocity_var = 1.0;
};

struct TerminationConfig {
  int max_misses = 30;
  double duplicate_iou = 0.3;
};

struct TrackerConfig {
  MotionConfig motion;
  UtConfig ut;
  GatingConfig gating;
  BirthConfig birth;
  TerminationConfig termination;
  int keypoint_count = 15;
  double confidence_floor = 0.0;

  void validate() const;
};

struct Estimate {
  std::int64_t track_id = 0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 half_extents = Vec3::Ones();
  std::vector<Vec3> joints;
};

struct MeanShiftResult {
  std::vector<Vec2> centroids;  // converged modes, one per cluster
  std::vector<int> labels;      // per input point, index of its nearest mode
};

// Flat-kernel mean shift: every point hill-climbs to a mode, modes closer
// than half a bandwidth merge. Bandwidth must be positive.
MeanShiftResult mean_shift(const std::vector<Vec2>& points, double bandwidth);

// Fresh track state centered on a ground point: zero velocity, prior shape,
// joints on the reference skeleton.
GaussianState make_birth_state(const Vec2& ground, const BirthConfig& birth, int keypoint_count);

class Tracker {
 public:
  Tracker(std::vector<CameraModel> cameras, TrackerConfig config);

  // Detections from inactive cameras are dropped and the camera neither
  // updates nor misses any track.
  void set_camera_active(int camera_id, bool active);
  bool camera_active(int camera_id) const;

  // One tracking iteration: predict, assign per camera, update, spawn births
  // from leftover detections, retire stale and duplicate tracks. Returns the
  // estimates of tracks boxed in this frame plus fresh births.
  std::vector<Estimate> step(std::int64_t frame, const std::vector<Detection>& detections);

  const std::vector<Track>& tracks() const { return tracks_; }
  const std::vector<CameraModel>& cameras() const { return cameras_; }
  const TrackerConfig& config() const { return config_; }

 private:
  std::vector<CameraModel> cameras_;  // sorted by id
  TrackerConfig config_;
  std::map<int, bool> active_;
  std::vector<Track> tracks_;
  std::int64_t next_id_ = 1;
};

}  // namespace mcmot
