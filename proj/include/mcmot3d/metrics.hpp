#pragma once

#include "mcmot3d/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace mcmot {

struct TrajectoryPoint {
  Vec3 position = Vec3::Zero();
  Vec3 half_extents = Vec3::Ones();
  std::vector<Vec3> joints;
};

// id -> frame -> point. Gaps are allowed; a track exists wherever it has a
// point.
struct TrajectorySet {
  int keypoint_count = 0;
  std::map<std::int64_t, std::map<std::int64_t, TrajectoryPoint>> tracks;

  bool empty() const;
  std::pair<std::int64_t, std::int64_t> frame_range() const;  // inclusive; empty -> (0, -1)
  void insert(std::int64_t id, std::int64_t frame, TrajectoryPoint point);
};

enum class BaseDistance { kGroundEuclidean, kGiou3d };

struct MetricConfig {
  BaseDistance distance = BaseDistance::kGroundEuclidean;
  double match_threshold = 1.0;  // pair is a valid match when distance <= this
  double ospa_cutoff = 1.0;
  int ospa_order = 1;
  double pck_threshold = 0.15;       // meters
  double person_match_radius = 1.0;  // meters, pose metrics person pairing
};

// Distance between single points under the configured base metric.
double base_distance(const TrajectoryPoint& a, const TrajectoryPoint& b, const MetricConfig& cfg);

struct ClearMotResult {
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t misses = 0;
  std::int64_t id_switches = 0;
  std::int64_t gt_count = 0;
  double mota = 0.0;
};

// Frame-by-frame matching that keeps last frame's pairs when still within
// the threshold. Throws std::invalid_argument on empty ground truth.
ClearMotResult clear_mot(const TrajectorySet& gt, const TrajectorySet& est,
                         const MetricConfig& cfg);

// Identity F1: one global trajectory pairing maximizing identity-matched
// frames. Throws std::invalid_argument on empty ground truth.
double idf1(const TrajectorySet& gt, const TrajectorySet& est, const MetricConfig& cfg);

struct Ospa2Point {
  std::int64_t frame = 0;
  double value = 0.0;
};

// Track-level OSPA over the growing window [first_frame, t], one value per
// frame. Per-pair distances are time-averaged base distances (cutoff applied
// per frame), then combined with the cardinality penalty at the cutoff.
std::vector<Ospa2Point> ospa2_series(const TrajectorySet& gt, const TrajectorySet& est,
                                     const MetricConfig& cfg);

struct PoseAccuracy {
  double mpjpe = 0.0;  // meters
  double pck = 0.0;    // percentage in [0, 100]
  std::int64_t joint_count = 0;
  std::int64_t pair_count = 0;  // matched person-frames
};

// People are paired per frame by ground-plane distance within
// person_match_radius; joint errors are averaged over all paired joints.
// nullopt when no person-frame ever matches. Throws on empty ground truth.
std::optional<PoseAccuracy> pose_accuracy(const TrajectorySet& gt, const TrajectorySet& est,
                                          const MetricConfig& cfg);

}  // namespace mcmot
