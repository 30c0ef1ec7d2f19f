#pragma once

#include "mcmot3d/metrics.hpp"
#include "mcmot3d/simulator.hpp"
#include "mcmot3d/types.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace mcmot {

// File cannot be opened or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File opened but its content is malformed; the message carries the line or
// field that failed.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DetectionLog {
  int keypoint_count = 0;
  std::map<std::int64_t, std::vector<Detection>> frames;
};

// Detection CSV: "# mcmot3d detections v1 keypoints=P" then
// frame,camera,left,top,width,height,confidence plus P x,y,visible triples.
DetectionLog load_detections(const std::string& path);
void save_detections(const DetectionLog& log, const std::string& path);

// Trajectory CSV: "# mcmot3d trajectory v1 keypoints=P" then
// frame,id,x,y,z,ax,ay,az plus P joint x,y,z triples (a* are half-extents).
TrajectorySet load_trajectories(const std::string& path);
void save_trajectories(const TrajectorySet& set, const std::string& path);

// Calibration JSON: camera list with 3x4 row-major projection, image size,
// noise variance diagonals, and the ground-plane column triple.
std::vector<CameraModel> load_calibration(const std::string& path);
void save_calibration(const std::vector<CameraModel>& cameras, const std::string& path);

// Schedule JSON: camera id -> list of [on, off) frame intervals.
std::map<int, CameraSchedule> load_schedule(const std::string& path);

// Scenario JSON: actors, per-camera rates, noise levels, and either inline
// cameras or a calibration file path resolved against the scenario location.
ScenarioConfig load_scenario(const std::string& path);

TrajectorySet truth_to_trajectories(const GroundTruth& truth, int keypoint_count);

}  // namespace mcmot
