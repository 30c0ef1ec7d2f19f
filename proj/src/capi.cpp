#include "mcmot3d/mcmot3d.h"

#include "mcmot3d/io.hpp"
#include "mcmot3d/metrics.hpp"
#include "mcmot3d/simulator.hpp"
#include "mcmot3d/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <string>

struct mcmot_cameras {
  std::vector<mcmot::CameraModel> cams;
};
struct mcmot_detections {
  mcmot::DetectionLog log;
};
struct mcmot_trajectories {
  mcmot::TrajectorySet set;
};
struct mcmot_scenario {
  mcmot::ScenarioConfig config;
};
struct mcmot_schedule {
  std::map<int, mcmot::CameraSchedule> by_camera;
};
struct mcmot_tracker {
  mcmot::Tracker tracker;
  std::vector<mcmot::Estimate> last_estimates;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

// Runs the body and converts exceptions to status codes.
template <typename Fn>
mcmot_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const mcmot::IoError& e) {
    set_error(e.what());
    return MCMOT_ERROR_IO;
  } catch (const mcmot::ParseError& e) {
    set_error(e.what());
    return MCMOT_ERROR_PARSE;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return MCMOT_ERROR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MCMOT_ERROR_NUMERIC;
  } catch (...) {
    set_error("unknown error");
    return MCMOT_ERROR_NUMERIC;
  }
}

mcmot_status bad_arg(const char* message) {
  set_error(message);
  return MCMOT_ERROR_INVALID_ARGUMENT;
}

mcmot::TrackerConfig to_core_config(const mcmot_tracker_config& c) {
  mcmot::TrackerConfig out;
  out.motion.dt = c.dt;
  out.motion.accel_noise = c.accel_noise;
  out.motion.shape_walk_noise = c.shape_walk_noise;
  out.motion.keypoint_accel_noise = c.keypoint_accel_noise;
  out.ut.alpha = c.ut_alpha;
  out.ut.kappa = c.ut_kappa;
  out.ut.beta = c.ut_beta;
  out.gating.ground_gate = c.ground_gate;
  out.gating.cost_gate = c.cost_gate;
  out.gating.miss_cost = c.miss_cost;
  out.birth.cluster_bandwidth = c.cluster_bandwidth;
  out.birth.min_cluster_size = c.min_cluster_size;
  out.birth.birth_height = c.birth_height;
  out.birth.shape_prior = mcmot::Vec3(c.shape_prior[0], c.shape_prior[1], c.shape_prior[2]);
  out.birth.position_var = c.birth_position_var;
  out.birth.velocity_var = c.birth_velocity_var;
  out.birth.shape_var = c.birth_shape_var;
  out.birth.keypoint_position_var = c.birth_keypoint_position_var;
  out.birth.keypoint_velocity_var = c.birth_keypoint_velocity_var;
  out.termination.max_misses = c.max_misses;
  out.termination.duplicate_iou = c.duplicate_iou;
  out.keypoint_count = c.keypoint_count;
  out.confidence_floor = c.confidence_floor;
  return out;
}

mcmot::MetricConfig to_metric_config(const mcmot_metric_config& c) {
  mcmot::MetricConfig out;
  out.distance = c.use_giou3d ? mcmot::BaseDistance::kGiou3d : mcmot::BaseDistance::kGroundEuclidean;
  out.match_threshold = c.match_threshold;
  out.ospa_cutoff = c.ospa_cutoff;
  out.ospa_order = c.ospa_order;
  out.pck_threshold = c.pck_threshold;
  out.person_match_radius = c.person_match_radius;
  return out;
}

mcmot::Detection to_core_detection(const mcmot_detection& d) {
  mcmot::Detection out;
  out.camera_id = d.camera_id;
  out.bbox = mcmot::BBox2D::from_ltwh(d.left, d.top, d.width, d.height);
  out.confidence = d.confidence;
  if (d.keypoint_count < 0 || d.keypoint_count > MCMOT_MAX_KEYPOINTS) {
    throw std::invalid_argument("detection keypoint count out of range");
  }
  out.keypoints.resize(d.keypoint_count);
  for (int k = 0; k < d.keypoint_count; ++k) {
    out.keypoints[k].pixel = mcmot::Vec2(d.keypoints[3 * k], d.keypoints[3 * k + 1]);
    out.keypoints[k].visible = d.keypoints[3 * k + 2] != 0.0;
  }
  return out;
}

void to_c_estimate(const mcmot::Estimate& e, mcmot_estimate* out) {
  std::memset(out, 0, sizeof(*out));
  out->track_id = e.track_id;
  for (int i = 0; i < 3; ++i) {
    out->position[i] = e.position[i];
    out->velocity[i] = e.velocity[i];
    out->half_extents[i] = e.half_extents[i];
  }
  out->keypoint_count = static_cast<int>(std::min<size_t>(e.joints.size(), MCMOT_MAX_KEYPOINTS));
  for (int k = 0; k < out->keypoint_count; ++k) {
    out->keypoints[3 * k] = e.joints[k][0];
    out->keypoints[3 * k + 1] = e.joints[k][1];
    out->keypoints[3 * k + 2] = e.joints[k][2];
  }
}

void append_estimates(mcmot::TrajectorySet& set, std::int64_t frame,
                      const std::vector<mcmot::Estimate>& estimates) {
  for (const mcmot::Estimate& e : estimates) {
    mcmot::TrajectoryPoint pt;
    pt.position = e.position;
    pt.half_extents = e.half_extents;
    pt.joints = e.joints;
    set.insert(e.track_id, frame, std::move(pt));
  }
}

}  // namespace

extern "C" {

const char* mcmot_last_error(void) { return g_last_error.c_str(); }

void mcmot_tracker_config_default(mcmot_tracker_config* config) {
  if (!config) return;
  mcmot::TrackerConfig d;
  config->dt = d.motion.dt;
  config->accel_noise = d.motion.accel_noise;
  config->shape_walk_noise = d.motion.shape_walk_noise;
  config->keypoint_accel_noise = d.motion.keypoint_accel_noise;
  config->ut_alpha = d.ut.alpha;
  config->ut_kappa = d.ut.kappa;
  config->ut_beta = d.ut.beta;
  config->ground_gate = d.gating.ground_gate;
  config->cost_gate = d.gating.cost_gate;
  config->miss_cost = d.gating.miss_cost;
  config->cluster_bandwidth = d.birth.cluster_bandwidth;
  config->min_cluster_size = d.birth.min_cluster_size;
  config->birth_height = d.birth.birth_height;
  for (int i = 0; i < 3; ++i) config->shape_prior[i] = d.birth.shape_prior[i];
  config->birth_position_var = d.birth.position_var;
  config->birth_velocity_var = d.birth.velocity_var;
  config->birth_shape_var = d.birth.shape_var;
  config->birth_keypoint_position_var = d.birth.keypoint_position_var;
  config->birth_keypoint_velocity_var = d.birth.keypoint_velocity_var;
  config->max_misses = d.termination.max_misses;
  config->duplicate_iou = d.termination.duplicate_iou;
  config->keypoint_count = d.keypoint_count;
  config->confidence_floor = d.confidence_floor;
}

void mcmot_metric_config_default(mcmot_metric_config* config) {
  if (!config) return;
  mcmot::MetricConfig d;
  config->use_giou3d = d.distance == mcmot::BaseDistance::kGiou3d ? 1 : 0;
  config->match_threshold = d.match_threshold;
  config->ospa_cutoff = d.ospa_cutoff;
  config->ospa_order = d.ospa_order;
  config->pck_threshold = d.pck_threshold;
  config->person_match_radius = d.person_match_radius;
}

mcmot_status mcmot_cameras_load(const char* path, mcmot_cameras** out) {
  if (!path || !out) return bad_arg("path and out must be non-null");
  return guarded([&] {
    auto* h = new mcmot_cameras{mcmot::load_calibration(path)};
    *out = h;
    return MCMOT_OK;
  });
}

mcmot_status mcmot_cameras_save(const mcmot_cameras* cameras, const char* path) {
  if (!cameras || !path) return bad_arg("cameras and path must be non-null");
  return guarded([&] {
    mcmot::save_calibration(cameras->cams, path);
    return MCMOT_OK;
  });
}

mcmot_status mcmot_cameras_count(const mcmot_cameras* cameras, int* count) {
  if (!cameras || !count) return bad_arg("cameras and count must be non-null");
  *count = static_cast<int>(cameras->cams.size());
  return MCMOT_OK;
}

void mcmot_cameras_free(mcmot_cameras* cameras) { delete cameras; }

mcmot_status mcmot_detections_load(const char* path, mcmot_detections** out) {
  if (!path || !out) return bad_arg("path and out must be non-null");
  return guarded([&] {
    auto* h = new mcmot_detections{mcmot::load_detections(path)};
    *out = h;
    return MCMOT_OK;
  });
}

mcmot_status mcmot_detections_save(const mcmot_detections* detections, const char* path) {
  if (!detections || !path) return bad_arg("detections and path must be non-null");
  return guarded([&] {
    mcmot::save_detections(detections->log, path);
    return MCMOT_OK;
  });
}

mcmot_status mcmot_detections_info(const mcmot_detections* detections, int* keypoint_count,
                                   int64_t* frame_count, int64_t* row_count) {
  if (!detections) return bad_arg("detections must be non-null");
  if (keypoint_count) *keypoint_count = detections->log.keypoint_count;
  if (frame_count) {
    *frame_count = detections->log.frames.empty()
                       ? 0
                       : detections->log.frames.rbegin()->first + 1;
  }
  if (row_count) {
    int64_t rows = 0;
    for (const auto& [t, dets] : detections->log.frames) rows += dets.size();
    *row_count = rows;
  }
  return MCMOT_OK;
}

mcmot_status mcmot_detections_delete_random(const mcmot_detections* detections, double rate,
                                            uint64_t seed, mcmot_detections** out) {
  if (!detections || !out) return bad_arg("detections and out must be non-null");
  return guarded([&] {
    auto* h = new mcmot_detections;
    h->log.keypoint_count = detections->log.keypoint_count;
    for (const auto& [t, dets] : detections->log.frames) {
      std::map<int, std::vector<mcmot::Detection>> by_cam;
      for (const mcmot::Detection& d : dets) by_cam[d.camera_id].push_back(d);
      auto kept = mcmot::delete_detections(by_cam, rate, seed ^ static_cast<uint64_t>(t));
      std::vector<mcmot::Detection> flat;
      for (auto& [cam_id, v] : kept) {
        for (mcmot::Detection& d : v) flat.push_back(std::move(d));
      }
      if (!flat.empty()) h->log.frames[t] = std::move(flat);
    }
    *out = h;
    return MCMOT_OK;
  });
}

void mcmot_detections_free(mcmot_detections* detections) { delete detections; }

mcmot_status mcmot_trajectories_load(const char* path, mcmot_trajectories** out) {
  if (!path || !out) return bad_arg("path and out must be non-null");
  return guarded([&] {
    auto* h = new mcmot_trajectories{mcmot::load_trajectories(path)};
    *out = h;
    return MCMOT_OK;
  });
}

mcmot_status mcmot_trajectories_save(const mcmot_trajectories* trajectories, const char* path) {
  if (!trajectories || !path) return bad_arg("trajectories and path must be non-null");
  return guarded([&] {
    mcmot::save_trajectories(trajectories->set, path);
    return MCMOT_OK;
  });
}

mcmot_status mcmot_trajectories_info(const mcmot_trajectories* trajectories, int* keypoint_count,
                                     int64_t* track_count, int64_t* point_count) {
  if (!trajectories) return bad_arg("trajectories must be non-null");
  if (keypoint_count) *keypoint_count = trajectories->set.keypoint_count;
  if (track_count) *track_count = static_cast<int64_t>(trajectories->set.tracks.size());
  if (point_count) {
    int64_t points = 0;
    for (const auto& [id, frames] : trajectories->set.tracks) points += frames.size();
    *point_count = points;
  }
  return MCMOT_OK;
}

void mcmot_trajectories_free(mcmot_trajectories* trajectories) { delete trajectories; }

mcmot_status mcmot_schedule_load(const char* path, mcmot_schedule** out) {
  if (!path || !out) return bad_arg("path and out must be non-null");
  return guarded([&] {
    auto* h = new mcmot_schedule{mcmot::load_schedule(path)};
    *out = h;
    return MCMOT_OK;
  });
}

void mcmot_schedule_free(mcmot_schedule* schedule) { delete schedule; }

mcmot_status mcmot_scenario_load(const char* path, mcmot_scenario** out) {
  if (!path || !out) return bad_arg("path and out must be non-null");
  return guarded([&] {
    auto* h = new mcmot_scenario{mcmot::load_scenario(path)};
    *out = h;
    return MCMOT_OK;
  });
}

mcmot_status mcmot_scenario_set_seed(mcmot_scenario* scenario, uint64_t seed) {
  if (!scenario) return bad_arg("scenario must be non-null");
  scenario->config.seed = seed;
  return MCMOT_OK;
}

void mcmot_scenario_free(mcmot_scenario* scenario) { delete scenario; }

mcmot_status mcmot_simulate(const mcmot_scenario* scenario, mcmot_trajectories** truth_out,
                            mcmot_detections** detections_out) {
  if (!scenario) return bad_arg("scenario must be non-null");
  if (!truth_out && !detections_out) return bad_arg("at least one output must be non-null");
  return guarded([&] {
    mcmot::GroundTruth truth = mcmot::simulate_ground_truth(scenario->config);
    if (truth_out) {
      auto* h = new mcmot_trajectories{
          mcmot::truth_to_trajectories(truth, scenario->config.keypoint_count)};
      *truth_out = h;
    }
    if (detections_out) {
      auto* h = new mcmot_detections;
      h->log.keypoint_count = scenario->config.keypoint_count;
      for (std::int64_t t = 0; t < scenario->config.frame_count; ++t) {
        auto by_cam = mcmot::render_detections(truth, scenario->config, t);
        std::vector<mcmot::Detection> flat;
        for (auto& [cam_id, v] : by_cam) {
          for (mcmot::Detection& d : v) flat.push_back(std::move(d));
        }
        if (!flat.empty()) h->log.frames[t] = std::move(flat);
      }
      *detections_out = h;
    }
    return MCMOT_OK;
  });
}

mcmot_status mcmot_tracker_create(const mcmot_cameras* cameras,
                                  const mcmot_tracker_config* config, mcmot_tracker** out) {
  if (!cameras || !config || !out) return bad_arg("cameras, config and out must be non-null");
  try {
    auto* h = new mcmot_tracker{mcmot::Tracker(cameras->cams, to_core_config(*config)), {}};
    *out = h;
    return MCMOT_OK;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return MCMOT_ERROR_CONFIG;
  } catch (const std::exception& e) {
    set_error(e.what());
    return MCMOT_ERROR_NUMERIC;
  }
}

mcmot_status mcmot_tracker_set_camera_active(mcmot_tracker* tracker, int camera_id, int active) {
  if (!tracker) return bad_arg("tracker must be non-null");
  return guarded([&] {
    tracker->tracker.set_camera_active(camera_id, active != 0);
    return MCMOT_OK;
  });
}

mcmot_status mcmot_tracker_step(mcmot_tracker* tracker, int64_t frame,
                                const mcmot_detection* detections, size_t count,
                                size_t* estimate_count) {
  if (!tracker) return bad_arg("tracker must be non-null");
  if (count > 0 && !detections) return bad_arg("detections must be non-null when count > 0");
  return guarded([&] {
    std::vector<mcmot::Detection> dets;
    dets.reserve(count);
    for (size_t i = 0; i < count; ++i) dets.push_back(to_core_detection(detections[i]));
    tracker->last_estimates = tracker->tracker.step(frame, dets);
    if (estimate_count) *estimate_count = tracker->last_estimates.size();
    return MCMOT_OK;
  });
}

mcmot_status mcmot_tracker_get_estimates(const mcmot_tracker* tracker, mcmot_estimate* buffer,
                                         size_t capacity, size_t* written) {
  if (!tracker) return bad_arg("tracker must be non-null");
  if (capacity > 0 && !buffer) return bad_arg("buffer must be non-null when capacity > 0");
  size_t n = std::min(capacity, tracker->last_estimates.size());
  for (size_t i = 0; i < n; ++i) to_c_estimate(tracker->last_estimates[i], &buffer[i]);
  if (written) *written = n;
  return MCMOT_OK;
}

void mcmot_tracker_free(mcmot_tracker* tracker) { delete tracker; }

mcmot_status mcmot_track_run(const mcmot_cameras* cameras, const mcmot_detections* detections,
                             const mcmot_tracker_config* config, const mcmot_schedule* schedule,
                             mcmot_trajectories** out, double* fps_out) {
  if (!cameras || !detections || !config || !out) {
    return bad_arg("cameras, detections, config and out must be non-null");
  }
  mcmot_tracker* tracker = nullptr;
  mcmot_status st = mcmot_tracker_create(cameras, config, &tracker);
  if (st != MCMOT_OK) return st;
  mcmot_status result = guarded([&] {
    const mcmot::DetectionLog& log = detections->log;
    std::int64_t last = log.frames.empty() ? -1 : log.frames.rbegin()->first;

    auto* h = new mcmot_trajectories;
    h->set.keypoint_count = config->keypoint_count;
    static const std::vector<mcmot::Detection> kNone;
    double seconds = 0.0;
    std::int64_t frames = 0;
    for (std::int64_t t = 0; t <= last; ++t) {
      if (schedule) {
        for (const mcmot::CameraModel& cam : tracker->tracker.cameras()) {
          auto it = schedule->by_camera.find(cam.id);
          if (it != schedule->by_camera.end()) {
            tracker->tracker.set_camera_active(cam.id, it->second.active_at(t));
          }
        }
      }
      auto it = log.frames.find(t);
      const std::vector<mcmot::Detection>& dets = it == log.frames.end() ? kNone : it->second;
      auto t0 = std::chrono::steady_clock::now();
      std::vector<mcmot::Estimate> estimates = tracker->tracker.step(t, dets);
      seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      ++frames;
      append_estimates(h->set, t, estimates);
    }
    *out = h;
    if (fps_out) *fps_out = seconds > 0.0 ? static_cast<double>(frames) / seconds : 0.0;
    return MCMOT_OK;
  });
  mcmot_tracker_free(tracker);
  return result;
}

mcmot_status mcmot_evaluate(const mcmot_trajectories* truth, const mcmot_trajectories* estimate,
                            const mcmot_metric_config* config, mcmot_metric_report* report) {
  if (!truth || !estimate || !config || !report) {
    return bad_arg("truth, estimate, config and report must be non-null");
  }
  if (truth->set.empty()) {
    set_error("ground truth is empty");
    return MCMOT_ERROR_EMPTY;
  }
  return guarded([&] {
    mcmot::MetricConfig cfg = to_metric_config(*config);
    mcmot::ClearMotResult clear = mcmot::clear_mot(truth->set, estimate->set, cfg);
    std::memset(report, 0, sizeof(*report));
    report->mota = clear.mota;
    report->true_positives = clear.true_positives;
    report->false_positives = clear.false_positives;
    report->misses = clear.misses;
    report->id_switches = clear.id_switches;
    report->gt_count = clear.gt_count;
    report->idf1 = mcmot::idf1(truth->set, estimate->set, cfg);
    auto series = mcmot::ospa2_series(truth->set, estimate->set, cfg);
    report->ospa2 = series.empty() ? 0.0 : series.back().value;
    auto pose = mcmot::pose_accuracy(truth->set, estimate->set, cfg);
    if (pose) {
      report->mpjpe_mm = pose->mpjpe * 1000.0;
      report->pck = pose->pck;
      report->pose_valid = 1;
    }
    return MCMOT_OK;
  });
}

mcmot_status mcmot_evaluate_ospa2(const mcmot_trajectories* truth,
                                  const mcmot_trajectories* estimate,
                                  const mcmot_metric_config* config, int64_t* frames,
                                  double* values, size_t capacity, size_t* count) {
  if (!truth || !estimate || !config) {
    return bad_arg("truth, estimate and config must be non-null");
  }
  if (truth->set.empty()) {
    set_error("ground truth is empty");
    return MCMOT_ERROR_EMPTY;
  }
  return guarded([&] {
    auto series = mcmot::ospa2_series(truth->set, estimate->set, to_metric_config(*config));
    if (count) *count = series.size();
    if (values) {
      size_t n = std::min(capacity, series.size());
      for (size_t i = 0; i < n; ++i) {
        values[i] = series[i].value;
        if (frames) frames[i] = series[i].frame;
      }
    }
    return MCMOT_OK;
  });
}

}  // extern "C"
