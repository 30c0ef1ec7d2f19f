#include "mcmot3d/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mcmot {

void TrackerConfig::validate() const {
  if (!(motion.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(gating.ground_gate > 0.0)) throw std::invalid_argument("ground gate must be positive");
  if (!std::isfinite(gating.miss_cost)) throw std::invalid_argument("miss cost must be finite");
  if (!(birth.cluster_bandwidth > 0.0)) {
    throw std::invalid_argument("cluster bandwidth must be positive");
  }
  if (birth.min_cluster_size < 1) throw std::invalid_argument("min cluster size must be >= 1");
  if (!(birth.shape_prior.array() > 0.0).all()) {
    throw std::invalid_argument("shape prior must be positive");
  }
  if (termination.max_misses < 0) throw std::invalid_argument("max misses must be >= 0");
  if (termination.duplicate_iou < 0.0 || termination.duplicate_iou > 1.0) {
    throw std::invalid_argument("duplicate iou threshold must be in [0, 1]");
  }
  if (!valid_keypoint_count(keypoint_count)) {
    throw std::invalid_argument("unsupported keypoint count");
  }
}

MeanShiftResult mean_shift(const std::vector<Vec2>& points, double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  MeanShiftResult out;
  out.labels.assign(points.size(), -1);
  if (points.empty()) return out;

  constexpr int kMaxIter = 100;
  constexpr double kTol = 1e-4;

  std::vector<Vec2> modes(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    Vec2 m = points[i];
    for (int iter = 0; iter < kMaxIter; ++iter) {
      Vec2 sum = Vec2::Zero();
      int count = 0;
      for (const Vec2& p : points) {
        if ((p - m).norm() <= bandwidth) {
          sum += p;
          ++count;
        }
      }
      Vec2 next = sum / count;  // the point itself is always in range
      if ((next - m).norm() < kTol) {
        m = next;
        break;
      }
      m = next;
    }
    modes[i] = m;
  }

  // Merge converged modes closer than half a bandwidth, first point wins the slot.
  for (size_t i = 0; i < points.size(); ++i) {
    int slot = -1;
    for (size_t k = 0; k < out.centroids.size(); ++k) {
      if ((modes[i] - out.centroids[k]).norm() <= 0.5 * bandwidth) {
        slot = static_cast<int>(k);
        break;
      }
    }
    if (slot < 0) out.centroids.push_back(modes[i]);
  }

  // Each point joins the nearest surviving mode.
  for (size_t i = 0; i < points.size(); ++i) {
    int best = 0;
    double best_d = (points[i] - out.centroids[0]).norm();
    for (size_t k = 1; k < out.centroids.size(); ++k) {
      double d = (points[i] - out.centroids[k]).norm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(k);
      }
    }
    out.labels[i] = best;
  }
  return out;
}

GaussianState make_birth_state(const Vec2& ground, const BirthConfig& birth, int keypoint_count) {
  GaussianState st;
  Vec3 center(ground[0], ground[1], birth.birth_height);
  st.mean.head<3>() = center;
  st.mean.segment<3>(3).setZero();
  st.mean.tail<3>() = birth.shape_prior.array().log();
  Vec9 diag;
  diag << birth.position_var, birth.position_var, birth.position_var, birth.velocity_var,
      birth.velocity_var, birth.velocity_var, birth.shape_var, birth.shape_var, birth.shape_var;
  st.cov = diag.asDiagonal();

  std::vector<Vec3> joints = pose_skeleton(keypoint_count, center, birth.shape_prior, 0.0);
  st.keypoints.resize(joints.size());
  Vec6 kdiag;
  kdiag << birth.keypoint_position_var, birth.keypoint_position_var, birth.keypoint_position_var,
      birth.keypoint_velocity_var, birth.keypoint_velocity_var, birth.keypoint_velocity_var;
  for (size_t j = 0; j < joints.size(); ++j) {
    st.keypoints[j].mean.head<3>() = joints[j];
    st.keypoints[j].mean.tail<3>().setZero();
    st.keypoints[j].cov = kdiag.asDiagonal();
  }
  return st;
}

Tracker::Tracker(std::vector<CameraModel> cameras, TrackerConfig config)
    : cameras_(std::move(cameras)), config_(std::move(config)) {
  if (cameras_.empty()) throw std::invalid_argument("tracker needs at least one camera");
  config_.validate();
  std::sort(cameras_.begin(), cameras_.end(),
            [](const CameraModel& a, const CameraModel& b) { return a.id < b.id; });
  for (size_t i = 0; i < cameras_.size(); ++i) {
    cameras_[i].validate();
    if (i > 0 && cameras_[i].id == cameras_[i - 1].id) {
      throw std::invalid_argument("duplicate camera id");
    }
    active_[cameras_[i].id] = true;
  }
}

void Tracker::set_camera_active(int camera_id, bool active) {
  auto it = active_.find(camera_id);
  if (it == active_.end()) throw std::invalid_argument("unknown camera id");
  it->second = active;
}

bool Tracker::camera_active(int camera_id) const {
  auto it = active_.find(camera_id);
  if (it == active_.end()) throw std::invalid_argument("unknown camera id");
  return it->second;
}

std::vector<Estimate> Tracker::step(std::int64_t frame, const std::vector<Detection>& detections) {
  // Bucket detections by camera, dropping low-confidence ones and anything
  // from a camera that is switched off.
  std::map<int, std::vector<Detection>> by_cam;
  for (const Detection& det : detections) {
    auto it = active_.find(det.camera_id);
    if (it == active_.end()) throw std::invalid_argument("detection from unknown camera id");
    if (!it->second) continue;
    if (det.confidence < config_.confidence_floor) continue;
    by_cam[det.camera_id].push_back(det);
  }

  std::vector<CameraModel> live_cams;
  for (const CameraModel& cam : cameras_) {
    if (active_.at(cam.id)) live_cams.push_back(cam);
  }

  for (Track& tr : tracks_) tr.state = kalman_predict(tr.state, config_.motion);

  std::vector<GaussianState> predicted;
  predicted.reserve(tracks_.size());
  for (const Track& tr : tracks_) predicted.push_back(tr.state);
  AssignmentMap assignment = associate_all(predicted, by_cam, live_cams, config_.gating, config_.ut);

  // Sequential measurement updates in ascending camera order; each camera's
  // box update feeds the next camera's.
  std::vector<char> boxed(tracks_.size(), 0);
  std::map<int, std::vector<char>> used;
  for (const CameraModel& cam : live_cams) {
    const std::vector<int>& gamma = assignment.at(cam.id);
    const std::vector<Detection>& dets = by_cam[cam.id];
    used[cam.id].assign(dets.size(), 0);
    for (size_t i = 0; i < tracks_.size(); ++i) {
      int j = gamma[i];
      if (j == 0) continue;
      const Detection& det = dets[j - 1];
      used[cam.id][j - 1] = 1;
      KsUpdateResult res = ukf_update_ks(det.bbox, tracks_[i].state, cam, config_.ut);
      tracks_[i].state = ukf_update_kp(det.keypoints, res.state, cam, config_.ut);
      boxed[i] = 1;
    }
  }

  for (size_t i = 0; i < tracks_.size(); ++i) {
    if (boxed[i]) {
      tracks_[i].status = TrackStatus::kActive;
      tracks_[i].consecutive_misses = 0;
      tracks_[i].last_update_frame = frame;
    } else {
      tracks_[i].status = TrackStatus::kTentative;
      ++tracks_[i].consecutive_misses;
    }
  }

  // Births: leftover detections drop to the ground plane and cluster.
  std::vector<Vec2> points;
  std::vector<const Detection*> sources;
  std::vector<const CameraModel*> source_cams;
  for (const CameraModel& cam : live_cams) {
    const std::vector<Detection>& dets = by_cam[cam.id];
    const std::vector<char>& u = used[cam.id];
    for (size_t j = 0; j < dets.size(); ++j) {
      if (u[j]) continue;
      GeoResult<Vec2> g = bbox_bottom_to_ground(dets[j].bbox, cam);
      if (!g.ok()) continue;
      points.push_back(g.value);
      sources.push_back(&dets[j]);
      source_cams.push_back(&cam);
    }
  }
  if (!points.empty()) {
    MeanShiftResult clusters = mean_shift(points, config_.birth.cluster_bandwidth);
    std::vector<int> counts(clusters.centroids.size(), 0);
    for (int label : clusters.labels) ++counts[label];
    // Stable birth order regardless of which camera saw the cluster first.
    std::vector<int> order(clusters.centroids.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const Vec2& ca = clusters.centroids[a];
      const Vec2& cb = clusters.centroids[b];
      return ca[0] != cb[0] ? ca[0] < cb[0] : ca[1] < cb[1];
    });
    for (int k : order) {
      if (counts[k] < config_.birth.min_cluster_size) continue;
      GaussianState st = make_birth_state(clusters.centroids[k], config_.birth,
                                          config_.keypoint_count);
      for (size_t idx = 0; idx < points.size(); ++idx) {
        if (clusters.labels[idx] != k) continue;
        st = ukf_update_kp(sources[idx]->keypoints, st, *source_cams[idx], config_.ut);
      }
      tracks_.push_back(Track{next_id_++, TrackStatus::kNew, std::move(st), 0, frame, frame});
    }
  }

  // Retire tracks that have missed too long, then collapse duplicates: the
  // younger of two heavily overlapping tracks goes, larger id on a tie.
  std::erase_if(tracks_, [&](const Track& tr) {
    return tr.consecutive_misses > config_.termination.max_misses;
  });
  std::vector<char> dead(tracks_.size(), 0);
  std::vector<Box3D> boxes;
  boxes.reserve(tracks_.size());
  for (const Track& tr : tracks_) boxes.push_back(Box3D::from_ellipsoid(tr.state.ellipsoid()));
  for (size_t i = 0; i < tracks_.size(); ++i) {
    if (dead[i]) continue;
    for (size_t j = i + 1; j < tracks_.size(); ++j) {
      if (dead[j]) continue;
      if (iou3d(boxes[i], boxes[j]) <= config_.termination.duplicate_iou) continue;
      std::int64_t life_i = frame - tracks_[i].birth_frame;
      std::int64_t life_j = frame - tracks_[j].birth_frame;
      size_t victim = j;
      if (life_i < life_j) {
        victim = i;
      } else if (life_i == life_j) {
        victim = tracks_[i].id > tracks_[j].id ? i : j;
      }
      dead[victim] = 1;
      if (victim == i) break;
    }
  }
  size_t w = 0;
  for (size_t i = 0; i < tracks_.size(); ++i) {
    if (dead[i]) continue;
    if (w != i) tracks_[w] = std::move(tracks_[i]);  // self-move would clear it
    ++w;
  }
  tracks_.resize(w);

  std::vector<Estimate> estimates;
  for (const Track& tr : tracks_) {
    if (tr.status == TrackStatus::kTentative) continue;
    Estimate e;
    e.track_id = tr.id;
    e.position = tr.state.position();
    e.velocity = tr.state.velocity();
    e.half_extents = tr.state.log_shape().array().exp();
    e.joints.reserve(tr.state.keypoints.size());
    for (const KeypointBlock& kb : tr.state.keypoints) e.joints.push_back(kb.mean.head<3>());
    estimates.push_back(std::move(e));
  }
  return estimates;
}

}  // namespace mcmot
