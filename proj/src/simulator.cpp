#include "mcmot3d/simulator.hpp"

#include "mcmot3d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mcmot {

namespace {

std::mt19937_64 frame_rng(std::uint64_t seed, std::int64_t t, int camera_id, std::uint32_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32),
                    static_cast<std::uint32_t>(camera_id), salt};
  return std::mt19937_64(seq);
}

struct PathSampler {
  std::vector<Vec2> pts;
  std::vector<double> cum;  // cumulative arc length
  double speed = 0.0;       // m/s along the path

  Vec2 position(double arc) const {
    if (pts.size() == 1 || cum.back() <= 0.0) return pts.front();
    arc = std::clamp(arc, 0.0, cum.back());
    size_t seg = 1;
    while (seg + 1 < cum.size() && cum[seg] < arc) ++seg;
    double t = (arc - cum[seg - 1]) / (cum[seg] - cum[seg - 1]);
    return pts[seg - 1] + t * (pts[seg] - pts[seg - 1]);
  }

  Vec2 direction(double arc) const {
    if (pts.size() == 1 || cum.back() <= 0.0) return Vec2(1.0, 0.0);
    arc = std::clamp(arc, 0.0, cum.back());
    size_t seg = 1;
    while (seg + 1 < cum.size() && cum[seg] <= arc) ++seg;
    Vec2 d = pts[seg] - pts[seg - 1];
    double n = d.norm();
    return n > 0.0 ? Vec2(d / n) : Vec2(1.0, 0.0);
  }
};

PathSampler build_path(const ActorSpec& actor, double dt, double max_speed) {
  if (actor.waypoints.empty()) throw std::invalid_argument("actor needs at least one waypoint");
  if (actor.despawn_frame <= actor.spawn_frame) {
    throw std::invalid_argument("actor lifetime must be positive");
  }
  PathSampler p;
  p.pts = actor.waypoints;
  p.cum.resize(p.pts.size());
  p.cum[0] = 0.0;
  for (size_t i = 1; i < p.pts.size(); ++i) {
    p.cum[i] = p.cum[i - 1] + (p.pts[i] - p.pts[i - 1]).norm();
  }
  double duration = static_cast<double>(actor.despawn_frame - actor.spawn_frame) * dt;
  p.speed = p.cum.back() / duration;
  if (p.speed > max_speed + 1e-9) {
    throw std::invalid_argument("actor path exceeds the speed limit");
  }
  return p;
}

}  // namespace

GroundTruth simulate_ground_truth(const ScenarioConfig& scenario) {
  if (scenario.frame_count < 0) throw std::invalid_argument("frame count must be >= 0");
  if (!(scenario.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!valid_keypoint_count(scenario.keypoint_count)) {
    throw std::invalid_argument("unsupported keypoint count");
  }

  std::vector<PathSampler> paths;
  paths.reserve(scenario.actors.size());
  for (const ActorSpec& actor : scenario.actors) {
    if (!(actor.half_extents.array() > 0.0).all()) {
      throw std::invalid_argument("actor half-extents must be positive");
    }
    paths.push_back(build_path(actor, scenario.dt, scenario.max_speed));
  }

  GroundTruth truth;
  truth.frames.resize(scenario.frame_count);
  for (std::int64_t t = 0; t < scenario.frame_count; ++t) {
    for (size_t a = 0; a < scenario.actors.size(); ++a) {
      const ActorSpec& actor = scenario.actors[a];
      if (t < actor.spawn_frame || t >= actor.despawn_frame) continue;
      const PathSampler& path = paths[a];
      double t_rel = static_cast<double>(t - actor.spawn_frame) * scenario.dt;
      double arc = path.speed * t_rel;

      ActorState st;
      Vec2 ground = path.position(arc);
      Vec2 dir = path.direction(arc);
      st.half_extents = actor.half_extents;
      st.center = Vec3(ground[0], ground[1], actor.half_extents[2]);
      st.velocity = Vec3(dir[0], dir[1], 0.0) * path.speed;

      double heading = std::atan2(dir[1], dir[0]);
      bool moving = path.speed > 1e-9;
      double phase = 2.0 * 3.14159265358979323846 * actor.gait.stride_hz * t_rel;
      st.joints = pose_skeleton_gait(scenario.keypoint_count, st.center, st.half_extents, heading,
                                     moving ? phase : 0.0,
                                     moving ? actor.gait.swing_amplitude : 0.0,
                                     moving ? actor.gait.bob_amplitude : 0.0);
      truth.frames[t][static_cast<int>(a)] = std::move(st);
    }
  }
  return truth;
}

bool camera_active(const ScenarioConfig& scenario, int camera_id, std::int64_t t) {
  auto it = scenario.schedule.find(camera_id);
  if (it == scenario.schedule.end()) return true;
  return it->second.active_at(t);
}

std::map<int, std::vector<Detection>> render_detections(const GroundTruth& truth,
                                                        const ScenarioConfig& scenario,
                                                        std::int64_t t) {
  std::map<int, std::vector<Detection>> out;
  if (t < 0 || t >= static_cast<std::int64_t>(truth.frames.size())) return out;
  const auto& actors = truth.frames[t];

  for (const CameraModel& cam : scenario.cameras) {
    if (!camera_active(scenario, cam.id, t)) continue;
    std::mt19937_64 rng = frame_rng(scenario.seed, t, cam.id, 0x5eed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto prob_it = scenario.detection_prob.find(cam.id);
    double p_detect = prob_it == scenario.detection_prob.end() ? 1.0 : prob_it->second;

    std::vector<Detection>& dets = out[cam.id];
    std::vector<Vec2> true_log_sizes;

    for (const auto& [actor_id, st] : actors) {
      Ellipsoid3D body{st.center, st.half_extents.array().log()};
      GeoResult<BBox2D> box = project_ellipsoid_to_bbox(body, cam);
      if (!box.ok()) continue;
      const BBox2D& b = box.value;
      if (b.right() < 0.0 || b.left > cam.image_width || b.bottom() < 0.0 ||
          b.top > cam.image_height) {
        continue;
      }
      if (unit(rng) >= p_detect) continue;

      double w = std::max(1.0, b.width() + scenario.bbox_noise_px * gauss(rng));
      double h = std::max(1.0, b.height() + scenario.bbox_noise_px * gauss(rng));
      double l = b.left + scenario.bbox_noise_px * gauss(rng);
      double tp = b.top + scenario.bbox_noise_px * gauss(rng);

      Detection det;
      det.camera_id = cam.id;
      det.bbox = BBox2D::from_ltwh(l, tp, w, h);
      det.confidence = 0.8 + 0.2 * unit(rng);
      det.keypoints.resize(st.joints.size());
      for (size_t j = 0; j < st.joints.size(); ++j) {
        GeoResult<Vec2> pix = project_point(cam.projection, st.joints[j]);
        if (!pix.ok()) continue;
        Vec2 p = pix.value;
        p[0] += scenario.keypoint_noise_px * gauss(rng);
        p[1] += scenario.keypoint_noise_px * gauss(rng);
        if (p[0] < 0.0 || p[0] > cam.image_width || p[1] < 0.0 || p[1] > cam.image_height) {
          continue;
        }
        det.keypoints[j] = Keypoint2D{p, true};
      }
      true_log_sizes.emplace_back(std::log(w), std::log(h));
      dets.push_back(std::move(det));
    }

    auto clutter_it = scenario.clutter_rate.find(cam.id);
    double rate = clutter_it == scenario.clutter_rate.end() ? 0.0 : clutter_it->second;
    if (rate > 0.0) {
      // Clutter boxes draw their log sizes from this frame's real detections
      // so they are not trivially separable by scale.
      Vec2 mean_ls(std::log(90.0), std::log(220.0));
      Vec2 std_ls(0.25, 0.25);
      if (!true_log_sizes.empty()) {
        Vec2 sum = Vec2::Zero();
        for (const Vec2& v : true_log_sizes) sum += v;
        mean_ls = sum / static_cast<double>(true_log_sizes.size());
        if (true_log_sizes.size() > 1) {
          Vec2 ss = Vec2::Zero();
          for (const Vec2& v : true_log_sizes) ss += (v - mean_ls).cwiseAbs2();
          std_ls = (ss / static_cast<double>(true_log_sizes.size() - 1)).cwiseSqrt();
        } else {
          std_ls = Vec2(0.1, 0.1);
        }
      }
      std::poisson_distribution<int> poisson(rate);
      int n_clutter = poisson(rng);
      for (int k = 0; k < n_clutter; ++k) {
        double w = std::clamp(std::exp(mean_ls[0] + std_ls[0] * gauss(rng)), 2.0,
                              cam.image_width);
        double h = std::clamp(std::exp(mean_ls[1] + std_ls[1] * gauss(rng)), 2.0,
                              cam.image_height);
        double l = unit(rng) * std::max(1.0, cam.image_width - w);
        double tp = unit(rng) * std::max(1.0, cam.image_height - h);
        Detection det;
        det.camera_id = cam.id;
        det.bbox = BBox2D::from_ltwh(l, tp, w, h);
        det.confidence = 0.3 + 0.6 * unit(rng);
        det.keypoints.assign(scenario.keypoint_count, Keypoint2D{});
        dets.push_back(std::move(det));
      }
    }
  }
  return out;
}

std::map<int, std::vector<Detection>> delete_detections(
    const std::map<int, std::vector<Detection>>& detections, double rate, std::uint64_t seed) {
  if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("deletion rate must be in [0, 1]");
  std::map<int, std::vector<Detection>> out;
  for (const auto& [cam_id, dets] : detections) {
    std::mt19937_64 rng = frame_rng(seed, 0, cam_id, 0xde1e7e);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Detection>& kept = out[cam_id];
    for (const Detection& d : dets) {
      if (unit(rng) >= rate) kept.push_back(d);
    }
  }
  return out;
}

}  // namespace mcmot
