#include "mcmot3d/metrics.hpp"

#include "mcmot3d/association.hpp"
#include "mcmot3d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mcmot {

namespace {

using FrameView = std::map<std::int64_t, std::vector<std::pair<std::int64_t, const TrajectoryPoint*>>>;

FrameView by_frame(const TrajectorySet& set) {
  FrameView view;
  for (const auto& [id, frames] : set.tracks) {
    for (const auto& [t, point] : frames) {
      view[t].emplace_back(id, &point);
    }
  }
  return view;
}

Box3D point_box(const TrajectoryPoint& p) {
  return Box3D{p.position - p.half_extents, p.position + p.half_extents};
}

}  // namespace

bool TrajectorySet::empty() const {
  for (const auto& [id, frames] : tracks) {
    if (!frames.empty()) return false;
  }
  return true;
}

std::pair<std::int64_t, std::int64_t> TrajectorySet::frame_range() const {
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& [id, frames] : tracks) {
    if (frames.empty()) continue;
    lo = std::min(lo, frames.begin()->first);
    hi = std::max(hi, frames.rbegin()->first);
  }
  if (lo > hi) return {0, -1};
  return {lo, hi};
}

void TrajectorySet::insert(std::int64_t id, std::int64_t frame, TrajectoryPoint point) {
  tracks[id][frame] = std::move(point);
}

double base_distance(const TrajectoryPoint& a, const TrajectoryPoint& b, const MetricConfig& cfg) {
  if (cfg.distance == BaseDistance::kGroundEuclidean) {
    return (a.position.head<2>() - b.position.head<2>()).norm();
  }
  return giou3d_distance(point_box(a), point_box(b));
}

ClearMotResult clear_mot(const TrajectorySet& gt, const TrajectorySet& est,
                         const MetricConfig& cfg) {
  if (gt.empty()) throw std::invalid_argument("ground truth is empty");
  FrameView gt_frames = by_frame(gt);
  FrameView est_frames = by_frame(est);
  std::set<std::int64_t> frames;
  for (const auto& [t, v] : gt_frames) frames.insert(t);
  for (const auto& [t, v] : est_frames) frames.insert(t);

  static const std::vector<std::pair<std::int64_t, const TrajectoryPoint*>> kNone;
  ClearMotResult r;
  std::map<std::int64_t, std::int64_t> prev;        // matches alive last frame
  std::map<std::int64_t, std::int64_t> last_match;  // most recent partner ever
  for (std::int64_t t : frames) {
    auto git = gt_frames.find(t);
    auto eit = est_frames.find(t);
    const auto& gts = git == gt_frames.end() ? kNone : git->second;
    const auto& ests = eit == est_frames.end() ? kNone : eit->second;
    r.gt_count += static_cast<std::int64_t>(gts.size());

    auto find_in = [](const auto& items, std::int64_t id) -> const TrajectoryPoint* {
      for (const auto& [iid, p] : items) {
        if (iid == id) return p;
      }
      return nullptr;
    };

    // Matches from the previous frame persist while still close enough.
    std::map<std::int64_t, std::int64_t> cur;
    std::set<std::int64_t> est_taken;
    for (const auto& [gid, eid] : prev) {
      const TrajectoryPoint* gp = find_in(gts, gid);
      const TrajectoryPoint* ep = find_in(ests, eid);
      if (gp && ep && base_distance(*gp, *ep, cfg) <= cfg.match_threshold) {
        cur[gid] = eid;
        est_taken.insert(eid);
      }
    }

    // Remaining objects get a fresh optimal pairing.
    std::vector<std::pair<std::int64_t, const TrajectoryPoint*>> free_gt, free_est;
    for (const auto& item : gts) {
      if (!cur.count(item.first)) free_gt.push_back(item);
    }
    for (const auto& item : ests) {
      if (!est_taken.count(item.first)) free_est.push_back(item);
    }
    if (!free_gt.empty() && !free_est.empty()) {
      Eigen::MatrixXd d(free_gt.size(), free_est.size());
      for (size_t i = 0; i < free_gt.size(); ++i) {
        for (size_t j = 0; j < free_est.size(); ++j) {
          double dist = base_distance(*free_gt[i].second, *free_est[j].second, cfg);
          d(i, j) = dist <= cfg.match_threshold ? dist : kInfeasibleCost;
        }
      }
      std::vector<int> a = solve_assignment(d, cfg.match_threshold + 1.0);
      for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] > 0) cur[free_gt[i].first] = free_est[a[i] - 1].first;
      }
    }

    for (const auto& [gid, eid] : cur) {
      auto lm = last_match.find(gid);
      if (lm != last_match.end() && lm->second != eid) ++r.id_switches;
      last_match[gid] = eid;
    }
    auto matched = static_cast<std::int64_t>(cur.size());
    r.true_positives += matched;
    r.false_positives += static_cast<std::int64_t>(ests.size()) - matched;
    r.misses += static_cast<std::int64_t>(gts.size()) - matched;
    prev = std::move(cur);
  }
  r.mota = 1.0 -
           static_cast<double>(r.false_positives + r.misses + r.id_switches) /
               static_cast<double>(r.gt_count);
  return r;
}

double idf1(const TrajectorySet& gt, const TrajectorySet& est, const MetricConfig& cfg) {
  if (gt.empty()) throw std::invalid_argument("ground truth is empty");
  std::vector<std::int64_t> gt_ids, est_ids;
  for (const auto& [id, frames] : gt.tracks) {
    if (!frames.empty()) gt_ids.push_back(id);
  }
  for (const auto& [id, frames] : est.tracks) {
    if (!frames.empty()) est_ids.push_back(id);
  }
  std::int64_t gt_len = 0, est_len = 0;
  for (auto id : gt_ids) gt_len += static_cast<std::int64_t>(gt.tracks.at(id).size());
  for (auto id : est_ids) est_len += static_cast<std::int64_t>(est.tracks.at(id).size());
  if (est_ids.empty()) return 0.0;

  // Frames where the pair is close enough count toward its identity overlap.
  Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(gt_ids.size(), est_ids.size());
  for (size_t i = 0; i < gt_ids.size(); ++i) {
    const auto& gframes = gt.tracks.at(gt_ids[i]);
    for (size_t j = 0; j < est_ids.size(); ++j) {
      const auto& eframes = est.tracks.at(est_ids[j]);
      double count = 0;
      for (const auto& [t, gp] : gframes) {
        auto et = eframes.find(t);
        if (et == eframes.end()) continue;
        if (base_distance(gp, et->second, cfg) <= cfg.match_threshold) ++count;
      }
      overlap(i, j) = count;
    }
  }
  Eigen::MatrixXd cost(gt_ids.size(), est_ids.size());
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      cost(i, j) = overlap(i, j) > 0 ? -overlap(i, j) : kInfeasibleCost;
    }
  }
  std::vector<int> a = solve_assignment(cost, 0.0);
  double idtp = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 0) idtp += overlap(static_cast<Eigen::Index>(i), a[i] - 1);
  }
  return 2.0 * idtp / static_cast<double>(gt_len + est_len);
}

std::vector<Ospa2Point> ospa2_series(const TrajectorySet& gt, const TrajectorySet& est,
                                     const MetricConfig& cfg) {
  if (gt.empty()) throw std::invalid_argument("ground truth is empty");
  if (!(cfg.ospa_cutoff > 0.0)) throw std::invalid_argument("ospa cutoff must be positive");
  if (cfg.ospa_order < 1) throw std::invalid_argument("ospa order must be >= 1");
  const double c = cfg.ospa_cutoff;
  const double p = static_cast<double>(cfg.ospa_order);

  std::vector<const std::map<std::int64_t, TrajectoryPoint>*> gtr, etr;
  for (const auto& [id, frames] : gt.tracks) {
    if (!frames.empty()) gtr.push_back(&frames);
  }
  for (const auto& [id, frames] : est.tracks) {
    if (!frames.empty()) etr.push_back(&frames);
  }
  const auto n_gt = gtr.size();
  const auto n_est = etr.size();

  auto [g_lo, g_hi] = gt.frame_range();
  std::int64_t lo = g_lo, hi = g_hi;
  if (!est.empty()) {
    auto [e_lo, e_hi] = est.frame_range();
    lo = std::min(lo, e_lo);
    hi = std::max(hi, e_hi);
  }

  // Running per-pair sums of the per-frame cutoff distances; dividing by the
  // window length gives the pair's time-averaged distance in one step.
  Eigen::MatrixXd cum = Eigen::MatrixXd::Zero(n_gt, n_est);
  std::vector<std::int64_t> seen_gt(n_gt, 0), seen_est(n_est, 0);

  std::vector<Ospa2Point> series;
  series.reserve(static_cast<size_t>(hi - lo + 1));
  for (std::int64_t t = lo; t <= hi; ++t) {
    std::vector<const TrajectoryPoint*> gp(n_gt, nullptr), ep(n_est, nullptr);
    for (size_t i = 0; i < n_gt; ++i) {
      auto it = gtr[i]->find(t);
      if (it != gtr[i]->end()) {
        gp[i] = &it->second;
        ++seen_gt[i];
      }
    }
    for (size_t j = 0; j < n_est; ++j) {
      auto it = etr[j]->find(t);
      if (it != etr[j]->end()) {
        ep[j] = &it->second;
        ++seen_est[j];
      }
    }
    for (size_t i = 0; i < n_gt; ++i) {
      for (size_t j = 0; j < n_est; ++j) {
        if (gp[i] && ep[j]) {
          cum(i, j) += std::min(base_distance(*gp[i], *ep[j], cfg), c);
        } else if (gp[i] || ep[j]) {
          cum(i, j) += c;
        }
      }
    }

    const double window = static_cast<double>(t - lo + 1);
    std::vector<int> gw, ew;
    for (size_t i = 0; i < n_gt; ++i) {
      if (seen_gt[i] > 0) gw.push_back(static_cast<int>(i));
    }
    for (size_t j = 0; j < n_est; ++j) {
      if (seen_est[j] > 0) ew.push_back(static_cast<int>(j));
    }

    double value = 0.0;
    if (gw.empty() && ew.empty()) {
      value = 0.0;
    } else if (gw.empty() || ew.empty()) {
      value = c;
    } else {
      bool gt_rows = gw.size() <= ew.size();
      const auto& rows = gt_rows ? gw : ew;
      const auto& cols = gt_rows ? ew : gw;
      Eigen::MatrixXd d(rows.size(), cols.size());
      for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < cols.size(); ++j) {
          double avg = gt_rows ? cum(rows[i], cols[j]) : cum(cols[j], rows[i]);
          d(i, j) = std::pow(avg / window, p);
        }
      }
      std::vector<int> a = solve_assignment(d, std::pow(c, p) + 1.0);
      double total = 0.0;
      for (size_t i = 0; i < a.size(); ++i) {
        total += d(static_cast<Eigen::Index>(i), a[i] - 1);  // all rows match
      }
      total += std::pow(c, p) * static_cast<double>(cols.size() - rows.size());
      value = std::pow(total / static_cast<double>(cols.size()), 1.0 / p);
    }
    series.push_back(Ospa2Point{t, value});
  }
  return series;
}

std::optional<PoseAccuracy> pose_accuracy(const TrajectorySet& gt, const TrajectorySet& est,
                                          const MetricConfig& cfg) {
  if (gt.empty()) throw std::invalid_argument("ground truth is empty");
  FrameView gt_frames = by_frame(gt);
  FrameView est_frames = by_frame(est);

  double err_sum = 0.0;
  std::int64_t joints = 0, correct = 0, pairs = 0;
  for (const auto& [t, gts] : gt_frames) {
    auto eit = est_frames.find(t);
    if (eit == est_frames.end()) continue;
    const auto& ests = eit->second;

    Eigen::MatrixXd d(gts.size(), ests.size());
    for (size_t i = 0; i < gts.size(); ++i) {
      for (size_t j = 0; j < ests.size(); ++j) {
        double dist =
            (gts[i].second->position.head<2>() - ests[j].second->position.head<2>()).norm();
        d(i, j) = dist <= cfg.person_match_radius ? dist : kInfeasibleCost;
      }
    }
    std::vector<int> a = solve_assignment(d, cfg.person_match_radius + 1.0);
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      const TrajectoryPoint& g = *gts[i].second;
      const TrajectoryPoint& e = *ests[a[i] - 1].second;
      size_t nj = std::min(g.joints.size(), e.joints.size());
      if (nj == 0) continue;
      ++pairs;
      for (size_t j = 0; j < nj; ++j) {
        double err = (g.joints[j] - e.joints[j]).norm();
        err_sum += err;
        ++joints;
        if (err <= cfg.pck_threshold) ++correct;
      }
    }
  }
  if (joints == 0) return std::nullopt;
  PoseAccuracy out;
  out.mpjpe = err_sum / static_cast<double>(joints);
  out.pck = 100.0 * static_cast<double>(correct) / static_cast<double>(joints);
  out.joint_count = joints;
  out.pair_count = pairs;
  return out;
}

}  // namespace mcmot
