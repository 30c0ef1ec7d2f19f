#include "mcmot3d/association.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcmot {

Eigen::MatrixXd build_cost_matrix(const std::vector<GaussianState>& tracks,
                                  const std::vector<Detection>& detections,
                                  const CameraModel& cam, const GatingConfig& gating,
                                  const UtConfig& ut) {
  const auto n = static_cast<Eigen::Index>(tracks.size());
  const auto m = static_cast<Eigen::Index>(detections.size());
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(n, m, kInfeasibleCost);

  // Ground-plane back-projections are per detection, not per pair.
  std::vector<GeoResult<Vec2>> grounds(detections.size());
  for (size_t j = 0; j < detections.size(); ++j) {
    grounds[j] = bbox_bottom_to_ground(detections[j].bbox, cam);
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    auto moments = predict_measurement_ks(tracks[i], cam, ut);
    if (!moments) continue;
    Vec2 track_ground = tracks[i].mean.head<2>();
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!grounds[j].ok()) continue;
      if ((grounds[j].value - track_ground).norm() > gating.ground_gate) continue;
      auto log_lik = detection_log_likelihood(detections[j].bbox, *moments);
      if (!log_lik) continue;
      double c = -*log_lik;
      if (c > gating.cost_gate) continue;
      cost(i, j) = c;
    }
  }
  return cost;
}

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost, double miss_cost) {
  if (!std::isfinite(miss_cost)) {
    throw std::invalid_argument("miss cost must be finite");
  }
  const auto nr = static_cast<int>(cost.rows());
  const auto m = static_cast<int>(cost.cols());
  if (nr == 0) return {};
  const int nc = m + nr;  // one private miss column per row

  // Shift so every feasible edge is non-negative; each row takes exactly one
  // column, so the objective moves by a constant and the argmin is unchanged.
  double shift = miss_cost;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < m; ++j) {
      if (std::isfinite(cost(i, j))) shift = std::min(shift, cost(i, j));
    }
  }
  auto entry = [&](int i, int j) -> double {
    if (j < m) {
      double v = cost(i, j);
      return std::isfinite(v) ? v - shift : kInfeasibleCost;
    }
    return j == m + i ? miss_cost - shift : kInfeasibleCost;
  };

  // Shortest augmenting path with dual updates, one augmentation per row.
  std::vector<double> u(nr, 0.0), v(nc, 0.0), shortest(nc);
  std::vector<int> path(nc, -1), col4row(nr, -1), row4col(nc, -1), remaining(nc);
  std::vector<char> in_rows(nr), in_cols(nc);

  for (int cur = 0; cur < nr; ++cur) {
    std::fill(in_rows.begin(), in_rows.end(), 0);
    std::fill(in_cols.begin(), in_cols.end(), 0);
    std::fill(shortest.begin(), shortest.end(), kInfeasibleCost);
    // Reverse order so cost ties settle on the lowest column index.
    for (int it = 0; it < nc; ++it) remaining[it] = nc - it - 1;
    int num_remaining = nc;

    double min_val = 0.0;
    int i = cur;
    int sink = -1;
    while (sink == -1) {
      in_rows[i] = 1;
      int index = -1;
      double lowest = kInfeasibleCost;
      for (int it = 0; it < num_remaining; ++it) {
        int j = remaining[it];
        double r = min_val + entry(i, j) - u[i] - v[j];
        if (r < shortest[j]) {
          path[j] = i;
          shortest[j] = r;
        }
        if (shortest[j] < lowest || (shortest[j] == lowest && row4col[j] == -1)) {
          lowest = shortest[j];
          index = it;
        }
      }
      min_val = lowest;
      if (!std::isfinite(min_val)) {
        throw std::runtime_error("assignment problem is infeasible");
      }
      int j = remaining[index];
      if (row4col[j] == -1) {
        sink = j;
      } else {
        i = row4col[j];
      }
      in_cols[j] = 1;
      remaining[index] = remaining[--num_remaining];
    }

    u[cur] += min_val;
    for (int k = 0; k < nr; ++k) {
      if (in_rows[k] && k != cur) u[k] += min_val - shortest[col4row[k]];
    }
    for (int j = 0; j < nc; ++j) {
      if (in_cols[j]) v[j] -= min_val - shortest[j];
    }

    int j = sink;
    while (true) {
      int k = path[j];
      row4col[j] = k;
      std::swap(col4row[k], j);
      if (k == cur) break;
    }
  }

  std::vector<int> out(nr);
  for (int i = 0; i < nr; ++i) out[i] = col4row[i] < m ? col4row[i] + 1 : 0;
  return out;
}

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& assignment,
                       double miss_cost) {
  double total = 0.0;
  for (size_t i = 0; i < assignment.size(); ++i) {
    int j = assignment[i];
    total += j == 0 ? miss_cost : cost(static_cast<Eigen::Index>(i), j - 1);
  }
  return total;
}

AssignmentMap associate_all(const std::vector<GaussianState>& tracks,
                            const std::map<int, std::vector<Detection>>& detections_by_camera,
                            const std::vector<CameraModel>& cameras, const GatingConfig& gating,
                            const UtConfig& ut) {
  static const std::vector<Detection> kNone;
  AssignmentMap out;
  for (const CameraModel& cam : cameras) {
    auto it = detections_by_camera.find(cam.id);
    const std::vector<Detection>& dets = it == detections_by_camera.end() ? kNone : it->second;
    Eigen::MatrixXd cost = build_cost_matrix(tracks, dets, cam, gating, ut);
    out[cam.id] = solve_assignment(cost, gating.miss_cost);
  }
  return out;
}

}  // namespace mcmot
