#pragma once

#include "mcmot3d/filtering.hpp"

#include <map>
#include <vector>

namespace mcmot {

struct GatingConfig {
  double ground_gate = 2.0;  // meters between ground projections, closed gate
  double cost_gate = 10.0;   // nats; entries above this are infeasible
  double miss_cost = 100.0;  // nats charged for leaving a track unassigned
};

inline constexpr double kInfeasibleCost = std::numeric_limits<double>::infinity();

// Track rows by detection columns; +inf marks gated-out pairs. A track whose
// predicted box cannot be formed for this camera gets an all-infeasible row.
Eigen::MatrixXd build_cost_matrix(const std::vector<GaussianState>& tracks,
                                  const std::vector<Detection>& detections,
                                  const CameraModel& cam, const GatingConfig& gating,
                                  const UtConfig& ut = {});

// Minimum-cost assignment where every row may instead pay miss_cost to stay
// unassigned. Result entry i is 0 for a miss, otherwise the 1-based column
// matched to row i. Finite costs may be negative; miss_cost must be finite.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost, double miss_cost);

// Objective value of an assignment under the miss-cost convention.
double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& assignment,
                       double miss_cost);

// Camera id -> per-track assignment vector (same convention as
// solve_assignment), one entry per camera in `cameras`.
using AssignmentMap = std::map<int, std::vector<int>>;

AssignmentMap associate_all(const std::vector<GaussianState>& tracks,
                            const std::map<int, std::vector<Detection>>& detections_by_camera,
                            const std::vector<CameraModel>& cameras, const GatingConfig& gating,
                            const UtConfig& ut = {});

}  // namespace mcmot
