#pragma once

// Shared fixtures for the unit and acceptance test binaries: a pinhole
// look-at camera builder and the standard four-camera perimeter rig used
// by most scenario tests.

#include <random>
#include <vector>

#include "mcmot3d/types.hpp"

namespace mcmot::testing {

// Build a pinhole camera at `center` looking at `target`, world z up.
// Image u grows to the camera's right, v grows downward in the image
// (so higher world points get smaller v).
inline CameraModel make_lookat_camera(int id, const Vec3& center, const Vec3& target,
                                      double fx = 900.0, double fy = 900.0, double cx = 640.0,
                                      double cy = 360.0, int image_width = 1280,
                                      int image_height = 720) {
  Vec3 forward = (target - center).normalized();
  Vec3 up(0.0, 0.0, 1.0);
  if (std::abs(forward.dot(up)) > 0.999) up = Vec3(0.0, 1.0, 0.0);
  Vec3 right = forward.cross(up).normalized();
  Vec3 down = forward.cross(right);  // unit because forward ⟂ right

  Mat3 rot;
  rot.row(0) = right.transpose();
  rot.row(1) = down.transpose();
  rot.row(2) = forward.transpose();

  Mat3 intr;
  intr << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;

  Mat34 extrinsic;
  extrinsic.leftCols<3>() = rot;
  extrinsic.col(3) = -rot * center;

  CameraModel cam;
  cam.id = id;
  cam.projection = intr * extrinsic;
  cam.image_width = image_width;
  cam.image_height = image_height;
  cam.bbox_noise_diag = Vec4(9.0, 9.0, 0.01, 0.01);
  cam.keypoint_noise_diag = Vec2(4.0, 4.0);
  return cam;
}

// Four cameras on the corners of a 10 m x 10 m area at 2.5 m height,
// tilted inward toward a point at person height.
inline std::vector<CameraModel> four_camera_rig() {
  const Vec3 target(0.0, 0.0, 0.9);
  return {
      make_lookat_camera(0, Vec3(5.0, 5.0, 2.5), target),
      make_lookat_camera(1, Vec3(-5.0, 5.0, 2.5), target),
      make_lookat_camera(2, Vec3(-5.0, -5.0, 2.5), target),
      make_lookat_camera(3, Vec3(5.0, -5.0, 2.5), target),
  };
}

// Random symmetric positive-definite matrix with eigenvalues in
// roughly [0.1, 1.1] * scale.
inline Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  }
  Eigen::MatrixXd m = a * a.transpose() / n;
  m += 0.1 * Eigen::MatrixXd::Identity(n, n);
  return scale * m;
}

inline Eigen::VectorXd random_vector(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

// Exhaustive minimum cost over all injective row->column maps where any row
// may instead pay miss_cost. Dynamic program over column subsets; exact for
// matrices up to ~8 x 12.
inline double lap_exhaustive(const Eigen::MatrixXd& cost, double miss_cost) {
  const int nr = static_cast<int>(cost.rows());
  const int nc = static_cast<int>(cost.cols());
  const double inf = std::numeric_limits<double>::infinity();
  const int full = 1 << nc;
  std::vector<double> cur(full, inf), next(full, inf);
  cur[0] = 0.0;
  for (int i = 0; i < nr; ++i) {
    std::fill(next.begin(), next.end(), inf);
    for (int mask = 0; mask < full; ++mask) {
      if (cur[mask] == inf) continue;
      if (cur[mask] + miss_cost < next[mask]) next[mask] = cur[mask] + miss_cost;
      for (int j = 0; j < nc; ++j) {
        if (mask & (1 << j)) continue;
        if (!std::isfinite(cost(i, j))) continue;
        double v = cur[mask] + cost(i, j);
        int m = mask | (1 << j);
        if (v < next[m]) next[m] = v;
      }
    }
    cur.swap(next);
  }
  double best = inf;
  for (double v : cur) best = std::min(best, v);
  return best;
}

}  // namespace mcmot::testing
