#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mcmot {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat34 = Eigen::Matrix<double, 3, 4>;

// Axis-aligned image box stored as [left, top, log(width), log(height)].
// Width/height live in log space so additive Gaussian noise can never
// produce a non-positive extent.
struct BBox2D {
  double left = 0.0;
  double top = 0.0;
  double log_w = 0.0;
  double log_h = 0.0;

  double width() const { return std::exp(log_w); }
  double height() const { return std::exp(log_h); }
  double right() const { return left + width(); }
  double bottom() const { return top + height(); }

  Vec4 as_vector() const { return Vec4(left, top, log_w, log_h); }

  static BBox2D from_vector(const Vec4& v) { return BBox2D{v[0], v[1], v[2], v[3]}; }

  // From pixel extents; throws if width/height are not positive.
  static BBox2D from_ltwh(double l, double t, double w, double h) {
    if (!(w > 0.0) || !(h > 0.0)) {
      throw std::invalid_argument("bbox width/height must be positive");
    }
    return BBox2D{l, t, std::log(w), std::log(h)};
  }
};

struct Keypoint2D {
  Vec2 pixel = Vec2::Zero();
  bool visible = false;
};

// One 2D detection from one camera: box, confidence, and an optional set of
// per-joint image points with visibility flags.
struct Detection {
  int camera_id = 0;
  BBox2D bbox;
  double confidence = 1.0;
  std::vector<Keypoint2D> keypoints;
};

// Pinhole camera with a 3x4 projection matrix (world -> homogeneous pixel).
// Measurement noise is stored as variance diagonals: 4 entries for the box
// measurement [l, t, log w, log h] and 2 for a keypoint pixel.
struct CameraModel {
  int id = 0;
  Mat34 projection = Mat34::Zero();
  double image_width = 0.0;
  double image_height = 0.0;
  Vec4 bbox_noise_diag = Vec4::Ones();
  Vec2 keypoint_noise_diag = Vec2::Ones();
  // Which projection-matrix columns span the z=0 plane mapping (x, y, 1) ->
  // pixel. Columns 0, 1, 3 for a world frame whose third axis is height.
  std::array<int, 3> ground_columns = {0, 1, 3};

  void validate() const {
    if (!(image_width > 0.0) || !(image_height > 0.0)) {
      throw std::invalid_argument("camera image size must be positive");
    }
    if (!(bbox_noise_diag.array() > 0.0).all() || !(keypoint_noise_diag.array() > 0.0).all()) {
      throw std::invalid_argument("camera noise variances must be positive");
    }
    for (int c : ground_columns) {
      if (c < 0 || c > 3) throw std::invalid_argument("ground column index out of range");
    }
    if (ground_columns[0] == ground_columns[1] || ground_columns[0] == ground_columns[2] ||
        ground_columns[1] == ground_columns[2]) {
      throw std::invalid_argument("ground column indices must be distinct");
    }
  }
};

// Axis-aligned ellipsoid: center plus per-axis log half-lengths.
struct Ellipsoid3D {
  Vec3 center = Vec3::Zero();
  Vec3 log_half = Vec3::Zero();

  Vec3 half_lengths() const { return log_half.array().exp(); }
};

// Axis-aligned box in world coordinates.
struct Box3D {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();

  static Box3D from_ellipsoid(const Ellipsoid3D& e) {
    Vec3 h = e.half_lengths();
    return Box3D{e.center - h, e.center + h};
  }

  double volume() const { return (hi - lo).prod(); }
};

}  // namespace mcmot
