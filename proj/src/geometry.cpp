#include "mcmot3d/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mcmot {

GeoResult<Vec2> project_point(const Mat34& projection, const Vec3& point) {
  Vec3 h = projection * point.homogeneous();
  if (h[2] <= kDepthEpsilon) {
    return GeoResult<Vec2>::failure(GeoStatus::kBehindCamera);
  }
  return GeoResult<Vec2>::success(Vec2(h[0] / h[2], h[1] / h[2]));
}

GeoResult<Vec2> project_keypoint(const Vec3& point, const CameraModel& cam) {
  return project_point(cam.projection, point);
}

GeoResult<BBox2D> project_ellipsoid_to_bbox(const Ellipsoid3D& ellipsoid, const CameraModel& cam) {
  Vec3 h = ellipsoid.half_lengths();
  double min_u = std::numeric_limits<double>::infinity();
  double max_u = -std::numeric_limits<double>::infinity();
  double min_v = std::numeric_limits<double>::infinity();
  double max_v = -std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {-1.0, 1.0}) {
      Vec3 p = ellipsoid.center;
      p[axis] += sign * h[axis];
      GeoResult<Vec2> pix = project_point(cam.projection, p);
      if (!pix.ok()) return GeoResult<BBox2D>::failure(pix.status);
      min_u = std::min(min_u, pix.value[0]);
      max_u = std::max(max_u, pix.value[0]);
      min_v = std::min(min_v, pix.value[1]);
      max_v = std::max(max_v, pix.value[1]);
    }
  }
  double w = max_u - min_u;
  double hh = max_v - min_v;
  if (!(w > 0.0) || !(hh > 0.0)) {
    return GeoResult<BBox2D>::failure(GeoStatus::kDegenerate);
  }
  return GeoResult<BBox2D>::success(BBox2D{min_u, min_v, std::log(w), std::log(hh)});
}

Mat3 ground_homography(const CameraModel& cam) {
  Mat3 H;
  for (int i = 0; i < 3; ++i) {
    H.col(i) = cam.projection.col(cam.ground_columns[i]);
  }
  return H;
}

GeoResult<Vec2> bbox_bottom_to_ground(const BBox2D& bbox, const CameraModel& cam) {
  Mat3 H = ground_homography(cam);
  if (std::abs(H.determinant()) < kHomographyDetEpsilon) {
    return GeoResult<Vec2>::failure(GeoStatus::kSingular);
  }
  Vec3 pixel(bbox.left + 0.5 * bbox.width(), bbox.top + bbox.height(), 1.0);
  Vec3 g = H.partialPivLu().solve(pixel);
  if (std::abs(g[2]) < kHomographyDetEpsilon) {
    return GeoResult<Vec2>::failure(GeoStatus::kAtInfinity);
  }
  return GeoResult<Vec2>::success(Vec2(g[0] / g[2], g[1] / g[2]));
}

double iou3d(const Box3D& a, const Box3D& b) {
  if (!(a.volume() > 0.0) || !(b.volume() > 0.0)) {
    throw std::invalid_argument("iou3d requires boxes with positive volume");
  }
  double inter = 1.0;
  for (int i = 0; i < 3; ++i) {
    inter *= std::max(0.0, std::min(a.hi[i], b.hi[i]) - std::max(a.lo[i], b.lo[i]));
  }
  double uni = a.volume() + b.volume() - inter;
  return inter / uni;
}

double giou3d(const Box3D& a, const Box3D& b) {
  double iou = iou3d(a, b);
  double inter = 1.0;
  double hull = 1.0;
  for (int i = 0; i < 3; ++i) {
    inter *= std::max(0.0, std::min(a.hi[i], b.hi[i]) - std::max(a.lo[i], b.lo[i]));
    hull *= std::max(a.hi[i], b.hi[i]) - std::min(a.lo[i], b.lo[i]);
  }
  double uni = a.volume() + b.volume() - inter;
  return iou - (hull - uni) / hull;
}

double giou3d_distance(const Box3D& a, const Box3D& b) {
  return 0.5 * (1.0 - giou3d(a, b));
}

}  // namespace mcmot
