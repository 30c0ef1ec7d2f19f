#pragma once

#include "mcmot3d/types.hpp"

namespace mcmot {

enum class GeoStatus {
  kOk,
  kBehindCamera,  // projective depth at or below the epsilon floor
  kDegenerate,    // projected extent collapsed to zero
  kSingular,      // ground-plane homography not invertible
  kAtInfinity,    // back-projected ray parallel to the ground plane
};

template <typename T>
struct GeoResult {
  GeoStatus status = GeoStatus::kOk;
  T value{};

  bool ok() const { return status == GeoStatus::kOk; }
  explicit operator bool() const { return ok(); }

  static GeoResult success(T v) { return GeoResult{GeoStatus::kOk, std::move(v)}; }
  static GeoResult failure(GeoStatus s) { return GeoResult{s, T{}}; }
};

inline constexpr double kDepthEpsilon = 1e-9;
inline constexpr double kHomographyDetEpsilon = 1e-12;

// World point -> pixel through a 3x4 projection matrix.
GeoResult<Vec2> project_point(const Mat34& projection, const Vec3& point);

GeoResult<Vec2> project_keypoint(const Vec3& point, const CameraModel& cam);

// Image box of an axis-aligned ellipsoid, approximated by projecting the six
// axis extreme points and taking their pixel bounding box.
GeoResult<BBox2D> project_ellipsoid_to_bbox(const Ellipsoid3D& ellipsoid, const CameraModel& cam);

// 3x3 map (x, y, 1) -> homogeneous pixel built from the camera's ground
// columns; invert it to shoot a pixel back onto the z=0 plane.
Mat3 ground_homography(const CameraModel& cam);

// Bottom-center of a detection box back-projected onto the ground plane.
GeoResult<Vec2> bbox_bottom_to_ground(const BBox2D& bbox, const CameraModel& cam);

// Intersection-over-union of axis-aligned boxes. Throws std::invalid_argument
// when either box has non-positive volume.
double iou3d(const Box3D& a, const Box3D& b);

// Generalized IoU in (-1, 1]; penalizes empty space in the enclosing box.
double giou3d(const Box3D& a, const Box3D& b);

// (1 - GIoU) / 2, a distance in [0, 1).
double giou3d_distance(const Box3D& a, const Box3D& b);

}  // namespace mcmot
