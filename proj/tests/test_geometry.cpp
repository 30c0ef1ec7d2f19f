#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "helpers.hpp"
#include "mcmot3d/geometry.hpp"

using namespace mcmot;
using mcmot::testing::four_camera_rig;
using mcmot::testing::make_lookat_camera;

namespace {

Mat34 identity_projection() {
  Mat34 m = Mat34::Zero();
  m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
  return m;
}

CameraModel identity_camera() {
  CameraModel cam;
  cam.id = 0;
  cam.projection = identity_projection();
  cam.image_width = 1280;
  cam.image_height = 720;
  cam.bbox_noise_diag = Vec4(9.0, 9.0, 0.01, 0.01);
  cam.keypoint_noise_diag = Vec2(4.0, 4.0);
  return cam;
}

}  // namespace

TEST_CASE("point projection divides by homogeneous depth") {
  const Mat34 m = identity_projection();
  auto r = project_point(m, Vec3(1.0, 2.0, 5.0));
  REQUIRE(r.ok());
  CHECK(r.value[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.value[1] == doctest::Approx(0.4).epsilon(1e-12));

  auto axis = project_point(m, Vec3(0.0, 0.0, 1.0));
  REQUIRE(axis.ok());
  CHECK(axis.value[0] == doctest::Approx(0.0));
  CHECK(axis.value[1] == doctest::Approx(0.0));
}

TEST_CASE("point projection is invariant to positive rescaling of the matrix") {
  const Mat34 m = identity_projection();
  const Mat34 scaled = 7.0 * m;
  auto a = project_point(m, Vec3(1.0, 2.0, 5.0));
  auto b = project_point(scaled, Vec3(1.0, 2.0, 5.0));
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.value[0] == doctest::Approx(b.value[0]).epsilon(1e-14));
  CHECK(a.value[1] == doctest::Approx(b.value[1]).epsilon(1e-14));
}

TEST_CASE("points at or behind the depth floor are rejected") {
  const Mat34 m = identity_projection();
  CHECK(project_point(m, Vec3(0.0, 0.0, -1.0)).status == GeoStatus::kBehindCamera);
  CHECK(project_point(m, Vec3(0.0, 0.0, 1e-10)).status == GeoStatus::kBehindCamera);
  CHECK(project_point(m, Vec3(0.0, 0.0, 0.0)).status == GeoStatus::kBehindCamera);
}

TEST_CASE("keypoint projection matches point projection") {
  CameraModel cam = identity_camera();
  auto r = project_keypoint(Vec3(1.0, 2.0, 5.0), cam);
  REQUIRE(r.ok());
  CHECK(r.value[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.value[1] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(project_keypoint(Vec3(0.0, 0.0, -2.0), cam).status == GeoStatus::kBehindCamera);
}

TEST_CASE("unit sphere five meters out produces the analytic box") {
  CameraModel cam = identity_camera();
  Ellipsoid3D e;
  e.center = Vec3(0.0, 0.0, 5.0);
  e.log_half = Vec3::Zero();  // half lengths (1, 1, 1)
  auto r = project_ellipsoid_to_bbox(e, cam);
  REQUIRE(r.ok());
  CHECK(r.value.left == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(r.value.top == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(r.value.log_w == doctest::Approx(std::log(0.4)).epsilon(1e-12));
  CHECK(r.value.log_h == doctest::Approx(std::log(0.4)).epsilon(1e-12));

  SUBCASE("flattening the depth axis to a disc leaves the box unchanged") {
    e.log_half[2] = std::log(1e-9);
    auto flat = project_ellipsoid_to_bbox(e, cam);
    REQUIRE(flat.ok());
    CHECK(flat.value.left == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(flat.value.top == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(flat.value.log_w == doctest::Approx(std::log(0.4)).epsilon(1e-12));
    CHECK(flat.value.log_h == doctest::Approx(std::log(0.4)).epsilon(1e-12));
  }
}

TEST_CASE("ellipsoid box fails cleanly on bad configurations") {
  CameraModel cam = identity_camera();
  Ellipsoid3D e;
  e.center = Vec3(0.0, 0.0, 0.5);
  e.log_half = Vec3::Zero();
  // Near extreme point sits at depth -0.5, behind the camera.
  CHECK(project_ellipsoid_to_bbox(e, cam).status == GeoStatus::kBehindCamera);

  // Half lengths so small they are absorbed by the center coordinates
  // collapse all extreme points onto one pixel.
  e.center = Vec3(1.0, 2.0, 5.0);
  e.log_half = Vec3(-800.0, -800.0, -800.0);
  CHECK(project_ellipsoid_to_bbox(e, cam).status == GeoStatus::kDegenerate);
}

TEST_CASE("six-point box is contained in a dense surface-sampling box") {
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // Start with the fixed offset-camera example, then random pairs.
  struct Pair {
    CameraModel cam;
    Ellipsoid3D ell;
  };
  std::vector<Pair> pairs;
  {
    Pair p;
    p.cam = identity_camera();
    p.ell.center = Vec3(1.0, 0.0, 4.0);
    p.ell.log_half = Vec3(0.3, 0.3, 0.9).array().log();
    pairs.push_back(p);
  }
  while (pairs.size() < 100) {
    Pair p;
    double angle = 2.0 * M_PI * uni(rng);
    Vec3 cam_pos(6.0 * std::cos(angle), 6.0 * std::sin(angle), 1.5 + 2.0 * uni(rng));
    p.cam = make_lookat_camera(0, cam_pos, Vec3(0.0, 0.0, 1.0));
    p.ell.center = Vec3(-1.5 + 3.0 * uni(rng), -1.5 + 3.0 * uni(rng), 0.5 + 1.0 * uni(rng));
    p.ell.log_half = Vec3(0.1 + 0.9 * uni(rng), 0.1 + 0.9 * uni(rng), 0.1 + 0.9 * uni(rng))
                         .array()
                         .log();
    pairs.push_back(p);
  }

  for (const Pair& p : pairs) {
    auto box = project_ellipsoid_to_bbox(p.ell, p.cam);
    REQUIRE(box.ok());

    double lo_u = 1e300, hi_u = -1e300, lo_v = 1e300, hi_v = -1e300;
    const Vec3 half = p.ell.log_half.array().exp();
    std::vector<Vec3> dirs;
    dirs.reserve(100 * 100 + 6);
    const int n_theta = 100, n_phi = 100;
    for (int i = 0; i < n_theta; ++i) {
      double theta = M_PI * (i + 0.5) / n_theta;
      for (int j = 0; j < n_phi; ++j) {
        double phi = 2.0 * M_PI * j / n_phi;
        dirs.emplace_back(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                          std::cos(theta));
      }
    }
    // The angular grid skips the axis poles; include the exact axis
    // directions so the sampled box covers the full silhouette extent.
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 d = Vec3::Zero();
      d[axis] = 1.0;
      dirs.push_back(d);
      dirs.push_back(-d);
    }
    for (const Vec3& dir : dirs) {
      Vec3 surface = p.ell.center + (half.array() * dir.array()).matrix();
      auto px = project_point(p.cam.projection, surface);
      if (!px.ok()) continue;
      lo_u = std::min(lo_u, px.value[0]);
      hi_u = std::max(hi_u, px.value[0]);
      lo_v = std::min(lo_v, px.value[1]);
      hi_v = std::max(hi_v, px.value[1]);
    }
    const double slack = 1e-9;
    CHECK(box.value.left >= lo_u - slack);
    CHECK(box.value.top >= lo_v - slack);
    CHECK(box.value.right() <= hi_u + slack);
    CHECK(box.value.bottom() <= hi_v + slack);

    // The projected center must land strictly inside the box.
    auto center_px = project_point(p.cam.projection, p.ell.center);
    REQUIRE(center_px.ok());
    CHECK(center_px.value[0] > box.value.left);
    CHECK(center_px.value[0] < box.value.right());
    CHECK(center_px.value[1] > box.value.top);
    CHECK(center_px.value[1] < box.value.bottom());
  }
}

TEST_CASE("ellipsoid box is invariant to positive matrix rescaling") {
  CameraModel cam = make_lookat_camera(0, Vec3(4.0, -3.0, 2.0), Vec3(0.0, 0.0, 1.0));
  Ellipsoid3D e;
  e.center = Vec3(0.5, 0.2, 0.9);
  e.log_half = Vec3(0.3, 0.3, 0.9).array().log();
  auto base = project_ellipsoid_to_bbox(e, cam);
  REQUIRE(base.ok());
  CameraModel scaled = cam;
  scaled.projection *= 0.37;
  auto other = project_ellipsoid_to_bbox(e, scaled);
  REQUIRE(other.ok());
  CHECK(other.value.left == doctest::Approx(base.value.left).epsilon(1e-12));
  CHECK(other.value.top == doctest::Approx(base.value.top).epsilon(1e-12));
  CHECK(other.value.log_w == doctest::Approx(base.value.log_w).epsilon(1e-12));
  CHECK(other.value.log_h == doctest::Approx(base.value.log_h).epsilon(1e-12));
}

TEST_CASE("ground back-projection inverts projection exactly on the plane") {
  CameraModel cam = make_lookat_camera(3, Vec3(5.0, 5.0, 2.5), Vec3(0.0, 0.0, 0.9));
  const Vec2 g(3.0, -2.0);
  auto px = project_point(cam.projection, Vec3(g[0], g[1], 0.0));
  REQUIRE(px.ok());

  // Any box whose bottom-center sits on that pixel must round-trip.
  BBox2D box;
  box.left = px.value[0] - 20.0;
  box.top = px.value[1] - 120.0;
  box.log_w = std::log(40.0);
  box.log_h = std::log(120.0);
  auto ground = bbox_bottom_to_ground(box, cam);
  REQUIRE(ground.ok());
  CHECK(ground.value[0] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(ground.value[1] == doctest::Approx(-2.0).epsilon(1e-9));

  SUBCASE("any nonzero rescaling of the matrix gives the identical answer") {
    for (double c : {7.0, -2.5, 1e-3}) {
      CameraModel scaled = cam;
      scaled.projection *= c;
      auto r = bbox_bottom_to_ground(box, scaled);
      REQUIRE(r.ok());
      CHECK(r.value[0] == doctest::Approx(ground.value[0]).epsilon(1e-9));
      CHECK(r.value[1] == doctest::Approx(ground.value[1]).epsilon(1e-9));
    }
  }
}

TEST_CASE("ground back-projection reports singular and at-infinity cases") {
  // A camera on the ground plane looking straight up the z axis cannot see
  // the plane at all: its ground homography is singular.
  CameraModel degenerate = identity_camera();
  BBox2D box = BBox2D::from_ltwh(10.0, 10.0, 5.0, 5.0);
  CHECK(bbox_bottom_to_ground(box, degenerate).status == GeoStatus::kSingular);

  // A level camera looking at the horizon: the pixel row through the
  // principal point maps to infinity on the ground plane.
  CameraModel level = make_lookat_camera(0, Vec3(0.0, 0.0, 2.5), Vec3(10.0, 0.0, 2.5));
  BBox2D horizon;
  horizon.left = 640.0 - 10.0;
  horizon.top = 360.0 - 50.0;
  horizon.log_w = std::log(20.0);
  horizon.log_h = std::log(50.0);  // bottom edge exactly on v = 360
  CHECK(bbox_bottom_to_ground(horizon, level).status == GeoStatus::kAtInfinity);
}

TEST_CASE("tilted camera localizes an upright person near (0, 4)") {
  // A tilted camera roughly ten meters from the subject: at that range the
  // bottom-center ground approximation is accurate to a few centimeters.
  CameraModel cam = make_lookat_camera(0, Vec3(3.0, -6.0, 2.5), Vec3(0.0, 0.0, 0.9));
  Ellipsoid3D person;
  person.center = Vec3(0.0, 4.0, 0.9);
  person.log_half = Vec3(0.3, 0.3, 0.9).array().log();
  auto box = project_ellipsoid_to_bbox(person, cam);
  REQUIRE(box.ok());
  auto ground = bbox_bottom_to_ground(box.value, cam);
  REQUIRE(ground.ok());
  CHECK((ground.value - Vec2(0.0, 4.0)).norm() <= 0.05);
}

TEST_CASE("box overlap measures match analytic values") {
  Box3D unit{Vec3(0.0, 0.0, 0.0), Vec3(1.0, 1.0, 1.0)};
  CHECK(iou3d(unit, unit) == doctest::Approx(1.0));
  CHECK(giou3d(unit, unit) == doctest::Approx(1.0));
  CHECK(giou3d_distance(unit, unit) == doctest::Approx(0.0));

  Box3D shifted{Vec3(0.5, 0.0, 0.0), Vec3(1.5, 1.0, 1.0)};
  CHECK(iou3d(unit, shifted) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(giou3d(unit, shifted) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(giou3d_distance(unit, shifted) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  Box3D far_box{Vec3(10.0, 0.0, 0.0), Vec3(11.0, 1.0, 1.0)};
  CHECK(iou3d(unit, far_box) == doctest::Approx(0.0));
  CHECK(giou3d_distance(unit, far_box) > 0.5);
}

TEST_CASE("zero-volume boxes are rejected") {
  Box3D unit{Vec3(0.0, 0.0, 0.0), Vec3(1.0, 1.0, 1.0)};
  Box3D flat{Vec3(0.0, 0.0, 0.0), Vec3(1.0, 1.0, 0.0)};
  CHECK_THROWS_AS(iou3d(unit, flat), std::invalid_argument);
  CHECK_THROWS_AS(iou3d(flat, unit), std::invalid_argument);
  CHECK_THROWS_AS(giou3d(unit, flat), std::invalid_argument);
}

TEST_CASE("overlap is symmetric and decays monotonically with separation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.2, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vec3 lo(uni(rng), uni(rng), uni(rng));
    Vec3 size(uni(rng), uni(rng), uni(rng));
    Box3D a{lo, lo + size};
    Vec3 lo_b(uni(rng), uni(rng), uni(rng));
    Vec3 size_b(uni(rng), uni(rng), uni(rng));
    Box3D b{lo_b, lo_b + size_b};
    CHECK(iou3d(a, b) == doctest::Approx(iou3d(b, a)).epsilon(1e-14));
    CHECK(iou3d(a, a) == doctest::Approx(1.0));

    for (int axis = 0; axis < 3; ++axis) {
      // Push b away from a along this axis; overlap must never grow.
      double center_a = 0.5 * (a.lo[axis] + a.hi[axis]);
      double center_b = 0.5 * (b.lo[axis] + b.hi[axis]);
      double dir = center_b >= center_a ? 1.0 : -1.0;
      double prev = iou3d(a, b);
      Box3D moved = b;
      for (int step = 0; step < 5; ++step) {
        moved.lo[axis] += 0.5 * dir;
        moved.hi[axis] += 0.5 * dir;
        double cur = iou3d(a, moved);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
      }
    }
  }
}
