#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "mcmot3d/io.hpp"
#include "mcmot3d/simulator.hpp"

using namespace mcmot;
using mcmot::testing::four_camera_rig;

namespace {

std::filesystem::path tmp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "mcmot_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string tmp_file(const std::string& name) { return (tmp_dir() / name).string(); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DetectionLog sample_log() {
  DetectionLog log;
  log.keypoint_count = 2;
  Detection d0;
  d0.camera_id = 0;
  d0.bbox = BBox2D::from_ltwh(100.25, 50.5, 40.0, 90.0);
  d0.confidence = 0.875;
  d0.keypoints = {Keypoint2D{Vec2(120.125, 60.5), true}, Keypoint2D{Vec2(0.0, 0.0), false}};
  Detection d1;
  d1.camera_id = 3;
  d1.bbox = BBox2D::from_ltwh(640.0, 300.0, 25.5, 77.25);
  d1.confidence = 1.0;
  d1.keypoints = {Keypoint2D{Vec2(650.0, 310.0), true}, Keypoint2D{Vec2(655.5, 355.125), true}};
  log.frames[0] = {d0, d1};
  log.frames[7] = {d1};
  return log;
}

TrajectorySet sample_trajectories() {
  TrajectorySet set;
  set.keypoint_count = 2;
  for (int t = 0; t < 4; ++t) {
    TrajectoryPoint p;
    p.position = Vec3(0.5 + 0.1 * t, -1.25, 0.9);
    p.half_extents = Vec3(0.3, 0.25, 0.9);
    p.joints = {Vec3(0.5, -1.25, 1.6), Vec3(0.6, -1.2, 1.0)};
    set.insert(4, t, p);
    if (t >= 2) {
      TrajectoryPoint q;
      q.position = Vec3(-2.0, 3.0 - 0.05 * t, 0.9);
      q.half_extents = Vec3(0.28, 0.22, 0.88);
      q.joints = {Vec3(-2.0, 3.0, 1.55), Vec3(-1.9, 2.95, 1.05)};
      set.insert(9, t, q);
    }
  }
  return set;
}

}  // namespace

TEST_CASE("detection logs survive a save and load round trip") {
  DetectionLog log = sample_log();
  const std::string path = tmp_file("dets_roundtrip.csv");
  save_detections(log, path);
  DetectionLog back = load_detections(path);

  CHECK(back.keypoint_count == 2);
  REQUIRE(back.frames.size() == 2);
  REQUIRE(back.frames.at(0).size() == 2);
  REQUIRE(back.frames.at(7).size() == 1);
  for (const auto& [frame, dets] : log.frames) {
    for (size_t i = 0; i < dets.size(); ++i) {
      const Detection& a = dets[i];
      const Detection& b = back.frames.at(frame)[i];
      CHECK(a.camera_id == b.camera_id);
      CHECK(b.bbox.left == doctest::Approx(a.bbox.left).epsilon(1e-9));
      CHECK(b.bbox.top == doctest::Approx(a.bbox.top).epsilon(1e-9));
      CHECK(b.bbox.log_w == doctest::Approx(a.bbox.log_w).epsilon(1e-9));
      CHECK(b.bbox.log_h == doctest::Approx(a.bbox.log_h).epsilon(1e-9));
      CHECK(b.confidence == doctest::Approx(a.confidence).epsilon(1e-9));
      REQUIRE(b.keypoints.size() == a.keypoints.size());
      for (size_t k = 0; k < a.keypoints.size(); ++k) {
        CHECK(b.keypoints[k].visible == a.keypoints[k].visible);
        if (a.keypoints[k].visible) {
          CHECK(b.keypoints[k].pixel[0] == doctest::Approx(a.keypoints[k].pixel[0]).epsilon(1e-9));
          CHECK(b.keypoints[k].pixel[1] == doctest::Approx(a.keypoints[k].pixel[1]).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("saving the same content twice is byte-identical") {
  DetectionLog log = sample_log();
  const std::string p1 = tmp_file("dets_a.csv");
  const std::string p2 = tmp_file("dets_b.csv");
  save_detections(log, p1);
  save_detections(log, p2);
  CHECK(read_bytes(p1) == read_bytes(p2));

  // One load-save cycle reaches a fixpoint: the next cycle reproduces bytes.
  DetectionLog once = load_detections(p1);
  const std::string p3 = tmp_file("dets_c.csv");
  save_detections(once, p3);
  DetectionLog twice = load_detections(p3);
  const std::string p4 = tmp_file("dets_d.csv");
  save_detections(twice, p4);
  CHECK(read_bytes(p3) == read_bytes(p4));

  TrajectorySet set = sample_trajectories();
  const std::string t1 = tmp_file("traj_a.csv");
  const std::string t2 = tmp_file("traj_b.csv");
  save_trajectories(set, t1);
  save_trajectories(set, t2);
  CHECK(read_bytes(t1) == read_bytes(t2));
}

TEST_CASE("trajectory files round trip including joints and gaps") {
  TrajectorySet set = sample_trajectories();
  const std::string path = tmp_file("traj_roundtrip.csv");
  save_trajectories(set, path);
  TrajectorySet back = load_trajectories(path);

  CHECK(back.keypoint_count == 2);
  REQUIRE(back.tracks.size() == 2);
  REQUIRE(back.tracks.at(4).size() == 4);
  REQUIRE(back.tracks.at(9).size() == 2);
  for (const auto& [id, frames] : set.tracks) {
    for (const auto& [t, p] : frames) {
      const TrajectoryPoint& q = back.tracks.at(id).at(t);
      CHECK(q.position.isApprox(p.position, 1e-9));
      CHECK(q.half_extents.isApprox(p.half_extents, 1e-9));
      REQUIRE(q.joints.size() == p.joints.size());
      for (size_t k = 0; k < p.joints.size(); ++k) CHECK(q.joints[k].isApprox(p.joints[k], 1e-9));
    }
  }
}

TEST_CASE("malformed detection files fail with the offending line") {
  const std::string head = "# mcmot3d detections v1 keypoints=1\n";
  struct Case {
    const char* name;
    std::string text;
    const char* needle;
  };
  const Case cases[] = {
      {"wrong_header", "# mcmot3d trajectory v1 keypoints=1\n", ":1:"},
      {"kp_out_of_range", "# mcmot3d detections v1 keypoints=26\n", "out of range"},
      {"short_row", head + "0,0,1,2,3,4,0.5\n", ":2:"},
      {"bad_number", head + "0,0,oops,2,3,4,0.5,1,2,1\n", "bad left value"},
      {"zero_width", head + "0,0,1,2,0,4,0.5,1,2,1\n", "width/height"},
      {"bad_confidence", head + "0,0,1,2,3,4,1.5,1,2,1\n", "confidence"},
      {"bad_visibility", head + "0,0,1,2,3,4,0.5,1,2,2\n", "visibility"},
      {"negative_frame", head + "-3,0,1,2,3,4,0.5,1,2,1\n", "frame"},
      {"empty_file", "", "empty file"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.name);
    const std::string path = tmp_file(std::string("bad_") + c.name + ".csv");
    write_text(path, c.text);
    bool threw = false;
    try {
      load_detections(path);
    } catch (const ParseError& e) {
      threw = true;
      const std::string msg = e.what();
      CHECK(msg.find(path) != std::string::npos);
      CHECK(msg.find(c.needle) != std::string::npos);
    }
    CHECK(threw);
  }

  CHECK_THROWS_AS(load_detections(tmp_file("does_not_exist.csv")), IoError);

  // Comments and blank lines between rows are fine.
  const std::string ok = tmp_file("with_comments.csv");
  write_text(ok, head + "\n# a note\n0,0,1,2,3,4,0.5,7,8,1\n\n");
  DetectionLog log = load_detections(ok);
  REQUIRE(log.frames.at(0).size() == 1);
  CHECK(log.frames.at(0)[0].keypoints[0].visible);
}

TEST_CASE("malformed trajectory files are rejected") {
  const std::string head = "# mcmot3d trajectory v1 keypoints=0\n";
  const std::string dup = tmp_file("traj_dup.csv");
  write_text(dup, head + "0,1,0,0,0.9,0.3,0.3,0.9\n0,1,1,1,0.9,0.3,0.3,0.9\n");
  CHECK_THROWS_AS(load_trajectories(dup), ParseError);

  const std::string neg = tmp_file("traj_neg_extent.csv");
  write_text(neg, head + "0,1,0,0,0.9,0.3,-0.3,0.9\n");
  CHECK_THROWS_AS(load_trajectories(neg), ParseError);

  const std::string wrong = tmp_file("traj_wrong_header.csv");
  write_text(wrong, "# mcmot3d detections v1 keypoints=0\n");
  CHECK_THROWS_AS(load_trajectories(wrong), ParseError);
}

TEST_CASE("camera calibration round trips through json") {
  std::vector<CameraModel> cams = four_camera_rig();
  const std::string path = tmp_file("rig.json");
  save_calibration(cams, path);
  std::vector<CameraModel> back = load_calibration(path);
  REQUIRE(back.size() == cams.size());
  for (size_t i = 0; i < cams.size(); ++i) {
    CHECK(back[i].id == cams[i].id);
    CHECK(back[i].projection.isApprox(cams[i].projection, 1e-12));
    CHECK(back[i].image_width == cams[i].image_width);
    CHECK(back[i].image_height == cams[i].image_height);
    CHECK(back[i].bbox_noise_diag.isApprox(cams[i].bbox_noise_diag, 1e-12));
    CHECK(back[i].keypoint_noise_diag.isApprox(cams[i].keypoint_noise_diag, 1e-12));
    CHECK(back[i].ground_columns == cams[i].ground_columns);
  }
}

TEST_CASE("calibration files with structural problems are rejected") {
  const std::string not_json = tmp_file("cal_not_json.json");
  write_text(not_json, "{ nope");
  CHECK_THROWS_AS(load_calibration(not_json), ParseError);

  const std::string wrong_tag = tmp_file("cal_wrong_tag.json");
  write_text(wrong_tag, R"({"format":"something-else","version":1,"cameras":[]})");
  CHECK_THROWS_AS(load_calibration(wrong_tag), ParseError);

  const std::string bad_version = tmp_file("cal_bad_version.json");
  write_text(bad_version, R"({"format":"mcmot3d-calibration","version":2,"cameras":[]})");
  CHECK_THROWS_AS(load_calibration(bad_version), ParseError);

  const std::string empty = tmp_file("cal_empty.json");
  write_text(empty, R"({"format":"mcmot3d-calibration","version":1,"cameras":[]})");
  CHECK_THROWS_AS(load_calibration(empty), ParseError);

  const std::string short_proj = tmp_file("cal_short_proj.json");
  write_text(short_proj,
             R"({"format":"mcmot3d-calibration","version":1,
                 "cameras":[{"id":0,"projection":[1,2,3],"image_size":[640,480]}]})");
  CHECK_THROWS_AS(load_calibration(short_proj), ParseError);

  CHECK_THROWS_AS(load_calibration(tmp_file("cal_missing.json")), IoError);
}

TEST_CASE("schedule files map cameras to half-open intervals") {
  const std::string path = tmp_file("schedule.json");
  write_text(path, R"({"format":"mcmot3d-schedule","version":1,
                       "cameras":{"2":[[100,200],[300,320]],"0":[]}})");
  auto sched = load_schedule(path);
  REQUIRE(sched.size() == 2);
  CHECK_FALSE(sched.at(2).active_at(99));
  CHECK(sched.at(2).active_at(100));
  CHECK(sched.at(2).active_at(199));
  CHECK_FALSE(sched.at(2).active_at(200));
  CHECK(sched.at(2).active_at(319));
  CHECK_FALSE(sched.at(0).active_at(0));  // explicit empty list means always off

  const std::string bad_key = tmp_file("schedule_bad_key.json");
  write_text(bad_key, R"({"format":"mcmot3d-schedule","version":1,"cameras":{"cam2":[[0,1]]}})");
  CHECK_THROWS_AS(load_schedule(bad_key), ParseError);

  const std::string inverted = tmp_file("schedule_inverted.json");
  write_text(inverted, R"({"format":"mcmot3d-schedule","version":1,"cameras":{"1":[[5,2]]}})");
  CHECK_THROWS_AS(load_schedule(inverted), ParseError);

  const std::string not_pairs = tmp_file("schedule_not_pairs.json");
  write_text(not_pairs, R"({"format":"mcmot3d-schedule","version":1,"cameras":{"1":[[1,2,3]]}})");
  CHECK_THROWS_AS(load_schedule(not_pairs), ParseError);
}

TEST_CASE("scenario files load inline cameras, actors, and rates") {
  const std::string path = tmp_file("scenario_inline.json");
  save_calibration(four_camera_rig(), tmp_file("scenario_rig.json"));
  write_text(path, R"({"format":"mcmot3d-scenario","version":1,
    "seed": 42, "frame_count": 120, "keypoint_count": 15,
    "calibration": "scenario_rig.json",
    "bbox_noise_px": 2.0, "keypoint_noise_px": 1.0,
    "detection_prob": {"0": 0.95, "1": 0.9},
    "clutter_rate": {"0": 2.0},
    "schedule": {"3": [[0, 60]]},
    "actors": [
      {"spawn": 0, "despawn": 120,
       "waypoints": [[-2, 0], [2, 0]],
       "half_extents": [0.3, 0.25, 0.9],
       "gait": {"stride_hz": 1.6, "swing": 0.08, "bob": 0.02}},
      {"waypoints": [[1, 1]]}
    ]})");
  ScenarioConfig sc = load_scenario(path);
  CHECK(sc.seed == 42);
  CHECK(sc.frame_count == 120);
  CHECK(sc.keypoint_count == 15);
  REQUIRE(sc.cameras.size() == 4);
  CHECK(sc.bbox_noise_px == 2.0);
  CHECK(sc.detection_prob.at(0) == 0.95);
  CHECK(sc.detection_prob.at(1) == 0.9);
  CHECK(sc.clutter_rate.at(0) == 2.0);
  REQUIRE(sc.schedule.count(3) == 1);
  CHECK(sc.schedule.at(3).active_at(59));
  CHECK_FALSE(sc.schedule.at(3).active_at(60));
  REQUIRE(sc.actors.size() == 2);
  CHECK(sc.actors[0].spawn_frame == 0);
  CHECK(sc.actors[0].despawn_frame == 120);
  REQUIRE(sc.actors[0].waypoints.size() == 2);
  CHECK(sc.actors[0].half_extents.isApprox(Vec3(0.3, 0.25, 0.9), 1e-12));
  CHECK(sc.actors[0].gait.stride_hz == 1.6);
  CHECK(sc.actors[1].despawn_frame == 120);  // defaults to the run length

  // The loaded scenario actually simulates.
  GroundTruth truth = simulate_ground_truth(sc);
  CHECK(truth.frames.size() == 120);

  const std::string missing_actors = tmp_file("scenario_no_actors.json");
  write_text(missing_actors, R"({"format":"mcmot3d-scenario","version":1,
    "frame_count": 10, "calibration": "scenario_rig.json"})");
  CHECK_THROWS_AS(load_scenario(missing_actors), ParseError);

  const std::string no_cams = tmp_file("scenario_no_cams.json");
  write_text(no_cams, R"({"format":"mcmot3d-scenario","version":1,
    "frame_count": 10, "actors": [{"waypoints": [[0, 0]]}]})");
  CHECK_THROWS_AS(load_scenario(no_cams), ParseError);

  const std::string bad_wp = tmp_file("scenario_bad_wp.json");
  write_text(bad_wp, R"({"format":"mcmot3d-scenario","version":1,
    "frame_count": 10, "calibration": "scenario_rig.json",
    "actors": [{"waypoints": [[0, 0, 0]]}]})");
  CHECK_THROWS_AS(load_scenario(bad_wp), ParseError);
}

TEST_CASE("ground truth converts into a trajectory set frame by frame") {
  ScenarioConfig sc;
  sc.seed = 3;
  sc.frame_count = 20;
  sc.cameras = four_camera_rig();
  ActorSpec a;
  a.spawn_frame = 0;
  a.despawn_frame = 20;
  a.waypoints = {Vec2(0.0, 0.0)};
  sc.actors.push_back(a);
  ActorSpec b = a;
  b.spawn_frame = 5;
  b.despawn_frame = 15;
  b.waypoints = {Vec2(2.0, 2.0)};
  sc.actors.push_back(b);

  GroundTruth truth = simulate_ground_truth(sc);
  TrajectorySet set = truth_to_trajectories(truth, sc.keypoint_count);
  CHECK(set.keypoint_count == sc.keypoint_count);
  REQUIRE(set.tracks.size() == 2);
  CHECK(set.tracks.at(0).size() == 20);
  CHECK(set.tracks.at(1).size() == 10);
  CHECK(set.tracks.at(1).begin()->first == 5);
  const TrajectoryPoint& p = set.tracks.at(0).at(7);
  CHECK(p.position.isApprox(truth.frames[7].at(0).center, 1e-15));
  CHECK(p.joints.size() == truth.frames[7].at(0).joints.size());
}
