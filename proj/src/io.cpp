#include "mcmot3d/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mcmot {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

[[noreturn]] void fail_line(const std::string& path, size_t line, const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& path, size_t line,
                    const std::string& field) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    fail_line(path, line, "bad " + field + " value '" + s + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& s, const std::string& path, size_t line,
                       const std::string& field) {
  const char* begin = s.c_str();
  char* end = nullptr;
  long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') {
    fail_line(path, line, "bad " + field + " value '" + s + "'");
  }
  return v;
}

int parse_header(const std::string& header, const std::string& kind, const std::string& path) {
  std::string prefix = "# mcmot3d " + kind + " v1 keypoints=";
  if (header.rfind(prefix, 0) != 0) {
    fail_line(path, 1, "expected header '" + prefix + "<P>'");
  }
  std::string rest = header.substr(prefix.size());
  std::int64_t p = parse_int(rest, path, 1, "keypoint count");
  if (p < 0 || p > 25) fail_line(path, 1, "keypoint count out of range");
  return static_cast<int>(p);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

json parse_json_file(const std::string& path) {
  std::ifstream in = open_in(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

void expect_format(const json& j, const std::string& format, const std::string& path) {
  if (!j.is_object() || !j.contains("format") || j["format"] != format) {
    throw ParseError(path + ": missing or wrong format tag, expected '" + format + "'");
  }
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != 1) {
    throw ParseError(path + ": unsupported version");
  }
}

CameraModel camera_from_json(const json& jc, const std::string& path) {
  CameraModel cam;
  try {
    cam.id = jc.at("id").get<int>();
    auto proj = jc.at("projection").get<std::vector<double>>();
    if (proj.size() != 12) throw ParseError(path + ": projection needs 12 values");
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) cam.projection(r, c) = proj[r * 4 + c];
    }
    auto size = jc.at("image_size").get<std::vector<double>>();
    if (size.size() != 2) throw ParseError(path + ": image_size needs 2 values");
    cam.image_width = size[0];
    cam.image_height = size[1];
    if (jc.contains("bbox_noise")) {
      auto v = jc["bbox_noise"].get<std::vector<double>>();
      if (v.size() != 4) throw ParseError(path + ": bbox_noise needs 4 values");
      cam.bbox_noise_diag = Vec4(v[0], v[1], v[2], v[3]);
    }
    if (jc.contains("keypoint_noise")) {
      auto v = jc["keypoint_noise"].get<std::vector<double>>();
      if (v.size() != 2) throw ParseError(path + ": keypoint_noise needs 2 values");
      cam.keypoint_noise_diag = Vec2(v[0], v[1]);
    }
    if (jc.contains("ground_columns")) {
      auto v = jc["ground_columns"].get<std::vector<int>>();
      if (v.size() != 3) throw ParseError(path + ": ground_columns needs 3 values");
      cam.ground_columns = {v[0], v[1], v[2]};
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    cam.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(path + ": camera " + std::to_string(cam.id) + ": " + e.what());
  }
  return cam;
}

}  // namespace

DetectionLog load_detections(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  DetectionLog log;
  log.keypoint_count = parse_header(line, "detections", path);
  const size_t want = 7 + 3 * static_cast<size_t>(log.keypoint_count);

  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = split_csv(line);
    if (f.size() != want) {
      fail_line(path, lineno,
                "expected " + std::to_string(want) + " fields, got " + std::to_string(f.size()));
    }
    std::int64_t frame = parse_int(f[0], path, lineno, "frame");
    if (frame < 0) fail_line(path, lineno, "frame must be >= 0");
    Detection det;
    det.camera_id = static_cast<int>(parse_int(f[1], path, lineno, "camera id"));
    double l = parse_double(f[2], path, lineno, "left");
    double t = parse_double(f[3], path, lineno, "top");
    double w = parse_double(f[4], path, lineno, "width");
    double h = parse_double(f[5], path, lineno, "height");
    if (!(w > 0.0) || !(h > 0.0)) fail_line(path, lineno, "width/height must be positive");
    det.bbox = BBox2D::from_ltwh(l, t, w, h);
    det.confidence = parse_double(f[6], path, lineno, "confidence");
    if (det.confidence < 0.0 || det.confidence > 1.0) {
      fail_line(path, lineno, "confidence must be in [0, 1]");
    }
    det.keypoints.resize(log.keypoint_count);
    for (int k = 0; k < log.keypoint_count; ++k) {
      double x = parse_double(f[7 + 3 * k], path, lineno, "keypoint x");
      double y = parse_double(f[8 + 3 * k], path, lineno, "keypoint y");
      const std::string& vis = f[9 + 3 * k];
      if (vis != "0" && vis != "1") fail_line(path, lineno, "visibility must be 0 or 1");
      det.keypoints[k] = Keypoint2D{Vec2(x, y), vis == "1"};
    }
    log.frames[frame].push_back(std::move(det));
  }
  return log;
}

void save_detections(const DetectionLog& log, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# mcmot3d detections v1 keypoints=" << log.keypoint_count << "\n";
  for (const auto& [frame, dets] : log.frames) {
    for (const Detection& d : dets) {
      out << frame << ',' << d.camera_id << ',' << fmt_double(d.bbox.left) << ','
          << fmt_double(d.bbox.top) << ',' << fmt_double(d.bbox.width()) << ','
          << fmt_double(d.bbox.height()) << ',' << fmt_double(d.confidence);
      for (int k = 0; k < log.keypoint_count; ++k) {
        if (k < static_cast<int>(d.keypoints.size()) && d.keypoints[k].visible) {
          out << ',' << fmt_double(d.keypoints[k].pixel[0]) << ','
              << fmt_double(d.keypoints[k].pixel[1]) << ",1";
        } else {
          out << ",0,0,0";
        }
      }
      out << '\n';
    }
  }
  if (!out) throw IoError("failed writing " + path);
}

TrajectorySet load_trajectories(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  TrajectorySet set;
  set.keypoint_count = parse_header(line, "trajectory", path);
  const size_t want = 8 + 3 * static_cast<size_t>(set.keypoint_count);

  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = split_csv(line);
    if (f.size() != want) {
      fail_line(path, lineno,
                "expected " + std::to_string(want) + " fields, got " + std::to_string(f.size()));
    }
    std::int64_t frame = parse_int(f[0], path, lineno, "frame");
    if (frame < 0) fail_line(path, lineno, "frame must be >= 0");
    std::int64_t id = parse_int(f[1], path, lineno, "track id");
    TrajectoryPoint pt;
    for (int i = 0; i < 3; ++i) {
      pt.position[i] = parse_double(f[2 + i], path, lineno, "position");
      pt.half_extents[i] = parse_double(f[5 + i], path, lineno, "half extent");
    }
    if (!(pt.half_extents.array() > 0.0).all()) {
      fail_line(path, lineno, "half extents must be positive");
    }
    pt.joints.resize(set.keypoint_count);
    for (int k = 0; k < set.keypoint_count; ++k) {
      for (int i = 0; i < 3; ++i) {
        pt.joints[k][i] = parse_double(f[8 + 3 * k + i], path, lineno, "joint coordinate");
      }
    }
    if (set.tracks[id].count(frame)) {
      fail_line(path, lineno, "duplicate (frame, id) row");
    }
    set.insert(id, frame, std::move(pt));
  }
  return set;
}

void save_trajectories(const TrajectorySet& set, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# mcmot3d trajectory v1 keypoints=" << set.keypoint_count << "\n";
  // Rows ordered by frame then id so diffs are stable.
  std::map<std::int64_t, std::vector<std::pair<std::int64_t, const TrajectoryPoint*>>> rows;
  for (const auto& [id, frames] : set.tracks) {
    for (const auto& [frame, pt] : frames) rows[frame].emplace_back(id, &pt);
  }
  for (const auto& [frame, items] : rows) {
    for (const auto& [id, pt] : items) {
      out << frame << ',' << id;
      for (int i = 0; i < 3; ++i) out << ',' << fmt_double(pt->position[i]);
      for (int i = 0; i < 3; ++i) out << ',' << fmt_double(pt->half_extents[i]);
      for (int k = 0; k < set.keypoint_count; ++k) {
        if (k < static_cast<int>(pt->joints.size())) {
          for (int i = 0; i < 3; ++i) out << ',' << fmt_double(pt->joints[k][i]);
        } else {
          out << ",0,0,0";
        }
      }
      out << '\n';
    }
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<CameraModel> load_calibration(const std::string& path) {
  json j = parse_json_file(path);
  expect_format(j, "mcmot3d-calibration", path);
  if (!j.contains("cameras") || !j["cameras"].is_array() || j["cameras"].empty()) {
    throw ParseError(path + ": needs a non-empty cameras array");
  }
  std::vector<CameraModel> cams;
  for (const json& jc : j["cameras"]) cams.push_back(camera_from_json(jc, path));
  return cams;
}

void save_calibration(const std::vector<CameraModel>& cameras, const std::string& path) {
  json j;
  j["format"] = "mcmot3d-calibration";
  j["version"] = 1;
  j["cameras"] = json::array();
  for (const CameraModel& cam : cameras) {
    json jc;
    jc["id"] = cam.id;
    std::vector<double> proj(12);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) proj[r * 4 + c] = cam.projection(r, c);
    }
    jc["projection"] = proj;
    jc["image_size"] = {cam.image_width, cam.image_height};
    jc["bbox_noise"] = {cam.bbox_noise_diag[0], cam.bbox_noise_diag[1], cam.bbox_noise_diag[2],
                        cam.bbox_noise_diag[3]};
    jc["keypoint_noise"] = {cam.keypoint_noise_diag[0], cam.keypoint_noise_diag[1]};
    jc["ground_columns"] = {cam.ground_columns[0], cam.ground_columns[1], cam.ground_columns[2]};
    j["cameras"].push_back(jc);
  }
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed writing " + path);
}

std::map<int, CameraSchedule> load_schedule(const std::string& path) {
  json j = parse_json_file(path);
  expect_format(j, "mcmot3d-schedule", path);
  if (!j.contains("cameras") || !j["cameras"].is_object()) {
    throw ParseError(path + ": needs a cameras object");
  }
  std::map<int, CameraSchedule> out;
  for (const auto& [key, intervals] : j["cameras"].items()) {
    int cam_id = 0;
    try {
      cam_id = std::stoi(key);
    } catch (const std::exception&) {
      throw ParseError(path + ": camera key '" + key + "' is not an integer");
    }
    CameraSchedule sched;
    if (!intervals.is_array()) throw ParseError(path + ": intervals must be an array");
    for (const json& iv : intervals) {
      if (!iv.is_array() || iv.size() != 2) {
        throw ParseError(path + ": each interval is [on, off)");
      }
      std::int64_t on = iv[0].get<std::int64_t>();
      std::int64_t off = iv[1].get<std::int64_t>();
      if (off < on) throw ParseError(path + ": interval end before start");
      sched.on_intervals.emplace_back(on, off);
    }
    out[cam_id] = std::move(sched);
  }
  return out;
}

ScenarioConfig load_scenario(const std::string& path) {
  json j = parse_json_file(path);
  expect_format(j, "mcmot3d-scenario", path);
  ScenarioConfig sc;
  try {
    sc.seed = j.value("seed", std::uint64_t{0});
    sc.frame_count = j.at("frame_count").get<std::int64_t>();
    sc.dt = j.value("dt", 1.0 / 30.0);
    sc.keypoint_count = j.value("keypoint_count", 15);
    sc.max_speed = j.value("max_speed", 3.0);
    sc.bbox_noise_px = j.value("bbox_noise_px", 0.0);
    sc.keypoint_noise_px = j.value("keypoint_noise_px", 0.0);

    if (j.contains("cameras")) {
      for (const json& jc : j["cameras"]) sc.cameras.push_back(camera_from_json(jc, path));
    } else if (j.contains("calibration")) {
      std::filesystem::path cal = j["calibration"].get<std::string>();
      if (cal.is_relative()) cal = std::filesystem::path(path).parent_path() / cal;
      sc.cameras = load_calibration(cal.string());
    } else {
      throw ParseError(path + ": needs cameras or a calibration path");
    }

    if (!j.contains("actors") || !j["actors"].is_array()) {
      throw ParseError(path + ": needs an actors array");
    }
    for (const json& ja : j["actors"]) {
      ActorSpec actor;
      actor.spawn_frame = ja.value("spawn", std::int64_t{0});
      actor.despawn_frame = ja.value("despawn", sc.frame_count);
      for (const json& wp : ja.at("waypoints")) {
        if (!wp.is_array() || wp.size() != 2) throw ParseError(path + ": waypoint is [x, y]");
        actor.waypoints.emplace_back(wp[0].get<double>(), wp[1].get<double>());
      }
      if (ja.contains("half_extents")) {
        auto v = ja["half_extents"].get<std::vector<double>>();
        if (v.size() != 3) throw ParseError(path + ": half_extents needs 3 values");
        actor.half_extents = Vec3(v[0], v[1], v[2]);
      }
      if (ja.contains("gait")) {
        const json& g = ja["gait"];
        actor.gait.stride_hz = g.value("stride_hz", actor.gait.stride_hz);
        actor.gait.swing_amplitude = g.value("swing", actor.gait.swing_amplitude);
        actor.gait.bob_amplitude = g.value("bob", actor.gait.bob_amplitude);
      }
      sc.actors.push_back(std::move(actor));
    }

    auto read_rates = [&](const char* key, std::map<int, double>& dst) {
      if (!j.contains(key)) return;
      for (const auto& [k, v] : j[key].items()) dst[std::stoi(k)] = v.get<double>();
    };
    read_rates("detection_prob", sc.detection_prob);
    read_rates("clutter_rate", sc.clutter_rate);

    if (j.contains("schedule")) {
      for (const auto& [k, intervals] : j["schedule"].items()) {
        CameraSchedule sched;
        for (const json& iv : intervals) {
          if (!iv.is_array() || iv.size() != 2) {
            throw ParseError(path + ": each schedule interval is [on, off)");
          }
          sched.on_intervals.emplace_back(iv[0].get<std::int64_t>(), iv[1].get<std::int64_t>());
        }
        sc.schedule[std::stoi(k)] = std::move(sched);
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return sc;
}

TrajectorySet truth_to_trajectories(const GroundTruth& truth, int keypoint_count) {
  TrajectorySet set;
  set.keypoint_count = keypoint_count;
  for (size_t t = 0; t < truth.frames.size(); ++t) {
    for (const auto& [actor_id, st] : truth.frames[t]) {
      TrajectoryPoint pt;
      pt.position = st.center;
      pt.half_extents = st.half_extents;
      pt.joints = st.joints;
      set.insert(actor_id, static_cast<std::int64_t>(t), std::move(pt));
    }
  }
  return set;
}

}  // namespace mcmot
