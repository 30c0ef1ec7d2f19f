#include "mcmot3d/mcmot3d.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

[[noreturn]] void die(mcmot_status status, const std::string& context) {
  std::cerr << "error: " << context << ": " << mcmot_last_error() << "\n";
  std::exit(static_cast<int>(status));
}

void check(mcmot_status status, const std::string& context) {
  if (status != MCMOT_OK) die(status, context);
}

struct TrackerOverrides {
  std::optional<double> tau_c, tau_g, bandwidth;
  std::optional<int> max_misses, keypoints, min_cluster;
  std::optional<double> confidence_floor;
};

// Config file: {"format": "mcmot3d-config", "version": 1,
//               "tracker": {...}, "metrics": {...}}, all keys optional.
void apply_config_file(const std::string& path, mcmot_tracker_config* tc,
                       mcmot_metric_config* mc) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config " << path << "\n";
    std::exit(static_cast<int>(MCMOT_ERROR_IO));
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    std::exit(static_cast<int>(MCMOT_ERROR_PARSE));
  }
  if (j.value("format", "") != "mcmot3d-config" || j.value("version", 0) != 1) {
    std::cerr << "error: " << path << ": expected mcmot3d-config v1\n";
    std::exit(static_cast<int>(MCMOT_ERROR_PARSE));
  }
  try {
    if (tc && j.contains("tracker")) {
      const json& t = j["tracker"];
      tc->dt = t.value("dt", tc->dt);
      tc->accel_noise = t.value("accel_noise", tc->accel_noise);
      tc->shape_walk_noise = t.value("shape_walk_noise", tc->shape_walk_noise);
      tc->keypoint_accel_noise = t.value("keypoint_accel_noise", tc->keypoint_accel_noise);
      tc->ut_alpha = t.value("ut_alpha", tc->ut_alpha);
      tc->ut_kappa = t.value("ut_kappa", tc->ut_kappa);
      tc->ut_beta = t.value("ut_beta", tc->ut_beta);
      tc->ground_gate = t.value("ground_gate", tc->ground_gate);
      tc->cost_gate = t.value("cost_gate", tc->cost_gate);
      tc->miss_cost = t.value("miss_cost", tc->miss_cost);
      tc->cluster_bandwidth = t.value("cluster_bandwidth", tc->cluster_bandwidth);
      tc->min_cluster_size = t.value("min_cluster_size", tc->min_cluster_size);
      tc->birth_height = t.value("birth_height", tc->birth_height);
      if (t.contains("shape_prior")) {
        auto v = t["shape_prior"].get<std::vector<double>>();
        if (v.size() == 3) {
          for (int i = 0; i < 3; ++i) tc->shape_prior[i] = v[i];
        }
      }
      tc->birth_position_var = t.value("birth_position_var", tc->birth_position_var);
      tc->birth_velocity_var = t.value("birth_velocity_var", tc->birth_velocity_var);
      tc->birth_shape_var = t.value("birth_shape_var", tc->birth_shape_var);
      tc->birth_keypoint_position_var =
          t.value("birth_keypoint_position_var", tc->birth_keypoint_position_var);
      tc->birth_keypoint_velocity_var =
          t.value("birth_keypoint_velocity_var", tc->birth_keypoint_velocity_var);
      tc->max_misses = t.value("max_misses", tc->max_misses);
      tc->duplicate_iou = t.value("duplicate_iou", tc->duplicate_iou);
      tc->keypoint_count = t.value("keypoint_count", tc->keypoint_count);
      tc->confidence_floor = t.value("confidence_floor", tc->confidence_floor);
    }
    if (mc && j.contains("metrics")) {
      const json& m = j["metrics"];
      mc->use_giou3d = m.value("use_giou3d", mc->use_giou3d);
      mc->match_threshold = m.value("match_threshold", mc->match_threshold);
      mc->ospa_cutoff = m.value("ospa_cutoff", mc->ospa_cutoff);
      mc->ospa_order = m.value("ospa_order", mc->ospa_order);
      mc->pck_threshold = m.value("pck_threshold", mc->pck_threshold);
      mc->person_match_radius = m.value("person_match_radius", mc->person_match_radius);
    }
  } catch (const json::exception& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    std::exit(static_cast<int>(MCMOT_ERROR_PARSE));
  }
}

void apply_overrides(const TrackerOverrides& ov, mcmot_tracker_config* tc) {
  if (ov.tau_c) tc->cost_gate = *ov.tau_c;
  if (ov.tau_g) tc->ground_gate = *ov.tau_g;
  if (ov.bandwidth) tc->cluster_bandwidth = *ov.bandwidth;
  if (ov.max_misses) tc->max_misses = *ov.max_misses;
  if (ov.keypoints) tc->keypoint_count = *ov.keypoints;
  if (ov.min_cluster) tc->min_cluster_size = *ov.min_cluster;
  if (ov.confidence_floor) tc->confidence_floor = *ov.confidence_floor;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Minimal standalone SVG line chart.
void write_svg(const std::string& path, const std::vector<Series>& series,
               const std::string& x_label, const std::string& y_label) {
  const double width = 840, height = 440;
  const double ml = 70, mr = 30, mt = 30, mb = 50;
  double x_min = 1e300, x_max = -1e300, y_min = 0.0, y_max = -1e300;
  for (const Series& s : series) {
    for (auto [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
    }
  }
  if (x_min > x_max) {
    x_min = 0;
    x_max = 1;
  }
  if (y_max <= y_min) y_max = y_min + 1;
  y_max *= 1.05;
  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr); };
  auto py = [&](double y) {
    return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
  };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(static_cast<int>(MCMOT_ERROR_IO));
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double xv = x_min + (x_max - x_min) * i / 5.0;
    double yv = y_min + (y_max - y_min) * i / 5.0;
    out << "<text x=\"" << px(xv) << "\" y=\"" << height - mb + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << py(yv) << "\" x2=\"" << width - mr << "\" y2=\""
        << py(yv) << "\" stroke=\"#dddddd\"/>\n";
  }
  out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (mt + height - mb) / 2 << ")\">" << y_label << "</text>\n";
  for (size_t s = 0; s < series.size(); ++s) {
    out << "<polyline fill=\"none\" stroke=\"" << palette[s % 4] << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[s].points) out << px(x) << "," << py(y) << " ";
    out << "\"/>\n";
    out << "<text x=\"" << width - mr - 8 << "\" y=\"" << mt + 16 + 16 * s
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << palette[s % 4] << "\">"
        << series[s].name << "</text>\n";
  }
  out << "</svg>\n";
}

std::vector<Series> ospa_series_for(mcmot_trajectories* truth, mcmot_trajectories* est,
                                    const mcmot_metric_config& mc, const std::string& name) {
  size_t n = 0;
  check(mcmot_evaluate_ospa2(truth, est, &mc, nullptr, nullptr, 0, &n), "ospa series");
  std::vector<int64_t> frames(n);
  std::vector<double> values(n);
  check(mcmot_evaluate_ospa2(truth, est, &mc, frames.data(), values.data(), n, &n),
        "ospa series");
  Series s;
  s.name = name;
  for (size_t i = 0; i < n; ++i) {
    s.points.emplace_back(static_cast<double>(frames[i]), values[i]);
  }
  return {s};
}

void print_report(const mcmot_metric_report& r, const mcmot_metric_config& mc, bool records,
                  const std::string& tag) {
  if (records) {
    std::cout << "record type=metrics";
    if (!tag.empty()) std::cout << " tag=" << tag;
    std::cout << " mota=" << fmt(r.mota) << " idf1=" << fmt(r.idf1) << " ospa2=" << fmt(r.ospa2)
              << " tp=" << r.true_positives << " fp=" << r.false_positives << " fn=" << r.misses
              << " ids=" << r.id_switches << " gt=" << r.gt_count;
    if (r.pose_valid) {
      std::cout << " mpjpe_mm=" << fmt(r.mpjpe_mm) << " pck=" << fmt(r.pck);
    }
    std::cout << "\n";
    return;
  }
  if (!tag.empty()) std::cout << "[" << tag << "]\n";
  std::cout << "mota:   " << fmt(r.mota) << "  (tp=" << r.true_positives
            << " fp=" << r.false_positives << " fn=" << r.misses << " ids=" << r.id_switches
            << " gt=" << r.gt_count << ")\n";
  std::cout << "idf1:   " << fmt(r.idf1) << "\n";
  std::cout << "ospa2:  " << fmt(r.ospa2) << "\n";
  if (r.pose_valid) {
    std::cout << "mpjpe:  " << fmt(r.mpjpe_mm) << " mm\n";
    std::cout << "pck@" << fmt(mc.pck_threshold) << "m: " << fmt(r.pck) << "%\n";
  } else {
    std::cout << "pose metrics: no matched person-frames\n";
  }
}

struct LoadedRun {
  mcmot_cameras* cams = nullptr;
  mcmot_detections* dets = nullptr;
  mcmot_trajectories* result = nullptr;
  double fps = 0.0;
};

LoadedRun run_tracking(const std::string& calibration, const std::string& detections,
                       const mcmot_tracker_config& tc, mcmot_schedule* schedule) {
  LoadedRun run;
  check(mcmot_cameras_load(calibration.c_str(), &run.cams), "loading " + calibration);
  check(mcmot_detections_load(detections.c_str(), &run.dets), "loading " + detections);
  check(mcmot_track_run(run.cams, run.dets, &tc, schedule, &run.result, &run.fps), "tracking");
  return run;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-camera 3D multi-object tracker and pose estimator"};
  app.require_subcommand(1);

  std::string config_path, calibration, detections, output, scenario_path, schedule_path;
  std::string truth_path, estimate_path, series_path, plot_path, report_mode = "text";
  std::uint64_t seed = 0;
  bool seed_set = false;
  TrackerOverrides ov;
  double delete_rate = 0.0;
  std::string tau_list = "2,8,10,12,15";

  auto add_report = [&](CLI::App* cmd) {
    cmd->add_option("--report", report_mode, "output style: text or records")
        ->check(CLI::IsMember({"text", "records"}));
  };
  auto add_tracker_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config with tracker/metric settings");
    cmd->add_option("--tau-c", [&ov](auto& res) { ov.tau_c = std::stod(res[0]); return true; },
                    "assignment cost gate, nats");
    cmd->add_option("--tau-g", [&ov](auto& res) { ov.tau_g = std::stod(res[0]); return true; },
                    "ground-plane gate, meters");
    cmd->add_option("--max-misses",
                    [&ov](auto& res) { ov.max_misses = std::stoi(res[0]); return true; },
                    "frames a track may coast");
    cmd->add_option("--bandwidth",
                    [&ov](auto& res) { ov.bandwidth = std::stod(res[0]); return true; },
                    "birth cluster bandwidth, meters");
    cmd->add_option("--min-cluster",
                    [&ov](auto& res) { ov.min_cluster = std::stoi(res[0]); return true; },
                    "detections needed to spawn a track");
    cmd->add_option("--keypoints",
                    [&ov](auto& res) { ov.keypoints = std::stoi(res[0]); return true; },
                    "skeleton joint count: 15, 18 or 25");
    cmd->add_option("--confidence-floor",
                    [&ov](auto& res) { ov.confidence_floor = std::stod(res[0]); return true; },
                    "drop detections below this confidence");
  };

  CLI::App* track = app.add_subcommand("track", "run the tracker over a detection log");
  track->add_option("--calibration", calibration, "calibration JSON")->required();
  track->add_option("--detections", detections, "detection CSV")->required();
  track->add_option("--output", output, "trajectory CSV to write")->required();
  track->add_option("--schedule", schedule_path, "camera on/off schedule JSON");
  add_tracker_flags(track);
  add_report(track);

  CLI::App* simulate = app.add_subcommand("simulate", "render a synthetic scenario");
  simulate->add_option("--scenario", scenario_path, "scenario JSON")->required();
  simulate->add_option("--seed", seed, "override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });
  simulate->add_option("--detections-out", detections, "detection CSV to write");
  simulate->add_option("--truth-out", truth_path, "ground-truth trajectory CSV to write");
  simulate->add_option("--delete-rate", delete_rate,
                       "randomly drop this fraction of detections")
      ->check(CLI::Range(0.0, 1.0));
  add_report(simulate);

  CLI::App* evaluate = app.add_subcommand("evaluate", "compare trajectories to ground truth");
  evaluate->add_option("--truth", truth_path, "ground-truth trajectory CSV")->required();
  evaluate->add_option("--estimates", estimate_path, "estimated trajectory CSV")->required();
  evaluate->add_option("--config", config_path, "JSON config with metric settings");
  evaluate->add_option("--ospa-series", series_path, "write the per-frame OSPA series CSV");
  evaluate->add_option("--plot", plot_path, "write an SVG plot of the OSPA series");
  add_report(evaluate);

  CLI::App* sweep = app.add_subcommand("sweep-tau", "tracking quality across cost gates");
  sweep->add_option("--calibration", calibration, "calibration JSON")->required();
  sweep->add_option("--detections", detections, "detection CSV")->required();
  sweep->add_option("--truth", truth_path, "ground-truth trajectory CSV")->required();
  sweep->add_option("--tau", tau_list, "comma-separated cost gates (default 2,8,10,12,15)");
  add_tracker_flags(sweep);
  add_report(sweep);

  CLI::App* reconfig = app.add_subcommand(
      "reconfig", "compare tracking with and without a camera schedule");
  reconfig->add_option("--calibration", calibration, "calibration JSON")->required();
  reconfig->add_option("--detections", detections, "detection CSV")->required();
  reconfig->add_option("--truth", truth_path, "ground-truth trajectory CSV")->required();
  reconfig->add_option("--schedule", schedule_path, "camera on/off schedule JSON")->required();
  reconfig->add_option("--plot", plot_path, "write an SVG with both OSPA series");
  add_tracker_flags(reconfig);
  add_report(reconfig);

  CLI11_PARSE(app, argc, argv);
  const bool records = report_mode == "records";

  mcmot_tracker_config tc;
  mcmot_tracker_config_default(&tc);
  mcmot_metric_config mc;
  mcmot_metric_config_default(&mc);
  if (!config_path.empty()) apply_config_file(config_path, &tc, &mc);
  apply_overrides(ov, &tc);

  if (*track) {
    mcmot_schedule* schedule = nullptr;
    if (!schedule_path.empty()) {
      check(mcmot_schedule_load(schedule_path.c_str(), &schedule), "loading " + schedule_path);
    }
    LoadedRun run = run_tracking(calibration, detections, tc, schedule);
    check(mcmot_trajectories_save(run.result, output.c_str()), "writing " + output);

    int cams = 0;
    int64_t frames = 0, rows = 0, tracks = 0, points = 0;
    mcmot_cameras_count(run.cams, &cams);
    mcmot_detections_info(run.dets, nullptr, &frames, &rows);
    mcmot_trajectories_info(run.result, nullptr, &tracks, &points);
    if (records) {
      std::cout << "record type=track frames=" << frames << " cameras=" << cams
                << " detections=" << rows << " tracks=" << tracks << " points=" << points
                << " fps=" << fmt(run.fps) << " output=" << output << "\n";
    } else {
      std::cout << "tracked " << frames << " frames from " << cams << " cameras (" << rows
                << " detections)\n"
                << "tracks: " << tracks << ", trajectory points: " << points << "\n"
                << "throughput: " << fmt(run.fps) << " frames/s\n"
                << "wrote " << output << "\n";
    }
    mcmot_trajectories_free(run.result);
    mcmot_detections_free(run.dets);
    mcmot_cameras_free(run.cams);
    mcmot_schedule_free(schedule);
    return 0;
  }

  if (*simulate) {
    mcmot_scenario* scenario = nullptr;
    check(mcmot_scenario_load(scenario_path.c_str(), &scenario), "loading " + scenario_path);
    if (seed_set) mcmot_scenario_set_seed(scenario, seed);
    mcmot_trajectories* truth = nullptr;
    mcmot_detections* dets = nullptr;
    check(mcmot_simulate(scenario, &truth, &dets), "simulating");
    if (delete_rate > 0.0) {
      mcmot_detections* kept = nullptr;
      check(mcmot_detections_delete_random(dets, delete_rate, seed, &kept), "deleting");
      mcmot_detections_free(dets);
      dets = kept;
    }
    if (!detections.empty()) {
      check(mcmot_detections_save(dets, detections.c_str()), "writing " + detections);
    }
    if (!truth_path.empty()) {
      check(mcmot_trajectories_save(truth, truth_path.c_str()), "writing " + truth_path);
    }
    int64_t frames = 0, rows = 0, tracks = 0, points = 0;
    mcmot_detections_info(dets, nullptr, &frames, &rows);
    mcmot_trajectories_info(truth, nullptr, &tracks, &points);
    if (records) {
      std::cout << "record type=simulate frames=" << frames << " actors=" << tracks
                << " truth_points=" << points << " detections=" << rows << "\n";
    } else {
      std::cout << "simulated " << frames << " frames, " << tracks << " actors ("
                << points << " truth points), " << rows << " detections\n";
      if (!detections.empty()) std::cout << "wrote " << detections << "\n";
      if (!truth_path.empty()) std::cout << "wrote " << truth_path << "\n";
    }
    mcmot_detections_free(dets);
    mcmot_trajectories_free(truth);
    mcmot_scenario_free(scenario);
    return 0;
  }

  if (*evaluate) {
    mcmot_trajectories* truth = nullptr;
    mcmot_trajectories* est = nullptr;
    check(mcmot_trajectories_load(truth_path.c_str(), &truth), "loading " + truth_path);
    check(mcmot_trajectories_load(estimate_path.c_str(), &est), "loading " + estimate_path);
    mcmot_metric_report report;
    check(mcmot_evaluate(truth, est, &mc, &report), "evaluating");
    print_report(report, mc, records, "");
    if (!series_path.empty() || !plot_path.empty()) {
      auto series = ospa_series_for(truth, est, mc, "ospa2");
      if (!series_path.empty()) {
        std::ofstream out(series_path);
        if (!out) die(MCMOT_ERROR_IO, "writing " + series_path);
        out << "frame,ospa2\n";
        for (auto [x, y] : series[0].points) out << static_cast<int64_t>(x) << "," << fmt(y) << "\n";
        if (!records) std::cout << "wrote " << series_path << "\n";
      }
      if (!plot_path.empty()) {
        write_svg(plot_path, series, "frame", "ospa2");
        if (!records) std::cout << "wrote " << plot_path << "\n";
      }
    }
    mcmot_trajectories_free(truth);
    mcmot_trajectories_free(est);
    return 0;
  }

  if (*sweep) {
    mcmot_trajectories* truth = nullptr;
    check(mcmot_trajectories_load(truth_path.c_str(), &truth), "loading " + truth_path);
    std::vector<double> taus;
    std::stringstream ss(tau_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) taus.push_back(std::stod(item));
    }
    if (taus.empty()) {
      std::cerr << "error: --tau list is empty\n";
      return static_cast<int>(MCMOT_ERROR_INVALID_ARGUMENT);
    }
    if (!records) {
      std::printf("%8s %8s %8s %8s %6s %6s %6s\n", "tau_c", "mota", "idf1", "ospa2", "fp", "fn",
                  "ids");
    }
    for (double tau : taus) {
      mcmot_tracker_config cfg = tc;
      cfg.cost_gate = tau;
      LoadedRun run = run_tracking(calibration, detections, cfg, nullptr);
      mcmot_metric_report report;
      check(mcmot_evaluate(truth, run.result, &mc, &report), "evaluating");
      if (records) {
        std::cout << "record type=sweep tau_c=" << fmt(tau) << " mota=" << fmt(report.mota)
                  << " idf1=" << fmt(report.idf1) << " ospa2=" << fmt(report.ospa2)
                  << " fp=" << report.false_positives << " fn=" << report.misses
                  << " ids=" << report.id_switches << " fps=" << fmt(run.fps) << "\n";
      } else {
        std::printf("%8s %8s %8s %8s %6lld %6lld %6lld\n", fmt(tau).c_str(),
                    fmt(report.mota).c_str(), fmt(report.idf1).c_str(), fmt(report.ospa2).c_str(),
                    static_cast<long long>(report.false_positives),
                    static_cast<long long>(report.misses),
                    static_cast<long long>(report.id_switches));
      }
      mcmot_trajectories_free(run.result);
      mcmot_detections_free(run.dets);
      mcmot_cameras_free(run.cams);
    }
    mcmot_trajectories_free(truth);
    return 0;
  }

  if (*reconfig) {
    mcmot_trajectories* truth = nullptr;
    check(mcmot_trajectories_load(truth_path.c_str(), &truth), "loading " + truth_path);
    mcmot_schedule* schedule = nullptr;
    check(mcmot_schedule_load(schedule_path.c_str(), &schedule), "loading " + schedule_path);

    LoadedRun base = run_tracking(calibration, detections, tc, nullptr);
    LoadedRun sched = run_tracking(calibration, detections, tc, schedule);
    mcmot_metric_report base_report, sched_report;
    check(mcmot_evaluate(truth, base.result, &mc, &base_report), "evaluating baseline");
    check(mcmot_evaluate(truth, sched.result, &mc, &sched_report), "evaluating scheduled");
    print_report(base_report, mc, records, "all-cameras");
    print_report(sched_report, mc, records, "scheduled");
    if (!plot_path.empty()) {
      auto s1 = ospa_series_for(truth, base.result, mc, "all-cameras");
      auto s2 = ospa_series_for(truth, sched.result, mc, "scheduled");
      s1.push_back(s2[0]);
      write_svg(plot_path, s1, "frame", "ospa2");
      if (!records) std::cout << "wrote " << plot_path << "\n";
    }
    for (LoadedRun* run : {&base, &sched}) {
      mcmot_trajectories_free(run->result);
      mcmot_detections_free(run->dets);
      mcmot_cameras_free(run->cams);
    }
    mcmot_schedule_free(schedule);
    mcmot_trajectories_free(truth);
    return 0;
  }

  return 0;
}
