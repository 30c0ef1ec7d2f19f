#include "mcmot3d/skeletons.hpp"

#include <cmath>
#include <stdexcept>

namespace mcmot {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Reference body: half-extents (0.3, 0.3, 0.9), facing +x, left side on +y.
const std::vector<JointSpec>& template15() {
  static const std::vector<JointSpec> t = {
      {"head_top", {0.00, 0.00, 0.90}, 0.0, 0.0},
      {"neck", {0.00, 0.00, 0.72}, 0.0, 0.0},
      {"right_shoulder", {0.00, -0.20, 0.70}, 0.0, 0.0},
      {"right_elbow", {0.02, -0.23, 0.44}, 0.5, 0.0},
      {"right_wrist", {0.05, -0.24, 0.18}, 1.0, 0.0},
      {"left_shoulder", {0.00, 0.20, 0.70}, 0.0, 0.0},
      {"left_elbow", {0.02, 0.23, 0.44}, 0.5, kPi},
      {"left_wrist", {0.05, 0.24, 0.18}, 1.0, kPi},
      {"right_hip", {0.00, -0.11, 0.00}, 0.0, 0.0},
      {"right_knee", {0.00, -0.12, -0.45}, 0.5, kPi},
      {"right_ankle", {0.00, -0.13, -0.85}, 1.0, kPi},
      {"left_hip", {0.00, 0.11, 0.00}, 0.0, 0.0},
      {"left_knee", {0.00, 0.12, -0.45}, 0.5, 0.0},
      {"left_ankle", {0.00, 0.13, -0.85}, 1.0, 0.0},
      {"pelvis", {0.00, 0.00, 0.02}, 0.0, 0.0},
  };
  return t;
}

const std::vector<JointSpec>& template18() {
  static const std::vector<JointSpec> t = {
      {"nose", {0.08, 0.00, 0.78}, 0.0, 0.0},
      {"neck", {0.00, 0.00, 0.72}, 0.0, 0.0},
      {"right_shoulder", {0.00, -0.20, 0.70}, 0.0, 0.0},
      {"right_elbow", {0.02, -0.23, 0.44}, 0.5, 0.0},
      {"right_wrist", {0.05, -0.24, 0.18}, 1.0, 0.0},
      {"left_shoulder", {0.00, 0.20, 0.70}, 0.0, 0.0},
      {"left_elbow", {0.02, 0.23, 0.44}, 0.5, kPi},
      {"left_wrist", {0.05, 0.24, 0.18}, 1.0, kPi},
      {"right_hip", {0.00, -0.11, 0.00}, 0.0, 0.0},
      {"right_knee", {0.00, -0.12, -0.45}, 0.5, kPi},
      {"right_ankle", {0.00, -0.13, -0.85}, 1.0, kPi},
      {"left_hip", {0.00, 0.11, 0.00}, 0.0, 0.0},
      {"left_knee", {0.00, 0.12, -0.45}, 0.5, 0.0},
      {"left_ankle", {0.00, 0.13, -0.85}, 1.0, 0.0},
      {"right_eye", {0.07, -0.03, 0.82}, 0.0, 0.0},
      {"left_eye", {0.07, 0.03, 0.82}, 0.0, 0.0},
      {"right_ear", {0.01, -0.07, 0.80}, 0.0, 0.0},
      {"left_ear", {0.01, 0.07, 0.80}, 0.0, 0.0},
  };
  return t;
}

const std::vector<JointSpec>& template25() {
  static const std::vector<JointSpec> t = {
      {"nose", {0.08, 0.00, 0.78}, 0.0, 0.0},
      {"neck", {0.00, 0.00, 0.72}, 0.0, 0.0},
      {"right_shoulder", {0.00, -0.20, 0.70}, 0.0, 0.0},
      {"right_elbow", {0.02, -0.23, 0.44}, 0.5, 0.0},
      {"right_wrist", {0.05, -0.24, 0.18}, 1.0, 0.0},
      {"left_shoulder", {0.00, 0.20, 0.70}, 0.0, 0.0},
      {"left_elbow", {0.02, 0.23, 0.44}, 0.5, kPi},
      {"left_wrist", {0.05, 0.24, 0.18}, 1.0, kPi},
      {"mid_hip", {0.00, 0.00, 0.01}, 0.0, 0.0},
      {"right_hip", {0.00, -0.11, 0.00}, 0.0, 0.0},
      {"right_knee", {0.00, -0.12, -0.45}, 0.5, kPi},
      {"right_ankle", {0.00, -0.13, -0.85}, 1.0, kPi},
      {"left_hip", {0.00, 0.11, 0.00}, 0.0, 0.0},
      {"left_knee", {0.00, 0.12, -0.45}, 0.5, 0.0},
      {"left_ankle", {0.00, 0.13, -0.85}, 1.0, 0.0},
      {"right_eye", {0.07, -0.03, 0.82}, 0.0, 0.0},
      {"left_eye", {0.07, 0.03, 0.82}, 0.0, 0.0},
      {"right_ear", {0.01, -0.07, 0.80}, 0.0, 0.0},
      {"left_ear", {0.01, 0.07, 0.80}, 0.0, 0.0},
      {"left_big_toe", {0.14, 0.12, -0.88}, 1.0, 0.0},
      {"left_small_toe", {0.13, 0.16, -0.88}, 1.0, 0.0},
      {"left_heel", {-0.06, 0.13, -0.88}, 1.0, 0.0},
      {"right_big_toe", {0.14, -0.12, -0.88}, 1.0, kPi},
      {"right_small_toe", {0.13, -0.16, -0.88}, 1.0, kPi},
      {"right_heel", {-0.06, -0.13, -0.88}, 1.0, kPi},
  };
  return t;
}

}  // namespace

bool valid_keypoint_count(int keypoint_count) {
  return keypoint_count == 15 || keypoint_count == 18 || keypoint_count == 25;
}

const std::vector<JointSpec>& skeleton_template(int keypoint_count) {
  switch (keypoint_count) {
    case 15:
      return template15();
    case 18:
      return template18();
    case 25:
      return template25();
    default:
      throw std::invalid_argument("unsupported keypoint count");
  }
}

std::vector<Vec3> pose_skeleton(int keypoint_count, const Vec3& center, const Vec3& half_extents,
                                double heading) {
  return pose_skeleton_gait(keypoint_count, center, half_extents, heading, 0.0, 0.0, 0.0);
}

std::vector<Vec3> pose_skeleton_gait(int keypoint_count, const Vec3& center,
                                     const Vec3& half_extents, double heading, double gait_phase,
                                     double swing_amplitude, double bob_amplitude) {
  const auto& tmpl = skeleton_template(keypoint_count);
  Vec3 scale(half_extents[0] / 0.3, half_extents[1] / 0.3, half_extents[2] / 0.9);
  double ch = std::cos(heading);
  double sh = std::sin(heading);
  std::vector<Vec3> out;
  out.reserve(tmpl.size());
  for (const JointSpec& js : tmpl) {
    Vec3 off = js.offset.cwiseProduct(scale);
    off[0] += js.swing * swing_amplitude * std::sin(gait_phase + js.phase);
    off[2] += bob_amplitude * std::sin(2.0 * gait_phase);
    Vec3 rotated(ch * off[0] - sh * off[1], sh * off[0] + ch * off[1], off[2]);
    out.push_back(center + rotated);
  }
  return out;
}

}  // namespace mcmot
