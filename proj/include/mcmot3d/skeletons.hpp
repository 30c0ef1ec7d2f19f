#pragma once

#include "mcmot3d/types.hpp"

#include <vector>

namespace mcmot {

// One joint of the reference skeleton: offset from the body center of a
// person with half-extents (0.3, 0.3, 0.9) facing +x, plus gait coefficients
// (swing scales the forward stride of the limb, phase sets left/right
// alternation).
struct JointSpec {
  const char* name;
  Vec3 offset;
  double swing;
  double phase;
};

bool valid_keypoint_count(int keypoint_count);

// Reference joint layout for 15, 18 or 25 joints. Throws
// std::invalid_argument for any other count.
const std::vector<JointSpec>& skeleton_template(int keypoint_count);

// Static pose: template scaled per axis by half_extents relative to the
// reference body, yawed by heading, translated to center.
std::vector<Vec3> pose_skeleton(int keypoint_count, const Vec3& center, const Vec3& half_extents,
                                double heading);

// Walking pose: adds a sinusoidal stride of the given amplitude at the given
// phase, plus a small vertical bob, before the yaw is applied.
std::vector<Vec3> pose_skeleton_gait(int keypoint_count, const Vec3& center,
                                     const Vec3& half_extents, double heading, double gait_phase,
                                     double swing_amplitude, double bob_amplitude);

}  // namespace mcmot
