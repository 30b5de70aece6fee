#pragma once

#include <array>

#include "cajun/types.hpp"

namespace cajun {

// Centroidal state of the base plus foot bookkeeping.
//
// Frames: position and linear velocity are world-frame; orientation is
// Z-Y-X Euler angles (roll, pitch, yaw); angular velocity is body-frame.
// foot_positions_world carries the realized foot locations (pinned anchors
// for contact legs, tracked swing targets otherwise).
struct CentroidalState {
  Vec3 position = Vec3::Zero();
  Vec3 orientation = Vec3::Zero();       // roll, pitch, yaw
  Vec3 linear_velocity = Vec3::Zero();   // world frame
  Vec3 angular_velocity = Vec3::Zero();  // body frame
  std::array<Vec3, kNumLegs> foot_positions_world{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(),
                                                  Vec3::Zero()};
  std::array<bool, kNumLegs> contact_flags{false, false, false, false};
};

struct JointState {
  std::array<Vec3, kNumLegs> angles{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  std::array<Vec3, kNumLegs> velocities{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
};

// Pitch must stay clear of the Euler-rate singularity at +-pi/2.
inline constexpr double kPitchGuard = kPi / 2.0 - 0.17;
inline constexpr double kMaxBaseSpeed = 50.0;  // m/s, divergence threshold

}  // namespace cajun
