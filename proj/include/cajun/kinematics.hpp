#pragma once

#include <optional>

#include "cajun/robot_model.hpp"
#include "cajun/types.hpp"

// Analytic 3-DoF leg kinematics in the base frame.
//
// Joint vector per leg: (abduction, hip pitch, knee flexion).
// * abduction rotates about the base x axis at the hip;
// * hip pitch and knee flexion rotate about the (abducted) y axis;
// * all angles zero = leg pointing straight down, knee extended;
// * positive hip pitch / knee flexion sweep the foot backwards (-x), so the
//   knee-backward branch used for quadrupeds has knee flexion <= 0.

namespace cajun {

// Foot position in the base frame.
Vec3 forward_kinematics(const RobotModel& model, int leg, const Vec3& q);

// Closed-form inverse kinematics; empty when the target is outside the
// reachable workspace (callers clamp first, see clamp_to_workspace). The knee
// branch follows model.knee_backward.
std::optional<Vec3> inverse_kinematics(const RobotModel& model, int leg, const Vec3& target_base);

// 3x3 Jacobian of the base-frame foot position w.r.t. the joint angles.
Mat3 foot_jacobian(const RobotModel& model, int leg, const Vec3& q);

// Pulls a base-frame target inside the reachable annulus (slightly short of
// full extension / full fold). Identity for already-reachable targets.
Vec3 clamp_to_workspace(const RobotModel& model, int leg, const Vec3& target_base,
                        bool* clamped = nullptr);

struct TorqueResult {
  Vec3 torque = Vec3::Zero();
  bool saturated = false;
};

// Joint torques transmitting a contact force through the leg: tau = J^T f,
// where f is the reaction force on the base (the foot applies -f to the
// ground). Each joint is clamped to +-torque_limit.
TorqueResult torque_from_grf(const Mat3& jacobian, const Vec3& grf, double torque_limit);
TorqueResult torque_from_grf(const RobotModel& model, int leg, const Vec3& q, const Vec3& grf);

}  // namespace cajun
