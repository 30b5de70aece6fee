#pragma once

#include <array>

#include <json.hpp>

#include "cajun/types.hpp"

namespace cajun {

struct LinkLengths {
  double hip_abduction = 0.08;  // lateral offset from hip joint to leg plane
  double thigh = 0.213;
  double calf = 0.213;
};

// One set of limits shared by all legs; abduction is mirrored by side_sign.
struct JointLimits {
  Vec3 lower{-0.8, -1.0, -2.7};   // abduction, hip pitch, knee flexion
  Vec3 upper{0.8, 2.5, 0.0};
};

// Centroidal model of a quadruped with massless legs. Defaults approximate a
// 12 kg robot with 0.213 m thigh/calf links.
struct RobotModel {
  double mass = 12.0;                 // base mass, kg
  double payload_mass = 0.0;          // rigidly attached at the CoM, kg
  Mat3 base_inertia = (Eigen::Matrix3d() << 0.17, 0, 0,
                                            0, 0.33, 0,
                                            0, 0, 0.18).finished();
  // Hip joint positions in the base frame, leg order FR, FL, RR, RL.
  std::array<Vec3, kNumLegs> hip_offsets{
      Vec3(0.1881, -0.04675, 0.0), Vec3(0.1881, 0.04675, 0.0),
      Vec3(-0.1881, -0.04675, 0.0), Vec3(-0.1881, 0.04675, 0.0)};
  LinkLengths link_lengths;
  JointLimits joint_limits;
  Vec3 nominal_joint_angles{0.0, 0.9, -1.8};  // standing pose, per leg
  double friction_mu = 0.6;
  double f_min = 0.0;    // min vertical contact force, N
  double f_max = 120.0;  // max vertical contact force, N
  double torque_limit = 23.7;  // N*m, symmetric per joint
  bool knee_backward = true;   // IK branch: knee vertex points behind the hip-foot chord
  bool symmetric = true;       // enforce left/right + front/rear hip symmetry

  double total_mass() const { return mass + payload_mass; }
  // Sign of the abduction link's y offset: right legs -1, left legs +1.
  double side_sign(int leg) const { return is_right_leg(leg) ? -1.0 : 1.0; }
  double max_leg_reach() const { return link_lengths.thigh + link_lengths.calf; }

  // Throws ConfigError with a field path on any violated invariant.
  void validate() const;

  static RobotModel from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Returns a copy with the payload added to the base mass. Inertia is
// unchanged; the dynamics g-block and 1/m blocks pick up the new total mass.
RobotModel apply_payload(const RobotModel& model, double payload_kg);

}  // namespace cajun
