#pragma once

#include <array>

#include <json.hpp>

#include "cajun/types.hpp"

// Jumping-task reward. Nine terms, each stored raw; the reported total is
//
//   total = cycle_fraction * sum_i weight_i * sign_i * term_i
//
// where cycle_fraction = f_step * dt_high is the fraction of a gait cycle one
// control step covers, making per-cycle reward totals invariant to the
// stepping frequency.

namespace cajun {

struct RewardWeights {
  double upright = 0.02;
  double base_height = 0.01;
  double contact_consistency = 0.008;
  double foot_slipping = 0.032;
  double foot_clearance = 0.008;
  double knee_contact = 0.064;
  double stepping_frequency = 0.008;
  double distance_to_goal = 0.016;
  double out_of_bound_action = 0.01;

  void validate() const;
  static RewardWeights from_json(const nlohmann::json& j, const std::string& path);
  nlohmann::json to_json() const;
};

// Penalty terms carry sign -1; the rest +1.
struct RewardSigns {
  double upright = 1.0;
  double base_height = 1.0;
  double contact_consistency = 1.0;
  double foot_slipping = -1.0;
  double foot_clearance = 1.0;
  double knee_contact = -1.0;
  double stepping_frequency = 1.0;
  double distance_to_goal = -1.0;
  double out_of_bound_action = -1.0;
};

struct RewardParams {
  double clearance_clip = 0.02;          // m, per-leg clearance credit cap
  double knee_fold_limit = -2.7;         // rad, knee angle at full fold
  double knee_angle_tolerance = 0.05;    // rad
  double knee_foot_height = 0.02;        // m, foot below this counts as near-ground
  double frequency_low = 1.5;            // Hz, clip band for the frequency term
  double frequency_high = 4.0;
  double alive_bonus = 0.0;              // optional constant, off by default
};

struct RewardInputs {
  Vec3 base_position = Vec3::Zero();
  Vec3 base_orientation = Vec3::Zero();  // roll, pitch, yaw
  std::array<bool, kNumLegs> actual_contacts{};
  std::array<bool, kNumLegs> desired_contacts{};
  std::array<Vec3, kNumLegs> foot_velocities_world{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(),
                                                   Vec3::Zero()};
  std::array<double, kNumLegs> foot_heights{};     // above ground
  std::array<double, kNumLegs> knee_angles{};      // commanded
  double f_step = 2.0;                             // commanded, post-clamp
  Vec2 goal_world = Vec2::Zero();
  double action_excess = 0.0;                      // normalized out-of-bound amount
  double cycle_fraction = 0.02;                    // f_step * dt_high
};

struct RewardBreakdown {
  // Raw (unweighted, unsigned) term values.
  double upright = 0.0;
  double base_height = 0.0;
  double contact_consistency = 0.0;
  double foot_slipping = 0.0;
  double foot_clearance = 0.0;
  double knee_contact = 0.0;
  double stepping_frequency = 0.0;
  double distance_to_goal = 0.0;
  double out_of_bound_action = 0.0;
  double total = 0.0;  // weighted, signed, scaled by cycle_fraction

  std::array<double, 9> raw_terms() const {
    return {upright,       base_height,        contact_consistency,
            foot_slipping, foot_clearance,     knee_contact,
            stepping_frequency, distance_to_goal, out_of_bound_action};
  }
  static const std::array<const char*, 9>& term_names();
};

RewardBreakdown compute_reward(const RewardInputs& inputs, const RewardWeights& weights,
                               const RewardSigns& signs, const RewardParams& params);

}  // namespace cajun
