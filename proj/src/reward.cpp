#include "cajun/reward.hpp"

#include <algorithm>
#include <cmath>

#include "cajun/errors.hpp"
#include "cajun/json_util.hpp"

namespace cajun {

void RewardWeights::validate() const {
  const double all[] = {upright,       base_height,     contact_consistency,
                        foot_slipping, foot_clearance,  knee_contact,
                        stepping_frequency, distance_to_goal, out_of_bound_action};
  for (double w : all) {
    if (w < 0.0) throw ConfigError("env.reward_weights: weights must be non-negative");
  }
}

RewardWeights RewardWeights::from_json(const Json& j, const std::string& path) {
  RewardWeights w;
  require_object(j, path);
  reject_unknown_keys(j, path,
                      {"upright", "base_height", "contact_consistency", "foot_slipping",
                       "foot_clearance", "knee_contact", "stepping_frequency", "distance_to_goal",
                       "out_of_bound_action"});
  w.upright = get_number(j, "upright", path, w.upright);
  w.base_height = get_number(j, "base_height", path, w.base_height);
  w.contact_consistency = get_number(j, "contact_consistency", path, w.contact_consistency);
  w.foot_slipping = get_number(j, "foot_slipping", path, w.foot_slipping);
  w.foot_clearance = get_number(j, "foot_clearance", path, w.foot_clearance);
  w.knee_contact = get_number(j, "knee_contact", path, w.knee_contact);
  w.stepping_frequency = get_number(j, "stepping_frequency", path, w.stepping_frequency);
  w.distance_to_goal = get_number(j, "distance_to_goal", path, w.distance_to_goal);
  w.out_of_bound_action = get_number(j, "out_of_bound_action", path, w.out_of_bound_action);
  w.validate();
  return w;
}

Json RewardWeights::to_json() const {
  return Json{{"upright", upright},
              {"base_height", base_height},
              {"contact_consistency", contact_consistency},
              {"foot_slipping", foot_slipping},
              {"foot_clearance", foot_clearance},
              {"knee_contact", knee_contact},
              {"stepping_frequency", stepping_frequency},
              {"distance_to_goal", distance_to_goal},
              {"out_of_bound_action", out_of_bound_action}};
}

const std::array<const char*, 9>& RewardBreakdown::term_names() {
  static const std::array<const char*, 9> names = {
      "upright",       "base_height",        "contact_consistency",
      "foot_slipping", "foot_clearance",     "knee_contact",
      "stepping_frequency", "distance_to_goal", "out_of_bound_action"};
  return names;
}

RewardBreakdown compute_reward(const RewardInputs& in, const RewardWeights& weights,
                               const RewardSigns& signs, const RewardParams& params) {
  RewardBreakdown r;

  // Projection of the body z axis onto world up; Z-Y-X Euler R(2,2).
  r.upright = std::cos(in.base_orientation.y()) * std::cos(in.base_orientation.x());
  r.base_height = in.base_position.z();

  for (int leg = 0; leg < kNumLegs; ++leg) {
    if (in.actual_contacts[leg] == in.desired_contacts[leg]) r.contact_consistency += 1.0;
    if (in.desired_contacts[leg]) {
      r.foot_slipping += in.foot_velocities_world[leg].head<2>().norm();
    } else {
      r.foot_clearance += std::min(in.foot_heights[leg], params.clearance_clip);
    }
    const bool knee_folded =
        std::abs(in.knee_angles[leg] - params.knee_fold_limit) < params.knee_angle_tolerance;
    if (knee_folded && in.foot_heights[leg] < params.knee_foot_height) r.knee_contact += 1.0;
  }

  r.stepping_frequency =
      params.frequency_low - std::clamp(in.f_step, params.frequency_low, params.frequency_high);
  r.distance_to_goal = (in.base_position.head<2>() - in.goal_world).norm();
  r.out_of_bound_action = in.action_excess;

  double weighted = weights.upright * signs.upright * r.upright +
                    weights.base_height * signs.base_height * r.base_height +
                    weights.contact_consistency * signs.contact_consistency * r.contact_consistency +
                    weights.foot_slipping * signs.foot_slipping * r.foot_slipping +
                    weights.foot_clearance * signs.foot_clearance * r.foot_clearance +
                    weights.knee_contact * signs.knee_contact * r.knee_contact +
                    weights.stepping_frequency * signs.stepping_frequency * r.stepping_frequency +
                    weights.distance_to_goal * signs.distance_to_goal * r.distance_to_goal +
                    weights.out_of_bound_action * signs.out_of_bound_action * r.out_of_bound_action;
  weighted += params.alive_bonus;
  r.total = in.cycle_fraction * weighted;
  return r;
}

}  // namespace cajun
