#pragma once

#include <json.hpp>

#include "cajun/leg_controller.hpp"
#include "cajun/reward.hpp"
#include "cajun/types.hpp"

namespace cajun {

// Scripted jumping policy parameters: ramp the vertical velocity command
// through stance, push toward the goal, damp pitch, and lift swing feet by a
// constant residual.
struct HeuristicParams {
  double f_step = 0.0;       // 0 = use the gait's default frequency
  double v_z_peak = 1.8;     // m/s at the end of stance
  double v_x_gain = 1.5;     // 1/s on remaining goal distance
  double pitch_gain = 3.0;   // pitch-rate command per rad of pitch
  double clearance = 0.12;   // m, vertical swing residual

  static HeuristicParams from_json(const nlohmann::json& j, const std::string& path);
  nlohmann::json to_json() const;
};

struct EnvConfig {
  RewardWeights reward_weights;
  RewardSigns reward_signs;
  RewardParams reward_params;
  ActionBounds action_bounds;
  Vec2 goal_range{0.3, 1.0};         // forward jump distance sampled per cycle, m
  double height_termination = 0.15;  // m
  double upright_termination = 0.5;  // projection of body z onto world up
  int num_cycles = 10;
  bool observe_raw_phase = false;    // raw phi instead of (sin, cos)
  bool exclude_absolute_pose = false;  // drop world position + yaw from observations
  HeuristicParams heuristic;

  void validate() const;
  static EnvConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Controller/environment ablation switches.
struct AblationFlags {
  bool no_gait = false;       // pin the stepping frequency, ignore the policy's
  bool no_swing = false;      // zero the swing residuals
  bool no_swing_ref = false;  // hip projection + residual instead of the full reference
  bool qp_mode = false;       // solve stance GRFs with the QP instead of closed form

  static AblationFlags from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

inline constexpr double kNoGaitFrequency = 1.66;  // Hz, fixed-gait ablation

}  // namespace cajun
