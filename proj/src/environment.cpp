#include "cajun/environment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "cajun/errors.hpp"
#include "cajun/rotation.hpp"

namespace cajun {
namespace {

double clamp_dim(double raw, const Vec2& bounds, double* overrun) {
  const double clamped = std::clamp(raw, bounds.x(), bounds.y());
  const double range = bounds.y() - bounds.x();
  if (overrun != nullptr && range > 0.0) *overrun = std::abs(raw - clamped) / range;
  return clamped;
}

Vec2 rotate_to_heading(double yaw, const Vec2& world) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  return Vec2(c * world.x() + s * world.y(), -s * world.x() + c * world.y());
}

// Fraction elapsed of the stance window containing phi, empty when airborne.
std::optional<double> stance_window_progress(const GaitConfig& gait, double phi, int leg) {
  for (const PhaseWindow& w : gait.stance_windows[static_cast<size_t>(leg)]) {
    if (w.contains(phi)) return (phi - w.start) / w.width();
  }
  return std::nullopt;
}

}  // namespace

const char* termination_reason_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kNone: return "none";
    case TerminationReason::kCyclesComplete: return "cycles_complete";
    case TerminationReason::kLowHeight: return "low_height";
    case TerminationReason::kTippedOver: return "tipped_over";
    case TerminationReason::kDiverged: return "diverged";
  }
  return "unknown";
}

VecX Observation::flatten(const EnvConfig& config) const {
  VecX out(dimension(config));
  int k = 0;
  if (!config.exclude_absolute_pose) {
    out.segment<3>(k) = position;
    k += 3;
  }
  out[k++] = orientation_rpy.x();
  out[k++] = orientation_rpy.y();
  if (!config.exclude_absolute_pose) out[k++] = orientation_rpy.z();
  out.segment<3>(k) = velocity_heading;
  k += 3;
  out.segment<3>(k) = angular_velocity_body;
  k += 3;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    out.segment<3>(k) = foot_positions_base[static_cast<size_t>(leg)];
    k += 3;
  }
  if (config.observe_raw_phase) {
    out[k++] = phase;
  } else {
    out[k++] = std::sin(phase);
    out[k++] = std::cos(phase);
  }
  out.segment<2>(k) = goal_egocentric;
  k += 2;
  return out;
}

int Observation::dimension(const EnvConfig& config) {
  int n = 3 + 3 + 3 + 3 + 3 * kNumLegs + 2 + 2;  // 28
  if (config.observe_raw_phase) n -= 1;
  if (config.exclude_absolute_pose) n -= 4;
  return n;
}

std::vector<std::string> Observation::names(const EnvConfig& config) {
  std::vector<std::string> names;
  if (!config.exclude_absolute_pose) names.insert(names.end(), {"pos_x", "pos_y", "pos_z"});
  names.insert(names.end(), {"roll", "pitch"});
  if (!config.exclude_absolute_pose) names.push_back("yaw");
  names.insert(names.end(), {"vel_x", "vel_y", "vel_z", "omega_x", "omega_y", "omega_z"});
  for (int leg = 0; leg < kNumLegs; ++leg) {
    for (const char* axis : {"x", "y", "z"}) {
      names.push_back("foot_" + std::to_string(leg) + "_" + axis);
    }
  }
  if (config.observe_raw_phase) {
    names.push_back("phase");
  } else {
    names.insert(names.end(), {"phase_sin", "phase_cos"});
  }
  names.insert(names.end(), {"goal_x", "goal_y"});
  return names;
}

Observation assemble_observation(const CentroidalState& state, double phi,
                                 const Vec2& goal_world) {
  Observation obs;
  obs.position = state.position;
  obs.orientation_rpy = state.orientation;
  const double yaw = state.orientation.z();
  obs.velocity_heading.head<2>() =
      rotate_to_heading(yaw, state.linear_velocity.head<2>());
  obs.velocity_heading.z() = state.linear_velocity.z();
  obs.angular_velocity_body = state.angular_velocity;
  const Mat3 rot = rotation_world_from_base(state.orientation);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    obs.foot_positions_base[static_cast<size_t>(leg)] =
        rot.transpose() *
        (state.foot_positions_world[static_cast<size_t>(leg)] - state.position);
  }
  obs.phase = phi;
  obs.goal_egocentric = rotate_to_heading(yaw, goal_world - state.position.head<2>());
  return obs;
}

DecodedAction decode_action(const VecX& raw, const ActionBounds& bounds,
                            const AblationFlags& ablation) {
  if (raw.size() != kActionDim) {
    throw ConfigError("action: expected " + std::to_string(kActionDim) + " entries, got " +
                      std::to_string(raw.size()));
  }
  DecodedAction out;
  std::vector<double> overruns;
  overruns.reserve(kActionDim);
  auto take = [&](double value, const Vec2& b) {
    double over = 0.0;
    const double clamped = clamp_dim(value, b, &over);
    overruns.push_back(over);
    return clamped;
  };
  out.action.f_step = take(raw[0], bounds.f_step);
  out.action.v_x_ref = take(raw[1], bounds.v_x);
  out.action.v_z_ref = take(raw[2], bounds.v_z);
  out.action.omega_y_ref = take(raw[3], bounds.omega_y);
  if (ablation.no_swing) {
    for (auto& r : out.action.swing_residuals) r.setZero();
  } else {
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const int base = 4 + 3 * leg;
      Vec3& r = out.action.swing_residuals[static_cast<size_t>(leg)];
      r.x() = take(raw[base + 0], bounds.residual_xy);
      r.y() = take(raw[base + 1], bounds.residual_xy);
      r.z() = take(raw[base + 2], bounds.residual_z);
    }
  }
  if (ablation.no_gait) out.action.f_step = kNoGaitFrequency;
  out.excess =
      std::accumulate(overruns.begin(), overruns.end(), 0.0) / static_cast<double>(overruns.size());
  return out;
}

JumpingEnv::JumpingEnv(const RunConfig& config) : config_(config) {
  config_.finalize();
  reset(config_.seed);
}

VecX JumpingEnv::reset(uint64_t seed) {
  rng_.seed(seed);
  sim_ = make_initial_state(config_.robot, config_.gait, config_.sim);
  phase_ = PhaseState{0.0, config_.gait.default_frequency};
  episode_ = EpisodeState{};
  resample_goal();
  return observation_vector();
}

void JumpingEnv::resample_goal() {
  std::uniform_real_distribution<double> dist(config_.env.goal_range.x(),
                                              config_.env.goal_range.y());
  const double distance = dist(rng_);
  const double yaw = sim_.state.orientation.z();
  episode_.goal_world =
      sim_.state.position.head<2>() +
      distance * Vec2(std::cos(yaw), std::sin(yaw));
}

Observation JumpingEnv::observation() const {
  return assemble_observation(sim_.state, phase_.phase(), episode_.goal_world);
}

StepResult JumpingEnv::step(const VecX& raw_action) {
  if (episode_.done) throw SteppedAfterDoneError();

  StepResult result;
  DecodedAction decoded = decode_action(raw_action, config_.env.action_bounds, config_.ablation);
  result.effective_action = decoded.action;
  result.action_excess = decoded.excess;

  const double u0 = phase_.unwrapped;
  bool diverged = false;
  try {
    HighLevelResult hl = step_high_level(sim_, phase_, config_.robot, config_.gait, config_.sim,
                                         decoded.action, config_.controller, &result.ticks);
    sim_ = hl.sim;
    phase_ = hl.phase;
  } catch (const SimDivergedError&) {
    diverged = true;
  }
  episode_.steps += 1;

  if (!diverged) {
    const double u1 = phase_.unwrapped;
    RewardInputs inputs;
    inputs.base_position = sim_.state.position;
    inputs.base_position.z() -= config_.sim.ground_height;
    inputs.base_orientation = sim_.state.orientation;
    inputs.actual_contacts = sim_.state.contact_flags;
    inputs.desired_contacts = desired_contact_state(config_.gait, phase_.phase());
    inputs.foot_velocities_world = sim_.foot_velocities;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      inputs.foot_heights[static_cast<size_t>(leg)] =
          sim_.state.foot_positions_world[static_cast<size_t>(leg)].z() -
          config_.sim.ground_height;
      inputs.knee_angles[static_cast<size_t>(leg)] =
          sim_.joints.angles[static_cast<size_t>(leg)].z();
    }
    inputs.f_step = phase_.frequency;
    inputs.goal_world = episode_.goal_world;
    inputs.action_excess = decoded.excess;
    inputs.cycle_fraction = (u1 - u0) / kTwoPi;

    result.breakdown = compute_reward(inputs, config_.env.reward_weights,
                                      config_.env.reward_signs, config_.env.reward_params);
    result.reward = result.breakdown.total;
    episode_.total_reward += result.reward;
    {
      const auto raw = result.breakdown.raw_terms();
      const auto& w = config_.env.reward_weights;
      const auto& s = config_.env.reward_signs;
      const std::array<double, 9> weighted = {
          w.upright * s.upright * raw[0],
          w.base_height * s.base_height * raw[1],
          w.contact_consistency * s.contact_consistency * raw[2],
          w.foot_slipping * s.foot_slipping * raw[3],
          w.foot_clearance * s.foot_clearance * raw[4],
          w.knee_contact * s.knee_contact * raw[5],
          w.stepping_frequency * s.stepping_frequency * raw[6],
          w.distance_to_goal * s.distance_to_goal * raw[7],
          w.out_of_bound_action * s.out_of_bound_action * raw[8]};
      for (int i = 0; i < 9; ++i) {
        episode_.term_sums[static_cast<size_t>(i)] +=
            inputs.cycle_fraction * weighted[static_cast<size_t>(i)];
      }
    }

    // Attribute the step reward to gait cycles in proportion to phase
    // progress, so per-cycle totals are exact even when a cycle boundary
    // falls inside a control step.
    double u_prev = u0;
    long long boundary = static_cast<long long>(std::floor(u0 / kTwoPi)) + 1;
    while (boundary * kTwoPi <= u1) {
      const double b = static_cast<double>(boundary) * kTwoPi;
      const double frac = (u1 > u0) ? (b - u_prev) / (u1 - u0) : 0.0;
      episode_.cycle_reward_accum += frac * result.reward;
      episode_.per_cycle_rewards.push_back(episode_.cycle_reward_accum);
      episode_.cycle_reward_accum = 0.0;
      u_prev = b;
      boundary += 1;
      resample_goal();
    }
    const double tail_frac = (u1 > u0) ? (u1 - u_prev) / (u1 - u0) : 1.0;
    episode_.cycle_reward_accum += tail_frac * result.reward;
    episode_.cycles_completed = phase_.cycle_count();

    if (episode_.cycles_completed >= config_.env.num_cycles) {
      episode_.done = true;
      episode_.reason = TerminationReason::kCyclesComplete;
    }
    const double height = sim_.state.position.z() - config_.sim.ground_height;
    const double upright =
        std::cos(sim_.state.orientation.x()) * std::cos(sim_.state.orientation.y());
    if (!episode_.done && height < config_.env.height_termination) {
      episode_.done = true;
      episode_.reason = TerminationReason::kLowHeight;
    }
    if (!episode_.done && upright < config_.env.upright_termination) {
      episode_.done = true;
      episode_.reason = TerminationReason::kTippedOver;
    }
  } else {
    episode_.done = true;
    episode_.reason = TerminationReason::kDiverged;
  }

  result.done = episode_.done;
  result.reason = episode_.reason;
  result.observation = observation_vector();
  return result;
}

VecX heuristic_policy(const Observation& obs, const GaitConfig& gait,
                      const HeuristicParams& params) {
  VecX raw = VecX::Zero(kActionDim);
  raw[0] = params.f_step > 0.0 ? params.f_step : gait.default_frequency;

  // Mean stance progress over legs currently in a stance window; airborne
  // when no leg is.
  double progress_sum = 0.0;
  int stance_legs = 0;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    if (auto s = stance_window_progress(gait, obs.phase, leg)) {
      progress_sum += *s;
      stance_legs += 1;
    }
  }
  if (stance_legs > 0) {
    const double s = progress_sum / stance_legs;
    raw[2] = params.v_z_peak * (0.2 + 0.8 * s);
    raw[1] = std::clamp(params.v_x_gain * obs.goal_egocentric.x(), 0.0, 3.0);
  }
  raw[3] = -params.pitch_gain * obs.orientation_rpy.y();
  for (int leg = 0; leg < kNumLegs; ++leg) {
    raw[4 + 3 * leg + 2] = params.clearance;
  }
  return raw;
}

PolicyFn make_heuristic_policy(const HeuristicParams& params) {
  return [params](const Observation& obs, const JumpingEnv& env, int) {
    return heuristic_policy(obs, env.config().gait, params);
  };
}

EpisodeSummary run_episode(const RunConfig& config, uint64_t seed, const PolicyFn& policy,
                           std::vector<TickLog>* tick_sink,
                           std::vector<std::pair<VecX, CentroidalAction>>* action_sink) {
  const auto t0 = std::chrono::steady_clock::now();
  JumpingEnv env(config);
  env.reset(seed);

  EpisodeSummary summary;
  summary.seed = seed;
  summary.max_base_height = env.sim_state().state.position.z();

  int step = 0;
  while (!env.episode().done) {
    const VecX raw = policy(env.observation(), env, step);
    StepResult result = env.step(raw);
    if (action_sink != nullptr) action_sink->emplace_back(raw, result.effective_action);
    if (tick_sink != nullptr) {
      tick_sink->insert(tick_sink->end(), result.ticks.begin(), result.ticks.end());
    }
    summary.max_base_height = std::max(summary.max_base_height, env.sim_state().state.position.z());
    step += 1;
  }

  const EpisodeState& ep = env.episode();
  summary.steps = ep.steps;
  summary.total_reward = ep.total_reward;
  summary.per_cycle_rewards = ep.per_cycle_rewards;
  summary.term_sums = ep.term_sums;
  summary.cycles_completed = ep.cycles_completed;
  summary.reason = ep.reason;
  summary.final_goal_distance =
      (ep.goal_world - env.sim_state().state.position.head<2>()).norm();
  summary.workspace_clamp_count = env.sim_state().workspace_clamp_count;
  summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

BatchResult batch_rollout(const RunConfig& config, int num_episodes, uint64_t base_seed,
                          const PolicyFn& policy, int num_threads) {
  const auto t0 = std::chrono::steady_clock::now();
  if (num_threads <= 0) {
    num_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  BatchResult result;
  result.episodes.resize(static_cast<size_t>(std::max(0, num_episodes)));

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= num_episodes) return;
      result.episodes[static_cast<size_t>(i)] =
          run_episode(config, base_seed + static_cast<uint64_t>(i), policy);
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min(num_threads, std::max(1, num_episodes));
  pool.reserve(static_cast<size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace cajun
