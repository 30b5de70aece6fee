#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cajun/environment.hpp"
#include "cajun/errors.hpp"
#include "cajun/gait.hpp"
#include "cajun/robot_model.hpp"
#include "cajun/rotation.hpp"

using namespace cajun;

namespace {

CentroidalState sample_state() {
  CentroidalState state;
  state.position = Vec3(0.4, -0.2, 0.31);
  state.orientation = Vec3(0.03, -0.07, 0.6);
  state.linear_velocity = Vec3(0.9, 0.1, -0.4);
  state.angular_velocity = Vec3(0.2, -0.5, 0.1);
  RobotModel model;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    state.foot_positions_world[static_cast<size_t>(leg)] =
        state.position +
        rotation_world_from_base(state.orientation) *
            (model.hip_offsets[static_cast<size_t>(leg)] + Vec3(0.02, 0.0, -0.28));
  }
  return state;
}

VecX zero_action() { return VecX::Zero(kActionDim); }

// Fixed-frequency standing policy: only the stepping-frequency slot is set.
PolicyFn standing_policy(double f_step) {
  return [f_step](const Observation&, const JumpingEnv&, int) {
    VecX raw = VecX::Zero(kActionDim);
    raw[0] = f_step;
    return raw;
  };
}

}  // namespace

TEST_CASE("observation dimensions for every layout variant") {
  EnvConfig cfg;
  CHECK(Observation::dimension(cfg) == 28);
  CHECK(Observation::names(cfg).size() == 28);
  cfg.observe_raw_phase = true;
  CHECK(Observation::dimension(cfg) == 27);
  CHECK(Observation::names(cfg).size() == 27);
  cfg.exclude_absolute_pose = true;
  CHECK(Observation::dimension(cfg) == 23);
  CHECK(Observation::names(cfg).size() == 23);
  cfg.observe_raw_phase = false;
  CHECK(Observation::dimension(cfg) == 24);
  CHECK(Observation::names(cfg).size() == 24);
}

TEST_CASE("flattened layout: slots land where the names say") {
  const CentroidalState state = sample_state();
  const Vec2 goal(1.2, 0.1);
  const double phi = 0.8;
  const Observation obs = assemble_observation(state, phi, goal);

  EnvConfig cfg;
  const VecX full = obs.flatten(cfg);
  REQUIRE(full.size() == 28);
  CHECK(full[0] == state.position.x());
  CHECK(full[2] == state.position.z());
  CHECK(full[3] == state.orientation.x());
  CHECK(full[4] == state.orientation.y());
  CHECK(full[5] == state.orientation.z());
  CHECK(full[24] == doctest::Approx(std::sin(phi)).epsilon(1e-15));
  CHECK(full[25] == doctest::Approx(std::cos(phi)).epsilon(1e-15));
  // feet occupy [12, 24): base-frame coordinates, z below the hips
  for (int leg = 0; leg < kNumLegs; ++leg) {
    CHECK(full[12 + 3 * leg + 2] == doctest::Approx(-0.28).epsilon(1e-9));
  }

  cfg.observe_raw_phase = true;
  const VecX raw_phase = obs.flatten(cfg);
  REQUIRE(raw_phase.size() == 27);
  CHECK(raw_phase[24] == 0.8);

  cfg.observe_raw_phase = false;
  cfg.exclude_absolute_pose = true;
  const VecX ego = obs.flatten(cfg);
  REQUIRE(ego.size() == 24);
  CHECK(ego[0] == state.orientation.x());  // roll leads once position is dropped
  CHECK(ego[1] == state.orientation.y());
  CHECK(ego[2] == full[6]);                // heading-frame velocity follows
}

TEST_CASE("velocity and goal are expressed in the heading frame") {
  CentroidalState state;
  state.position = Vec3(2.0, 1.0, 0.3);
  state.orientation = Vec3(0.0, 0.0, kPi / 2.0);
  state.linear_velocity = Vec3(1.0, 0.0, 0.2);
  // goal one meter ahead along the heading (world +y)
  const Observation obs = assemble_observation(state, 0.0, Vec2(2.0, 2.0));
  CHECK(obs.velocity_heading.x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(obs.velocity_heading.y() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(obs.velocity_heading.z() == doctest::Approx(0.2));
  CHECK(obs.goal_egocentric.x() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(obs.goal_egocentric.y() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("egocentric observation is invariant to world translation and yaw") {
  const CentroidalState state = sample_state();
  const Vec2 goal = state.position.head<2>() + Vec2(0.7, 0.2);
  const double phi = 2.1;

  const double d_yaw = 1.3;
  const Vec3 shift(5.0, -3.0, 0.0);
  const Mat3 rz = rot_z(d_yaw);
  CentroidalState moved = state;
  moved.position = rz * state.position + shift;
  moved.orientation.z() += d_yaw;
  moved.linear_velocity = rz * state.linear_velocity;
  // body-frame angular velocity is unchanged by a world-frame transform
  for (int leg = 0; leg < kNumLegs; ++leg) {
    moved.foot_positions_world[static_cast<size_t>(leg)] =
        rz * state.foot_positions_world[static_cast<size_t>(leg)] + shift;
  }
  const Vec3 goal3 = rz * Vec3(goal.x(), goal.y(), 0.0) + shift;

  EnvConfig cfg;
  cfg.exclude_absolute_pose = true;
  const VecX a = assemble_observation(state, phi, goal).flatten(cfg);
  const VecX b = assemble_observation(moved, phi, goal3.head<2>()).flatten(cfg);
  REQUIRE(a.size() == b.size());
  CHECK((a - b).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("action decoding clamps and measures the overrun") {
  ActionBounds bounds;
  AblationFlags ablation;
  VecX raw = zero_action();
  raw[0] = 2.0;
  raw[1] = 4.0;   // v_x bound [-1, 3]: clamp to 3, overrun 1/4
  raw[2] = -3.0;  // at the bound exactly
  DecodedAction d = decode_action(raw, bounds, ablation);
  CHECK(d.action.f_step == 2.0);
  CHECK(d.action.v_x_ref == 3.0);
  CHECK(d.action.v_z_ref == -3.0);
  CHECK(d.excess == doctest::Approx((1.0 / 4.0) / 16.0).epsilon(1e-12));

  // residual bounds differ between xy and z
  raw = zero_action();
  raw[0] = 2.0;   // keep the frequency in-bounds so only the residuals clamp
  raw[4] = 0.2;   // xy residual [-0.1, 0.1]: overrun 0.1/0.2
  raw[6] = 0.3;   // z residual [-0.1, 0.25]: overrun 0.05/0.35
  d = decode_action(raw, bounds, ablation);
  CHECK(d.action.swing_residuals[0].x() == doctest::Approx(0.1));
  CHECK(d.action.swing_residuals[0].z() == doctest::Approx(0.25));
  CHECK(d.excess == doctest::Approx((0.1 / 0.2 + 0.05 / 0.35) / 16.0).epsilon(1e-12));

  // in-bound actions have zero excess
  raw = zero_action();
  raw[0] = 2.0;
  CHECK(decode_action(raw, bounds, ablation).excess == 0.0);

  CHECK_THROWS_AS(decode_action(VecX::Zero(12), bounds, ablation), ConfigError);
}

TEST_CASE("residual ablation zeroes residuals and shrinks the excess basis") {
  ActionBounds bounds;
  AblationFlags ablation;
  ablation.no_swing = true;
  VecX raw = zero_action();
  raw[0] = 2.0;
  raw[1] = 4.0;       // overrun 0.25
  raw[7] = 99.0;      // residual: ignored entirely
  const DecodedAction d = decode_action(raw, bounds, ablation);
  for (const auto& r : d.action.swing_residuals) CHECK(r.norm() == 0.0);
  CHECK(d.excess == doctest::Approx(0.25 / 4.0).epsilon(1e-12));  // 4 dims remain
}

TEST_CASE("fixed-gait ablation pins the stepping frequency") {
  ActionBounds bounds;
  AblationFlags ablation;
  ablation.no_gait = true;
  VecX raw = zero_action();
  raw[0] = 3.7;
  const DecodedAction d = decode_action(raw, bounds, ablation);
  CHECK(d.action.f_step == kNoGaitFrequency);
}

TEST_CASE("reset is deterministic and step sequences reproduce bitwise") {
  RunConfig config = RunConfig::defaults();
  config.env.num_cycles = 2;
  JumpingEnv env_a(config);
  JumpingEnv env_b(config);
  const VecX o_a = env_a.reset(7);
  const VecX o_b = env_b.reset(7);
  CHECK((o_a - o_b).norm() == 0.0);

  const PolicyFn policy = make_heuristic_policy(config.env.heuristic);
  for (int k = 0; k < 30; ++k) {
    const VecX act_a = policy(env_a.observation(), env_a, k);
    const VecX act_b = policy(env_b.observation(), env_b, k);
    REQUIRE((act_a - act_b).norm() == 0.0);
    const StepResult ra = env_a.step(act_a);
    const StepResult rb = env_b.step(act_b);
    REQUIRE(ra.reward == rb.reward);
    REQUIRE((ra.observation - rb.observation).norm() == 0.0);
    if (ra.done) break;
  }

  // different seed, different goal
  JumpingEnv env_c(config);
  env_c.reset(7);
  const Vec2 goal7 = env_c.episode().goal_world;
  env_c.reset(8);
  CHECK((env_c.episode().goal_world - goal7).norm() > 1e-12);
}

TEST_CASE("goals sample forward along the heading within the configured range") {
  RunConfig config = RunConfig::defaults();
  JumpingEnv env(config);
  double lo = 1e9, hi = -1e9;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    env.reset(seed);
    const Vec2 rel = env.episode().goal_world - env.sim_state().state.position.head<2>();
    // initial yaw is zero: goals are straight ahead
    CHECK(std::abs(rel.y()) < 1e-12);
    CHECK(rel.x() >= 0.3 - 1e-12);
    CHECK(rel.x() <= 1.0 + 1e-12);
    lo = std::min(lo, rel.x());
    hi = std::max(hi, rel.x());
  }
  CHECK(lo < 0.45);  // the sampler actually covers its range
  CHECK(hi > 0.85);
}

TEST_CASE("one step runs five simulator ticks and reports the effective action") {
  RunConfig config = RunConfig::defaults();
  JumpingEnv env(config);
  env.reset(3);
  VecX raw = zero_action();
  raw[0] = 2.0;
  raw[1] = 5.0;  // clamped to 3
  const StepResult r = env.step(raw);
  CHECK(r.ticks.size() == 5);
  CHECK(r.effective_action.v_x_ref == 3.0);
  CHECK(r.action_excess == doctest::Approx((2.0 / 4.0) / 16.0).epsilon(1e-12));
  CHECK_FALSE(r.done);
  CHECK(env.episode().steps == 1);
}

TEST_CASE("height termination fires when the base drops") {
  RunConfig config = RunConfig::defaults();
  JumpingEnv env(config);
  env.reset(1);
  env.mutable_sim_state().state.position.z() = 0.149;  // just under the threshold
  VecX raw = zero_action();
  raw[0] = 2.0;
  const StepResult r = env.step(raw);
  CHECK(r.done);
  CHECK(r.reason == TerminationReason::kLowHeight);
  CHECK_THROWS_AS(env.step(raw), SteppedAfterDoneError);
}

TEST_CASE("tip-over termination fires on a large roll") {
  RunConfig config = RunConfig::defaults();
  JumpingEnv env(config);
  env.reset(1);
  env.mutable_sim_state().state.orientation.x() = 1.15;  // cos(1.15) ~ 0.41 < 0.5
  VecX raw = zero_action();
  raw[0] = 2.0;
  const StepResult r = env.step(raw);
  CHECK(r.done);
  CHECK(r.reason == TerminationReason::kTippedOver);
}

TEST_CASE("simulator divergence is absorbed as a terminal step") {
  RunConfig config = RunConfig::defaults();
  JumpingEnv env(config);
  env.reset(1);
  env.mutable_sim_state().state.linear_velocity = Vec3(80.0, 0.0, 0.0);
  const StepResult r = env.step(zero_action());
  CHECK(r.done);
  CHECK(r.reason == TerminationReason::kDiverged);
  CHECK(r.reward == 0.0);
}

TEST_CASE("standing episode completes its cycle budget") {
  RunConfig config = RunConfig::defaults();
  config.env.num_cycles = 3;
  const EpisodeSummary s = run_episode(config, 5, standing_policy(2.0));
  CHECK(s.reason == TerminationReason::kCyclesComplete);
  CHECK(s.cycles_completed == 3);
  CHECK(s.per_cycle_rewards.size() == 3);
  // 2 Hz, dt_high 0.01: 50 steps per cycle; phase accumulation rounding can
  // push the final boundary into the next step
  CHECK(s.steps >= 150);
  CHECK(s.steps <= 151);
}

TEST_CASE("per-cycle attribution conserves the episode total") {
  RunConfig config = RunConfig::defaults();
  config.env.num_cycles = 4;
  config.gait.default_frequency = 1.7;  // cycle boundaries fall inside steps
  JumpingEnv env(config);
  env.reset(11);
  double total = 0.0;
  while (!env.episode().done) {
    VecX raw = zero_action();
    raw[0] = 1.7;
    total += env.step(raw).reward;
  }
  const EpisodeState& ep = env.episode();
  double attributed = ep.cycle_reward_accum;
  for (double r : ep.per_cycle_rewards) attributed += r;
  CHECK(attributed == doctest::Approx(total).epsilon(1e-9));
  CHECK(ep.per_cycle_rewards.size() == 4);
}

TEST_CASE("per-cycle totals are invariant to the stepping frequency") {
  // alive bonus only: every cycle must integrate to exactly the bonus,
  // whatever the frequency, because step rewards scale with phase progress
  RunConfig config = RunConfig::defaults();
  config.env.num_cycles = 5;
  config.env.reward_weights = RewardWeights{};
  config.env.reward_weights.upright = 0.0;
  config.env.reward_weights.base_height = 0.0;
  config.env.reward_weights.contact_consistency = 0.0;
  config.env.reward_weights.foot_slipping = 0.0;
  config.env.reward_weights.foot_clearance = 0.0;
  config.env.reward_weights.knee_contact = 0.0;
  config.env.reward_weights.stepping_frequency = 0.0;
  config.env.reward_weights.distance_to_goal = 0.0;
  config.env.reward_weights.out_of_bound_action = 0.0;
  config.env.reward_params.alive_bonus = 1.0;

  for (double f : {1.66, 3.32}) {
    const EpisodeSummary s = run_episode(config, 2, standing_policy(f));
    REQUIRE(s.reason == TerminationReason::kCyclesComplete);
    REQUIRE(s.per_cycle_rewards.size() == 5);
    for (double r : s.per_cycle_rewards) {
      CHECK(r == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("scripted policy obeys its sign contracts") {
  const GaitConfig gait = GaitConfig::preset(GaitName::kPronking);
  HeuristicParams params;
  Observation obs;
  obs.position = Vec3(0, 0, 0.27);
  obs.goal_egocentric = Vec2(0.8, 0.0);
  obs.orientation_rpy = Vec3(0.0, 0.2, 0.0);  // pitched up

  obs.phase = 0.4;  // stance
  VecX raw = heuristic_policy(obs, gait, params);
  REQUIRE(raw.size() == kActionDim);
  CHECK(raw[0] == gait.default_frequency);
  CHECK(raw[1] > 0.0);                       // chase the goal
  CHECK(raw[2] >= 0.2 * params.v_z_peak);    // thrust ramps through stance
  CHECK(raw[2] <= params.v_z_peak);
  CHECK(raw[3] == doctest::Approx(-params.pitch_gain * 0.2));  // damp pitch
  for (int leg = 0; leg < kNumLegs; ++leg) {
    CHECK(raw[4 + 3 * leg + 2] == params.clearance);
    CHECK(raw[4 + 3 * leg] == 0.0);
  }

  // late stance pushes harder than early stance
  obs.phase = 0.1;
  const double early = heuristic_policy(obs, gait, params)[2];
  obs.phase = 3.0;
  const double late = heuristic_policy(obs, gait, params)[2];
  CHECK(late > early);

  // flight: no velocity commands
  obs.phase = 4.5;
  raw = heuristic_policy(obs, gait, params);
  CHECK(raw[1] == 0.0);
  CHECK(raw[2] == 0.0);

  // goal behind: never push backwards
  obs.phase = 0.4;
  obs.goal_egocentric = Vec2(-0.5, 0.0);
  CHECK(heuristic_policy(obs, gait, params)[1] == 0.0);

  // explicit frequency override
  params.f_step = 1.66;
  CHECK(heuristic_policy(obs, gait, params)[0] == 1.66);
}

TEST_CASE("batch results are independent of the thread count") {
  RunConfig config = RunConfig::defaults();
  config.env.num_cycles = 2;
  const PolicyFn policy = make_heuristic_policy(config.env.heuristic);
  const BatchResult serial = batch_rollout(config, 6, 100, policy, 1);
  const BatchResult parallel = batch_rollout(config, 6, 100, policy, 4);
  REQUIRE(serial.episodes.size() == 6);
  REQUIRE(parallel.episodes.size() == 6);
  for (size_t i = 0; i < 6; ++i) {
    CHECK(serial.episodes[i].seed == 100 + i);
    CHECK(serial.episodes[i].total_reward == parallel.episodes[i].total_reward);
    CHECK(serial.episodes[i].steps == parallel.episodes[i].steps);
    CHECK(serial.episodes[i].cycles_completed == parallel.episodes[i].cycles_completed);
  }
}

TEST_CASE("jumping episodes with the scripted policy reach flight and finish") {
  RunConfig config = RunConfig::defaults();
  config.env.num_cycles = 3;
  std::vector<TickLog> ticks;
  const EpisodeSummary s =
      run_episode(config, 0, make_heuristic_policy(config.env.heuristic), &ticks);
  CHECK(s.reason == TerminationReason::kCyclesComplete);
  CHECK(s.cycles_completed == 3);
  // the robot actually leaves the ground at some point
  bool airborne = false;
  for (const TickLog& t : ticks) {
    bool any = false;
    for (bool c : t.state.contact_flags) any |= c;
    if (!any) airborne = true;
  }
  CHECK(airborne);
  CHECK(s.max_base_height > 0.28);  // clearly above the 0.2648 standing height
}
