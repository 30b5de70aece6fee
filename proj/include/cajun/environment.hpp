#pragma once

#include <array>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cajun/env_config.hpp"
#include "cajun/reward.hpp"
#include "cajun/run_config.hpp"
#include "cajun/simulator.hpp"
#include "cajun/types.hpp"

// Goal-directed jumping MDP on top of the centroidal simulator. One step is
// one high-level action (5 simulator ticks); an episode ends after a fixed
// number of gait cycles or on a fall. The forward goal is resampled each time
// the gait phase wraps.

namespace cajun {

enum class TerminationReason {
  kNone,
  kCyclesComplete,
  kLowHeight,
  kTippedOver,
  kDiverged,
};

const char* termination_reason_string(TerminationReason reason);

// Structured observation; flatten() produces the policy input vector. World
// position and yaw are absolute and can be excluded for an egocentric policy;
// everything else is already pose-invariant.
struct Observation {
  Vec3 position = Vec3::Zero();               // world
  Vec3 orientation_rpy = Vec3::Zero();
  Vec3 velocity_heading = Vec3::Zero();       // linear velocity, heading frame
  Vec3 angular_velocity_body = Vec3::Zero();
  std::array<Vec3, kNumLegs> foot_positions_base{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(),
                                                 Vec3::Zero()};
  double phase = 0.0;                         // wrapped, [0, 2*pi)
  Vec2 goal_egocentric = Vec2::Zero();        // goal - base, heading frame

  VecX flatten(const EnvConfig& config) const;
  static int dimension(const EnvConfig& config);
  static std::vector<std::string> names(const EnvConfig& config);
};

Observation assemble_observation(const CentroidalState& state, double phi,
                                 const Vec2& goal_world);

inline constexpr int kActionDim = 16;

// Raw policy action -> clamped command + ablation overrides. `excess` is the
// mean over dimensions of the clamped amount relative to each dimension's
// range (residual dimensions are ignored when they are ablated away).
struct DecodedAction {
  CentroidalAction action;
  double excess = 0.0;
};

DecodedAction decode_action(const VecX& raw, const ActionBounds& bounds,
                            const AblationFlags& ablation);

struct EpisodeState {
  long long cycles_completed = 0;
  Vec2 goal_world = Vec2::Zero();
  double cycle_reward_accum = 0.0;
  std::vector<double> per_cycle_rewards;
  std::array<double, 9> term_sums{};  // weighted, signed, episode totals
  double total_reward = 0.0;
  int steps = 0;
  bool done = false;
  TerminationReason reason = TerminationReason::kNone;
};

struct StepResult {
  VecX observation;
  double reward = 0.0;
  bool done = false;
  TerminationReason reason = TerminationReason::kNone;
  RewardBreakdown breakdown;
  CentroidalAction effective_action;
  double action_excess = 0.0;
  std::vector<TickLog> ticks;
};

class JumpingEnv {
 public:
  explicit JumpingEnv(const RunConfig& config);

  VecX reset(uint64_t seed);
  // Throws SteppedAfterDoneError if called on a finished episode. Simulator
  // divergence is absorbed into done + TerminationReason::kDiverged.
  StepResult step(const VecX& raw_action);

  const RunConfig& config() const { return config_; }
  const SimState& sim_state() const { return sim_; }
  SimState& mutable_sim_state() { return sim_; }  // tests force states with this
  const PhaseState& phase_state() const { return phase_; }
  const EpisodeState& episode() const { return episode_; }
  Observation observation() const;
  VecX observation_vector() const { return observation().flatten(config_.env); }

 private:
  void resample_goal();

  RunConfig config_;
  SimState sim_;
  PhaseState phase_;
  EpisodeState episode_;
  std::mt19937_64 rng_;
};

// Scripted jumping policy: vertical thrust ramps through stance, horizontal
// command chases the goal, pitch is damped, swing feet get a constant lift
// residual. Always emits in-bound actions.
VecX heuristic_policy(const Observation& obs, const GaitConfig& gait,
                      const HeuristicParams& params);

// Policy callback: current observation + step index -> raw 16-dim action.
// Must be safe to call from multiple episodes concurrently.
using PolicyFn = std::function<VecX(const Observation& obs, const JumpingEnv& env, int step)>;

PolicyFn make_heuristic_policy(const HeuristicParams& params);

struct EpisodeSummary {
  uint64_t seed = 0;
  int steps = 0;
  double total_reward = 0.0;
  std::vector<double> per_cycle_rewards;
  std::array<double, 9> term_sums{};
  long long cycles_completed = 0;
  TerminationReason reason = TerminationReason::kNone;
  double final_goal_distance = 0.0;
  double max_base_height = 0.0;
  long workspace_clamp_count = 0;
  double wall_time_s = 0.0;
};

// Runs one episode to completion. Optional sinks receive every simulator tick
// and every (raw, effective) action pair.
EpisodeSummary run_episode(const RunConfig& config, uint64_t seed, const PolicyFn& policy,
                           std::vector<TickLog>* tick_sink = nullptr,
                           std::vector<std::pair<VecX, CentroidalAction>>* action_sink = nullptr);

struct BatchResult {
  std::vector<EpisodeSummary> episodes;
  double wall_time_s = 0.0;
};

// Episode i uses seed base_seed + i, so results are independent of the thread
// count. num_threads <= 0 picks the hardware concurrency.
BatchResult batch_rollout(const RunConfig& config, int num_episodes, uint64_t base_seed,
                          const PolicyFn& policy, int num_threads = 0);

}  // namespace cajun
