#pragma once

#include <array>
#include <optional>
#include <vector>

#include <json.hpp>

#include "cajun/gait.hpp"
#include "cajun/leg_controller.hpp"
#include "cajun/robot_model.hpp"
#include "cajun/state.hpp"
#include "cajun/types.hpp"

// Centroidal simulator at a fixed 500 Hz low-level tick. The base integrates
// semi-implicitly (velocities first, then pose with the updated velocities);
// stance feet are pinned to immovable anchors so there is no slip by
// construction, swing feet track their commanded targets kinematically
// (massless legs). Flight is exactly ballistic.

namespace cajun {

enum class ContactMode {
  kIdealized,  // contact := gait desired contact
  kPhysical,   // contact requires the foot at/below ground; early touchdown sticks
};

struct Perturbation {
  double t_start = 0.0;
  double t_end = 0.0;
  Vec3 velocity_delta = Vec3::Zero();  // world frame, applied once at window start
};

struct SimConfig {
  double dt_low = 0.002;      // s
  int steps_per_action = 5;   // low-level ticks per high-level action
  double ground_height = 0.0;
  ContactMode contact_mode = ContactMode::kPhysical;
  std::vector<Perturbation> perturbations;

  double dt_high() const { return dt_low * steps_per_action; }
  void validate() const;
  static SimConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SimState {
  CentroidalState state;
  JointState joints;
  // Pinned world-frame contact points; bitwise immobile while set.
  std::array<std::optional<Vec3>, kNumLegs> anchors;
  // Foot world position at the most recent lift-off, per leg.
  std::array<Vec3, kNumLegs> liftoff_positions{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(),
                                               Vec3::Zero()};
  // Finite-difference world-frame foot velocities (zero for pinned feet).
  std::array<Vec3, kNumLegs> foot_velocities{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(),
                                             Vec3::Zero()};
  double time = 0.0;
  std::vector<bool> perturbations_applied;
  long workspace_clamp_count = 0;
};

// Everything observable about one low-level tick. `time` is the post-tick
// clock; `phase` and the commands are the values used during the tick; the
// state snapshot fields are post-tick.
struct TickLog {
  double time = 0.0;
  double phase = 0.0;
  CentroidalState state;
  std::array<bool, kNumLegs> desired_contacts{};
  GrfSolution grf;
  std::array<Vec3, kNumLegs> torques{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  std::array<bool, kNumLegs> clip_flags{};
  CentroidalAction action;
};

// Standing start: nominal joint angles, feet on the ground, base level.
// Legs in stance at phi = 0 begin pinned.
SimState make_initial_state(const RobotModel& model, const GaitConfig& gait,
                            const SimConfig& config);

// One 500 Hz tick at gait phase `phi`. Throws SimDivergedError when the base
// leaves the validity envelope.
SimState step_low_level(const SimState& sim, const RobotModel& model, const GaitConfig& gait,
                        const SimConfig& config, double phi, const CentroidalAction& action,
                        const ControllerConfig& controller, TickLog* log = nullptr);

struct HighLevelResult {
  SimState sim;
  PhaseState phase;
};

// steps_per_action low-level ticks holding the action fixed; the phase
// advances once per tick.
HighLevelResult step_high_level(const SimState& sim, const PhaseState& phase,
                                const RobotModel& model, const GaitConfig& gait,
                                const SimConfig& config, const CentroidalAction& action,
                                const ControllerConfig& controller,
                                std::vector<TickLog>* logs = nullptr);

}  // namespace cajun
