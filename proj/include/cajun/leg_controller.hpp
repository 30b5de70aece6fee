#pragma once

#include <array>

#include "cajun/gait.hpp"
#include "cajun/grf_solver.hpp"
#include "cajun/robot_model.hpp"
#include "cajun/state.hpp"
#include "cajun/types.hpp"

// Low-level leg control: stance legs get feed-forward torques from the GRF
// solve, swing legs get joint-position targets from a Raibert-style
// touchdown trajectory plus policy residuals. Everything here is stateless
// given (model, state, action); the caller owns lift-off bookkeeping.

namespace cajun {

// One high-level command from the centroidal policy.
struct CentroidalAction {
  double f_step = 2.0;       // stepping frequency, Hz
  double v_x_ref = 0.0;      // sagittal velocity commands (heading frame)
  double v_z_ref = 0.0;
  double omega_y_ref = 0.0;  // pitch rate command, body frame
  std::array<Vec3, kNumLegs> swing_residuals{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(),
                                             Vec3::Zero()};
};

struct ActionBounds {
  Vec2 f_step{1.0, 4.0};
  Vec2 v_x{-1.0, 3.0};
  Vec2 v_z{-3.0, 3.0};
  Vec2 omega_y{-3.0, 3.0};
  Vec2 residual_xy{-0.1, 0.1};
  Vec2 residual_z{-0.1, 0.25};
};

// PD gains over the pose vector in [position(3), orientation(3)] order, the
// convention the gains are usually quoted in. Defaults track only the roll
// angle (kp) and damp every velocity component (kd).
struct ComGains {
  Vec6 kp = (Vec6() << 0, 0, 0, 50, 0, 0).finished();
  Vec6 kd = (Vec6() << 10, 10, 10, 10, 10, 10).finished();
};

// Desired base acceleration, returned in the dynamics ordering
// [angular (body); linear (base frame)]. The pose reference is the current
// pose with roll zeroed; the velocity reference is
// (v_x_ref, 0, v_z_ref) in the heading frame plus (0, omega_y_ref, 0) body
// rates. Linear gains act on world-frame errors before rotation into the
// base frame.
Vec6 com_pd(const CentroidalState& state, const CentroidalAction& action, const ComGains& gains);

enum class GrfSolverMode { kClosedForm, kQp };

struct GrfSolution {
  std::array<Vec3, kNumLegs> forces{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  std::array<bool, kNumLegs> stance{};
  std::array<bool, kNumLegs> normal_clipped{};
  std::array<bool, kNumLegs> tangential_scaled{};
  Vec6 achieved_acceleration = Vec6::Zero();  // A f + g
  int qp_iterations = 0;
};

struct LegCommand {
  enum class Mode { kStance, kSwing };
  Mode mode = Mode::kSwing;
  // stance
  Vec3 torque = Vec3::Zero();
  bool torque_saturated = false;
  // swing
  Vec3 joint_target = Vec3::Zero();
  double kp = 0.0;
  double kd = 0.0;
  Vec3 foot_target_world = Vec3::Zero();
  bool workspace_clamped = false;
};

struct SwingParams {
  double kp = 30.0;
  double kd = 1.0;
  bool no_residual = false;   // ablation: ignore policy residuals
  bool no_reference = false;  // ablation: hip projection + residual only
};

struct ControllerConfig {
  ComGains com_gains;
  SolverWeights weights;
  GrfSolverMode mode = GrfSolverMode::kClosedForm;
  SwingParams swing;
};

// Touchdown point: hip ground projection advanced by half a stance of CoM
// travel.
Vec2 raibert_landing_target(const Vec2& hip_ground_xy, const Vec2& com_velocity_xy,
                            double stance_duration);

// Per-coordinate quadratic through (0, p_liftoff), (0.5, p_air), (1, p_land).
Vec3 swing_reference(const Vec3& p_liftoff, const Vec3& p_air, const Vec3& p_land, double s);

// GRF solve + torque map for the legs flagged as contact in state. Requires
// at least one stance leg.
struct StanceCommands {
  std::array<LegCommand, kNumLegs> commands{};  // only stance entries meaningful
  GrfSolution grf;
};
StanceCommands stance_leg_command(const RobotModel& model, const CentroidalState& state,
                                  const JointState& joints, const CentroidalAction& action,
                                  const ControllerConfig& config);

// Swing trajectory + IK for one leg currently inside its swing interval.
LegCommand swing_leg_command(const RobotModel& model, const CentroidalState& state,
                             const GaitConfig& gait, double phi, const CentroidalAction& action,
                             int leg, const Vec3& p_liftoff_world, const SwingParams& params,
                             double ground_height);

// Holding command for a leg whose gait window says stance but which has not
// touched down yet: steer the foot to the Raibert landing point on the ground.
LegCommand landing_hold_command(const RobotModel& model, const CentroidalState& state,
                                const GaitConfig& gait, const CentroidalAction& action, int leg,
                                const SwingParams& params, double ground_height);

struct ControlOutput {
  std::array<LegCommand, kNumLegs> commands{};
  GrfSolution grf;
  std::array<bool, kNumLegs> desired_contacts{};
};

// Full 500 Hz controller tick: stance legs per state.contact_flags, swing
// trajectories for legs in their gait swing interval, landing holds for the
// rest.
ControlOutput compute_leg_commands(const RobotModel& model, const CentroidalState& state,
                                   const JointState& joints, const GaitConfig& gait, double phi,
                                   const CentroidalAction& action,
                                   const std::array<Vec3, kNumLegs>& liftoff_positions,
                                   const ControllerConfig& config, double ground_height);

}  // namespace cajun
