#include "cajun/leg_controller.hpp"

#include <cmath>

#include "cajun/kinematics.hpp"
#include "cajun/logging.hpp"
#include "cajun/rotation.hpp"

namespace cajun {
namespace {

// Build a swing-style command (joint PD target) for a world-frame foot goal,
// clamping into the workspace first. The realized kinematic target after
// clamping is what the simulator tracks.
LegCommand foot_target_command(const RobotModel& model, const CentroidalState& state, int leg,
                               const Vec3& target_world, const SwingParams& params) {
  LegCommand cmd;
  cmd.mode = LegCommand::Mode::kSwing;
  cmd.kp = params.kp;
  cmd.kd = params.kd;
  const Mat3 r_wb = rotation_world_from_base(state.orientation);
  const Vec3 target_base = r_wb.transpose() * (target_world - state.position);
  const Vec3 clamped = clamp_to_workspace(model, leg, target_base, &cmd.workspace_clamped);
  if (cmd.workspace_clamped) {
    log_debug("swing target clamped into workspace for leg " + std::to_string(leg));
  }
  if (auto q = inverse_kinematics(model, leg, clamped)) {
    cmd.joint_target = *q;
  } else {
    // Unreachable after clamping should not happen; keep the nominal pose.
    log_error("inverse kinematics failed after workspace clamp, leg " + std::to_string(leg));
    cmd.joint_target = model.nominal_joint_angles;
  }
  cmd.foot_target_world = state.position + r_wb * clamped;
  return cmd;
}

Vec3 raibert_point(const RobotModel& model, const CentroidalState& state, const GaitConfig& gait,
                   const CentroidalAction& action, int leg, double ground_height) {
  const Mat3 r_wb = rotation_world_from_base(state.orientation);
  const Vec3 hip_world = state.position + r_wb * model.hip_offsets[leg];
  const double t_stance = estimate_stance_duration(gait, action.f_step, leg);
  const Vec2 xy =
      raibert_landing_target(hip_world.head<2>(), state.linear_velocity.head<2>(), t_stance);
  return Vec3(xy.x(), xy.y(), ground_height);
}

}  // namespace

Vec6 com_pd(const CentroidalState& state, const CentroidalAction& action, const ComGains& gains) {
  const double yaw = state.orientation.z();
  // Pose reference = current pose with roll zeroed, so the only position-level
  // error is the roll angle.
  const Vec3 pose_error_linear = Vec3::Zero();
  const Vec3 pose_error_angular(-state.orientation.x(), 0.0, 0.0);

  const Vec3 v_ref_world = rot_z(yaw) * Vec3(action.v_x_ref, 0.0, action.v_z_ref);
  const Vec3 v_error_world = v_ref_world - state.linear_velocity;
  const Vec3 omega_error = Vec3(0.0, action.omega_y_ref, 0.0) - state.angular_velocity;

  const Vec3 linear_world =
      gains.kp.head<3>().cwiseProduct(pose_error_linear) + gains.kd.head<3>().cwiseProduct(v_error_world);
  const Vec3 angular_body =
      gains.kp.tail<3>().cwiseProduct(pose_error_angular) + gains.kd.tail<3>().cwiseProduct(omega_error);

  const Mat3 r_wb = rotation_world_from_base(state.orientation);
  Vec6 qdd_ref;
  qdd_ref.head<3>() = angular_body;
  qdd_ref.tail<3>() = r_wb.transpose() * linear_world;
  return qdd_ref;
}

Vec2 raibert_landing_target(const Vec2& hip_ground_xy, const Vec2& com_velocity_xy,
                            double stance_duration) {
  return hip_ground_xy + com_velocity_xy * stance_duration / 2.0;
}

Vec3 swing_reference(const Vec3& p_liftoff, const Vec3& p_air, const Vec3& p_land, double s) {
  // Lagrange basis through s = 0, 0.5, 1.
  const double l0 = 2.0 * (s - 0.5) * (s - 1.0);
  const double l1 = 4.0 * s * (1.0 - s);
  const double l2 = 2.0 * s * (s - 0.5);
  return l0 * p_liftoff + l1 * p_air + l2 * p_land;
}

StanceCommands stance_leg_command(const RobotModel& model, const CentroidalState& state,
                                  const JointState& joints, const CentroidalAction& action,
                                  const ControllerConfig& config) {
  StanceCommands out;
  const CentroidalDynamics dyn = build_centroidal_dynamics(model, state, state.contact_flags);
  const Vec6 qdd_ref = com_pd(state, action, config.com_gains);

  VecX f;
  if (config.mode == GrfSolverMode::kQp) {
    QpGrfResult qp =
        solve_grf_qp(dyn, qdd_ref, config.weights, model.friction_mu, model.f_min, model.f_max);
    if (!qp.converged) {
      // Numerical trouble; fall back to the projected closed-form solution.
      log_warn("grf qp hit its iteration limit, falling back to closed form");
      const VecX f_hat = solve_grf_closed_form(dyn, qdd_ref, config.weights);
      ConeClipResult clip =
          clip_to_friction_cone(f_hat, model.friction_mu, model.f_min, model.f_max);
      f = clip.f;
    } else {
      f = qp.f;
      out.grf.qp_iterations = qp.iterations;
      for (int leg = 0; leg < kNumLegs; ++leg) {
        const int slot = dyn.column_of_leg[leg];
        if (slot < 0) continue;
        out.grf.normal_clipped[leg] = qp.normal_active[slot];
        out.grf.tangential_scaled[leg] = qp.tangential_active[slot];
      }
    }
  } else {
    const VecX f_hat = solve_grf_closed_form(dyn, qdd_ref, config.weights);
    ConeClipResult clip = clip_to_friction_cone(f_hat, model.friction_mu, model.f_min, model.f_max);
    f = clip.f;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const int slot = dyn.column_of_leg[leg];
      if (slot < 0) continue;
      out.grf.normal_clipped[leg] = clip.normal_clipped[slot];
      out.grf.tangential_scaled[leg] = clip.tangential_scaled[slot];
    }
  }

  out.grf.achieved_acceleration = dyn.apply(f);
  out.grf.stance = state.contact_flags;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const int slot = dyn.column_of_leg[leg];
    if (slot < 0) continue;
    const Vec3 f_leg = f.segment<3>(3 * slot);
    out.grf.forces[leg] = f_leg;
    TorqueResult torque = torque_from_grf(model, leg, joints.angles[leg], f_leg);
    LegCommand& cmd = out.commands[leg];
    cmd.mode = LegCommand::Mode::kStance;
    cmd.torque = torque.torque;
    cmd.torque_saturated = torque.saturated;
    cmd.foot_target_world = state.foot_positions_world[leg];
  }
  return out;
}

LegCommand swing_leg_command(const RobotModel& model, const CentroidalState& state,
                             const GaitConfig& gait, double phi, const CentroidalAction& action,
                             int leg, const Vec3& p_liftoff_world, const SwingParams& params,
                             double ground_height) {
  const auto progress = swing_progress(gait, phi, leg);
  const double s = progress.value_or(1.0);

  const Mat3 r_wb = rotation_world_from_base(state.orientation);
  const Vec3 hip_world = state.position + r_wb * model.hip_offsets[leg];
  const Vec3 p_air(hip_world.x(), hip_world.y(), ground_height);
  const Vec3 p_land = raibert_point(model, state, gait, action, leg, ground_height);

  Vec3 target = params.no_reference ? p_air : swing_reference(p_liftoff_world, p_air, p_land, s);
  if (!params.no_residual) target += action.swing_residuals[leg];
  return foot_target_command(model, state, leg, target, params);
}

LegCommand landing_hold_command(const RobotModel& model, const CentroidalState& state,
                                const GaitConfig& gait, const CentroidalAction& action, int leg,
                                const SwingParams& params, double ground_height) {
  const Vec3 target = raibert_point(model, state, gait, action, leg, ground_height);
  return foot_target_command(model, state, leg, target, params);
}

ControlOutput compute_leg_commands(const RobotModel& model, const CentroidalState& state,
                                   const JointState& joints, const GaitConfig& gait, double phi,
                                   const CentroidalAction& action,
                                   const std::array<Vec3, kNumLegs>& liftoff_positions,
                                   const ControllerConfig& config, double ground_height) {
  ControlOutput out;
  out.desired_contacts = desired_contact_state(gait, phi);

  bool any_stance = false;
  for (bool c : state.contact_flags) any_stance |= c;
  if (any_stance) {
    StanceCommands stance = stance_leg_command(model, state, joints, action, config);
    out.grf = stance.grf;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      if (state.contact_flags[leg]) out.commands[leg] = stance.commands[leg];
    }
  } else {
    const CentroidalDynamics dyn = build_centroidal_dynamics(model, state, state.contact_flags);
    out.grf.achieved_acceleration = dyn.gravity;
  }

  for (int leg = 0; leg < kNumLegs; ++leg) {
    if (state.contact_flags[leg]) continue;
    if (out.desired_contacts[leg]) {
      out.commands[leg] = landing_hold_command(model, state, gait, action, leg, config.swing,
                                               ground_height);
    } else {
      out.commands[leg] = swing_leg_command(model, state, gait, phi, action, leg,
                                            liftoff_positions[leg], config.swing, ground_height);
    }
  }
  return out;
}

}  // namespace cajun
