#include "cajun/simulator.hpp"

#include <cmath>
#include <string>

#include "cajun/errors.hpp"
#include "cajun/json_util.hpp"
#include "cajun/kinematics.hpp"
#include "cajun/logging.hpp"
#include "cajun/rotation.hpp"

namespace cajun {
namespace {

constexpr double kContactHeightTol = 1e-9;

ContactMode contact_mode_from_string(const std::string& s) {
  if (s == "idealized") return ContactMode::kIdealized;
  if (s == "physical") return ContactMode::kPhysical;
  throw ConfigError("sim.contact_mode: expected 'idealized' or 'physical'");
}

const char* contact_mode_string(ContactMode mode) {
  return mode == ContactMode::kIdealized ? "idealized" : "physical";
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt_low > 0.0)) throw ConfigError("sim.dt_low: must be positive");
  if (steps_per_action < 1) throw ConfigError("sim.steps_per_action: must be >= 1");
  for (size_t i = 0; i < perturbations.size(); ++i) {
    if (!(perturbations[i].t_start <= perturbations[i].t_end)) {
      throw ConfigError("sim.perturbations[" + std::to_string(i) + "]: t_start must be <= t_end");
    }
  }
}

SimConfig SimConfig::from_json(const Json& j) {
  SimConfig c;
  require_object(j, "sim");
  reject_unknown_keys(j, "sim",
                      {"dt_low", "steps_per_action", "ground_height", "contact_mode",
                       "perturbations"});
  c.dt_low = get_number(j, "dt_low", "sim", c.dt_low);
  c.steps_per_action = get_int(j, "steps_per_action", "sim", c.steps_per_action);
  c.ground_height = get_number(j, "ground_height", "sim", c.ground_height);
  c.contact_mode = contact_mode_from_string(
      get_string(j, "contact_mode", "sim", contact_mode_string(c.contact_mode)));
  if (j.contains("perturbations")) {
    const Json& ps = j.at("perturbations");
    if (!ps.is_array()) throw ConfigError("sim.perturbations: expected an array");
    int i = 0;
    for (const auto& p : ps) {
      const std::string path = "sim.perturbations[" + std::to_string(i++) + "]";
      require_object(p, path);
      reject_unknown_keys(p, path, {"t_start", "t_end", "velocity_delta"});
      Perturbation out;
      out.t_start = get_number(p, "t_start", path, 0.0);
      out.t_end = get_number(p, "t_end", path, out.t_start);
      out.velocity_delta = get_vec3(p, "velocity_delta", path, Vec3::Zero());
      c.perturbations.push_back(out);
    }
  }
  c.validate();
  return c;
}

Json SimConfig::to_json() const {
  Json j;
  j["dt_low"] = dt_low;
  j["steps_per_action"] = steps_per_action;
  j["ground_height"] = ground_height;
  j["contact_mode"] = contact_mode_string(contact_mode);
  Json ps = Json::array();
  for (const Perturbation& p : perturbations) {
    ps.push_back({{"t_start", p.t_start},
                  {"t_end", p.t_end},
                  {"velocity_delta", {p.velocity_delta.x(), p.velocity_delta.y(),
                                      p.velocity_delta.z()}}});
  }
  j["perturbations"] = ps;
  return j;
}

SimState make_initial_state(const RobotModel& model, const GaitConfig& gait,
                            const SimConfig& config) {
  SimState sim;
  double lowest_foot = 0.0;
  std::array<Vec3, kNumLegs> feet_base;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    sim.joints.angles[leg] = model.nominal_joint_angles;
    feet_base[leg] = forward_kinematics(model, leg, model.nominal_joint_angles);
    lowest_foot = std::min(lowest_foot, feet_base[leg].z());
  }
  sim.state.position = Vec3(0.0, 0.0, config.ground_height - lowest_foot);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    sim.state.foot_positions_world[leg] = sim.state.position + feet_base[leg];
    sim.liftoff_positions[leg] = sim.state.foot_positions_world[leg];
  }
  const auto desired = desired_contact_state(gait, 0.0);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const bool on_ground =
        sim.state.foot_positions_world[leg].z() <= config.ground_height + kContactHeightTol;
    const bool pin = config.contact_mode == ContactMode::kIdealized ? desired[leg] : on_ground;
    if (pin) {
      Vec3 anchor = sim.state.foot_positions_world[leg];
      anchor.z() = config.ground_height;
      sim.anchors[leg] = anchor;
      sim.state.foot_positions_world[leg] = anchor;
      sim.state.contact_flags[leg] = true;
    }
  }
  sim.perturbations_applied.assign(config.perturbations.size(), false);
  return sim;
}

SimState step_low_level(const SimState& sim_in, const RobotModel& model, const GaitConfig& gait,
                        const SimConfig& config, double phi, const CentroidalAction& action,
                        const ControllerConfig& controller, TickLog* log) {
  SimState sim = sim_in;
  const double dt = config.dt_low;
  const double ground = config.ground_height;

  // Velocity perturbations fire exactly once, on the first tick inside their
  // window.
  for (size_t i = 0; i < config.perturbations.size(); ++i) {
    const Perturbation& p = config.perturbations[i];
    if (!sim.perturbations_applied[i] && sim.time >= p.t_start && sim.time <= p.t_end) {
      sim.state.linear_velocity += p.velocity_delta;
      sim.perturbations_applied[i] = true;
    }
  }

  const auto desired = desired_contact_state(gait, phi);

  // --- contact resolution ---------------------------------------------------
  // Pin/release before control so the stance set and anchor geometry are
  // consistent within the tick. Release in physical mode additionally requires
  // the commanded swing target to actually leave the ground, so a lift-off
  // with no upward residual keeps the foot grounded instead of flickering.
  std::array<LegCommand, kNumLegs> pending_swing{};
  std::array<bool, kNumLegs> has_pending_swing{};
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const bool pinned = sim.anchors[leg].has_value();
    if (config.contact_mode == ContactMode::kIdealized) {
      if (desired[leg] && !pinned) {
        Vec3 anchor = sim.state.foot_positions_world[leg];
        anchor.z() = ground;
        sim.anchors[leg] = anchor;
      } else if (!desired[leg] && pinned) {
        sim.liftoff_positions[leg] = *sim.anchors[leg];
        sim.anchors[leg].reset();
      }
      continue;
    }
    // physical mode
    if (pinned) {
      if (!desired[leg]) {
        // Candidate release: evaluate this tick's swing command with the
        // current foot position as the lift-off point.
        LegCommand cmd = swing_leg_command(model, sim.state, gait, phi, action, leg,
                                           *sim.anchors[leg], controller.swing, ground);
        if (cmd.foot_target_world.z() > ground + kContactHeightTol) {
          sim.liftoff_positions[leg] = *sim.anchors[leg];
          sim.anchors[leg].reset();
          pending_swing[leg] = cmd;
          has_pending_swing[leg] = true;
        }
      }
    } else {
      if (sim.state.foot_positions_world[leg].z() <= ground + kContactHeightTol) {
        // Touchdown (also early touchdown during a swing window): anchor at
        // the commanded xy of this tick, i.e. the position the foot reached.
        Vec3 anchor = sim.state.foot_positions_world[leg];
        anchor.z() = ground;
        sim.anchors[leg] = anchor;
      }
    }
  }
  for (int leg = 0; leg < kNumLegs; ++leg) {
    sim.state.contact_flags[leg] = sim.anchors[leg].has_value();
    if (sim.anchors[leg]) sim.state.foot_positions_world[leg] = *sim.anchors[leg];
  }

  // --- control --------------------------------------------------------------
  ControlOutput control = compute_leg_commands(model, sim.state, sim.joints, gait, phi, action,
                                               sim.liftoff_positions, controller, ground);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    if (has_pending_swing[leg]) control.commands[leg] = pending_swing[leg];
    if (control.commands[leg].workspace_clamped) ++sim.workspace_clamp_count;
  }

  // --- base integration (semi-implicit Euler) --------------------------------
  const Vec6 qdd = control.grf.achieved_acceleration;  // [angular body; linear base]
  const Mat3 r_wb = rotation_world_from_base(sim.state.orientation);
  sim.state.linear_velocity += r_wb * qdd.tail<3>() * dt;
  sim.state.angular_velocity += qdd.head<3>() * dt;
  sim.state.position += sim.state.linear_velocity * dt;
  sim.state.orientation +=
      body_rate_to_euler_rate(sim.state.orientation) * sim.state.angular_velocity * dt;
  sim.time += dt;

  if (sim.state.linear_velocity.norm() > kMaxBaseSpeed) {
    throw SimDivergedError("base speed " + std::to_string(sim.state.linear_velocity.norm()) +
                           " m/s exceeds " + std::to_string(kMaxBaseSpeed));
  }
  if (std::abs(sim.state.orientation.y()) >= kPitchGuard) {
    throw SimDivergedError("pitch " + std::to_string(sim.state.orientation.y()) +
                           " rad hit the Euler singularity guard");
  }

  // --- feet -----------------------------------------------------------------
  for (int leg = 0; leg < kNumLegs; ++leg) {
    if (sim.anchors[leg]) {
      sim.state.foot_positions_world[leg] = *sim.anchors[leg];
      sim.foot_velocities[leg] = Vec3::Zero();
      continue;
    }
    Vec3 target = control.commands[leg].foot_target_world;
    if (config.contact_mode == ContactMode::kPhysical) {
      target.z() = std::max(target.z(), ground);  // the ground is solid
    }
    sim.foot_velocities[leg] = (target - sim.state.foot_positions_world[leg]) / dt;
    sim.state.foot_positions_world[leg] = target;
  }

  // --- joint state from realized feet ----------------------------------------
  const Mat3 r_wb_new = rotation_world_from_base(sim.state.orientation);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const Vec3 foot_base =
        r_wb_new.transpose() * (sim.state.foot_positions_world[leg] - sim.state.position);
    bool clamped = false;
    const Vec3 reachable = clamp_to_workspace(model, leg, foot_base, &clamped);
    if (clamped) {
      ++sim.workspace_clamp_count;
      log_debug("realized foot outside workspace, leg " + std::to_string(leg));
    }
    if (auto q = inverse_kinematics(model, leg, reachable)) {
      sim.joints.velocities[leg] = (*q - sim.joints.angles[leg]) / dt;
      sim.joints.angles[leg] = *q;
    }
  }

  if (log != nullptr) {
    log->time = sim.time;
    log->phase = phi;
    log->state = sim.state;
    log->desired_contacts = desired;
    log->grf = control.grf;
    log->action = action;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      log->torques[leg] = control.commands[leg].mode == LegCommand::Mode::kStance
                              ? control.commands[leg].torque
                              : Vec3::Zero();
      log->clip_flags[leg] =
          control.grf.normal_clipped[leg] || control.grf.tangential_scaled[leg];
    }
  }
  return sim;
}

HighLevelResult step_high_level(const SimState& sim_in, const PhaseState& phase_in,
                                const RobotModel& model, const GaitConfig& gait,
                                const SimConfig& config, const CentroidalAction& action,
                                const ControllerConfig& controller, std::vector<TickLog>* logs) {
  HighLevelResult out{sim_in, phase_in};
  for (int i = 0; i < config.steps_per_action; ++i) {
    TickLog tick;
    out.sim = step_low_level(out.sim, model, gait, config, out.phase.phase(), action, controller,
                             logs != nullptr ? &tick : nullptr);
    out.phase = advance_phase(out.phase, gait, action.f_step, config.dt_low);
    if (logs != nullptr) logs->push_back(tick);
  }
  return out;
}

}  // namespace cajun
