#include "cajun/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cajun/errors.hpp"
#include "cajun/json_util.hpp"

namespace cajun {
namespace {

Vec2 get_range(const Json& obj, const std::string& key, const std::string& path, Vec2 fallback) {
  auto a = get_number_array(obj, key, path, 2, {fallback.x(), fallback.y()});
  if (!(a[0] <= a[1])) throw ConfigError(join_path(path, key) + ": need lo <= hi");
  return Vec2(a[0], a[1]);
}

Vec6 get_vec6(const Json& obj, const std::string& key, const std::string& path, Vec6 fallback) {
  std::vector<double> def(fallback.data(), fallback.data() + 6);
  auto a = get_number_array(obj, key, path, 6, def);
  return Eigen::Map<const Vec6>(a.data());
}

ControllerConfig controller_from_json(const Json& j) {
  ControllerConfig c;
  require_object(j, "solver");
  reject_unknown_keys(j, "solver",
                      {"mode", "u_diag", "v_diag", "com_kp", "com_kd", "swing_kp", "swing_kd"});
  const std::string mode = get_string(j, "mode", "solver", "closed_form");
  if (mode == "closed_form") {
    c.mode = GrfSolverMode::kClosedForm;
  } else if (mode == "qp") {
    c.mode = GrfSolverMode::kQp;
  } else {
    throw ConfigError("solver.mode: expected 'closed_form' or 'qp'");
  }
  if (j.contains("u_diag")) {
    c.weights.u = Mat6(get_vec6(j, "u_diag", "solver", Vec6::Ones()).asDiagonal());
  }
  if (j.contains("v_diag")) {
    const Json& v = j.at("v_diag");
    if (v.is_number()) {
      c.weights.v = v.get<double>() * Mat12::Identity();
    } else {
      auto a = get_number_array(j, "v_diag", "solver", 12, {});
      c.weights.v = Eigen::Map<const Eigen::Matrix<double, 12, 1>>(a.data()).asDiagonal();
    }
  }
  c.com_gains.kp = get_vec6(j, "com_kp", "solver", c.com_gains.kp);
  c.com_gains.kd = get_vec6(j, "com_kd", "solver", c.com_gains.kd);
  c.swing.kp = get_number(j, "swing_kp", "solver", c.swing.kp);
  c.swing.kd = get_number(j, "swing_kd", "solver", c.swing.kd);
  c.weights.validate();
  return c;
}

Json controller_to_json(const ControllerConfig& c) {
  Json j;
  j["mode"] = c.mode == GrfSolverMode::kQp ? "qp" : "closed_form";
  j["u_diag"] = {c.weights.u(0, 0), c.weights.u(1, 1), c.weights.u(2, 2),
                 c.weights.u(3, 3), c.weights.u(4, 4), c.weights.u(5, 5)};
  Json v = Json::array();
  for (int i = 0; i < 12; ++i) v.push_back(c.weights.v(i, i));
  j["v_diag"] = v;
  j["com_kp"] = {c.com_gains.kp[0], c.com_gains.kp[1], c.com_gains.kp[2],
                 c.com_gains.kp[3], c.com_gains.kp[4], c.com_gains.kp[5]};
  j["com_kd"] = {c.com_gains.kd[0], c.com_gains.kd[1], c.com_gains.kd[2],
                 c.com_gains.kd[3], c.com_gains.kd[4], c.com_gains.kd[5]};
  j["swing_kp"] = c.swing.kp;
  j["swing_kd"] = c.swing.kd;
  return j;
}

ActionBounds action_bounds_from_json(const Json& j, const std::string& path) {
  ActionBounds b;
  require_object(j, path);
  reject_unknown_keys(j, path, {"v_x", "v_z", "omega_y", "residual_xy", "residual_z"});
  b.v_x = get_range(j, "v_x", path, b.v_x);
  b.v_z = get_range(j, "v_z", path, b.v_z);
  b.omega_y = get_range(j, "omega_y", path, b.omega_y);
  b.residual_xy = get_range(j, "residual_xy", path, b.residual_xy);
  b.residual_z = get_range(j, "residual_z", path, b.residual_z);
  return b;
}

Json action_bounds_to_json(const ActionBounds& b) {
  return Json{{"v_x", {b.v_x.x(), b.v_x.y()}},
              {"v_z", {b.v_z.x(), b.v_z.y()}},
              {"omega_y", {b.omega_y.x(), b.omega_y.y()}},
              {"residual_xy", {b.residual_xy.x(), b.residual_xy.y()}},
              {"residual_z", {b.residual_z.x(), b.residual_z.y()}}};
}

// Recorded-only training hyperparameters; nothing here is consumed at runtime.
void check_training_schema(const Json& j) {
  require_object(j, "training");
  reject_unknown_keys(j, "training",
                      {"algorithm", "learning_rate", "adaptive_lr", "steps_per_update",
                       "batch_size", "num_epochs", "discount", "gae_lambda", "clip_range"});
}

}  // namespace

HeuristicParams HeuristicParams::from_json(const Json& j, const std::string& path) {
  HeuristicParams p;
  require_object(j, path);
  reject_unknown_keys(j, path, {"f_step", "v_z_peak", "v_x_gain", "pitch_gain", "clearance"});
  p.f_step = get_number(j, "f_step", path, p.f_step);
  p.v_z_peak = get_number(j, "v_z_peak", path, p.v_z_peak);
  p.v_x_gain = get_number(j, "v_x_gain", path, p.v_x_gain);
  p.pitch_gain = get_number(j, "pitch_gain", path, p.pitch_gain);
  p.clearance = get_number(j, "clearance", path, p.clearance);
  return p;
}

Json HeuristicParams::to_json() const {
  return Json{{"f_step", f_step},
              {"v_z_peak", v_z_peak},
              {"v_x_gain", v_x_gain},
              {"pitch_gain", pitch_gain},
              {"clearance", clearance}};
}

void EnvConfig::validate() const {
  reward_weights.validate();
  if (!(goal_range.x() > 0.0) || !(goal_range.y() >= goal_range.x())) {
    throw ConfigError("env.goal_range: need 0 < lo <= hi");
  }
  if (!(height_termination > 0.0)) throw ConfigError("env.height_termination: must be positive");
  if (upright_termination < -1.0 || upright_termination > 1.0) {
    throw ConfigError("env.upright_termination: must be in [-1, 1]");
  }
  if (num_cycles < 1) throw ConfigError("env.num_cycles: must be >= 1");
}

EnvConfig EnvConfig::from_json(const Json& j) {
  EnvConfig c;
  require_object(j, "env");
  reject_unknown_keys(j, "env",
                      {"reward_weights", "action_bounds", "goal_range", "height_termination",
                       "upright_termination", "num_cycles", "alive_bonus", "observe_raw_phase",
                       "exclude_absolute_pose", "heuristic", "clearance_clip",
                       "knee_angle_tolerance", "knee_foot_height"});
  if (j.contains("reward_weights")) {
    c.reward_weights = RewardWeights::from_json(j.at("reward_weights"), "env.reward_weights");
  }
  if (j.contains("action_bounds")) {
    c.action_bounds = action_bounds_from_json(j.at("action_bounds"), "env.action_bounds");
  }
  c.goal_range = get_range(j, "goal_range", "env", c.goal_range);
  c.height_termination = get_number(j, "height_termination", "env", c.height_termination);
  c.upright_termination = get_number(j, "upright_termination", "env", c.upright_termination);
  c.num_cycles = get_int(j, "num_cycles", "env", c.num_cycles);
  c.reward_params.alive_bonus = get_number(j, "alive_bonus", "env", c.reward_params.alive_bonus);
  c.observe_raw_phase = get_bool(j, "observe_raw_phase", "env", c.observe_raw_phase);
  c.exclude_absolute_pose = get_bool(j, "exclude_absolute_pose", "env", c.exclude_absolute_pose);
  if (j.contains("heuristic")) {
    c.heuristic = HeuristicParams::from_json(j.at("heuristic"), "env.heuristic");
  }
  c.reward_params.clearance_clip = get_number(j, "clearance_clip", "env",
                                              c.reward_params.clearance_clip);
  c.reward_params.knee_angle_tolerance =
      get_number(j, "knee_angle_tolerance", "env", c.reward_params.knee_angle_tolerance);
  c.reward_params.knee_foot_height =
      get_number(j, "knee_foot_height", "env", c.reward_params.knee_foot_height);
  c.validate();
  return c;
}

Json EnvConfig::to_json() const {
  Json j;
  j["reward_weights"] = reward_weights.to_json();
  j["action_bounds"] = action_bounds_to_json(action_bounds);
  j["goal_range"] = {goal_range.x(), goal_range.y()};
  j["height_termination"] = height_termination;
  j["upright_termination"] = upright_termination;
  j["num_cycles"] = num_cycles;
  j["alive_bonus"] = reward_params.alive_bonus;
  j["observe_raw_phase"] = observe_raw_phase;
  j["exclude_absolute_pose"] = exclude_absolute_pose;
  j["heuristic"] = heuristic.to_json();
  j["clearance_clip"] = reward_params.clearance_clip;
  j["knee_angle_tolerance"] = reward_params.knee_angle_tolerance;
  j["knee_foot_height"] = reward_params.knee_foot_height;
  return j;
}

AblationFlags AblationFlags::from_json(const Json& j) {
  AblationFlags f;
  require_object(j, "ablation");
  reject_unknown_keys(j, "ablation", {"no_gait", "no_swing", "no_swing_ref", "qp_mode"});
  f.no_gait = get_bool(j, "no_gait", "ablation", f.no_gait);
  f.no_swing = get_bool(j, "no_swing", "ablation", f.no_swing);
  f.no_swing_ref = get_bool(j, "no_swing_ref", "ablation", f.no_swing_ref);
  f.qp_mode = get_bool(j, "qp_mode", "ablation", f.qp_mode);
  return f;
}

Json AblationFlags::to_json() const {
  return Json{{"no_gait", no_gait},
              {"no_swing", no_swing},
              {"no_swing_ref", no_swing_ref},
              {"qp_mode", qp_mode}};
}

void RunConfig::finalize() {
  robot.validate();
  gait.validate();
  controller.weights.validate();
  sim.validate();
  env.validate();
  env.action_bounds.f_step = Vec2(gait.frequency_bounds.first, gait.frequency_bounds.second);
  env.reward_params.knee_fold_limit = robot.joint_limits.lower[2];
  if (ablation.qp_mode) controller.mode = GrfSolverMode::kQp;
  if (ablation.no_swing) controller.swing.no_residual = true;
  if (ablation.no_swing_ref) controller.swing.no_reference = true;
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.finalize();
  return c;
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig c;
  require_object(j, "");
  reject_unknown_keys(j, "", {"robot", "gait", "solver", "sim", "env", "ablation", "seed",
                              "training"});
  if (j.contains("robot")) c.robot = RobotModel::from_json(j.at("robot"));
  if (j.contains("gait")) c.gait = GaitConfig::from_json(j.at("gait"));
  if (j.contains("solver")) c.controller = controller_from_json(j.at("solver"));
  if (j.contains("sim")) c.sim = SimConfig::from_json(j.at("sim"));
  if (j.contains("env")) c.env = EnvConfig::from_json(j.at("env"));
  if (j.contains("ablation")) c.ablation = AblationFlags::from_json(j.at("ablation"));
  if (j.contains("seed")) {
    const Json& s = j.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0) {
      throw ConfigError("seed: expected a non-negative integer");
    }
    c.seed = s.get<uint64_t>();
  }
  if (j.contains("training")) {
    check_training_schema(j.at("training"));
    c.training = j.at("training");
  }
  c.finalize();
  return c;
}

RunConfig RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not readable: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return from_json(j);
}

Json RunConfig::to_json() const {
  Json j;
  j["robot"] = robot.to_json();
  j["gait"] = gait.to_json();
  j["solver"] = controller_to_json(controller);
  j["sim"] = sim.to_json();
  j["env"] = env.to_json();
  j["ablation"] = ablation.to_json();
  j["seed"] = seed;
  if (!training.is_null()) j["training"] = training;
  return j;
}

uint64_t RunConfig::hash() const { return config_hash(to_json()); }

std::string RunConfig::hash_string() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

RunConfig apply_ablation(const RunConfig& config, const std::string& variant) {
  RunConfig out = config;
  if (variant == "no_gait") {
    out.ablation.no_gait = true;
  } else if (variant == "no_swing") {
    out.ablation.no_swing = true;
  } else if (variant == "no_swing_ref") {
    out.ablation.no_swing_ref = true;
  } else if (variant == "qp") {
    out.ablation.qp_mode = true;
  } else {
    throw ConfigError("ablation variant: unknown '" + variant +
                      "' (expected no_gait, no_swing, no_swing_ref, qp)");
  }
  out.finalize();
  return out;
}

}  // namespace cajun
