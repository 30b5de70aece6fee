#include "cajun/robot_model.hpp"

#include <cmath>

#include "cajun/errors.hpp"
#include "cajun/json_util.hpp"

namespace cajun {

void RobotModel::validate() const {
  if (!(mass > 0.0)) throw ConfigError("robot.mass: must be positive");
  if (payload_mass < 0.0) throw ConfigError("robot.payload_mass: must be non-negative");
  if ((base_inertia - base_inertia.transpose()).norm() > 1e-9) {
    throw ConfigError("robot.base_inertia: must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(base_inertia);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw ConfigError("robot.base_inertia: must be positive definite");
  }
  if (!(link_lengths.thigh > 0.0)) throw ConfigError("robot.link_lengths.thigh: must be positive");
  if (!(link_lengths.calf > 0.0)) throw ConfigError("robot.link_lengths.calf: must be positive");
  if (link_lengths.hip_abduction < 0.0) {
    throw ConfigError("robot.link_lengths.hip_abduction: must be non-negative");
  }
  if (!(friction_mu > 0.0)) throw ConfigError("robot.friction_mu: must be positive");
  if (f_min < 0.0) throw ConfigError("robot.f_min: must be non-negative");
  if (!(f_max > f_min)) throw ConfigError("robot.f_max: must exceed f_min");
  if (!(torque_limit > 0.0)) throw ConfigError("robot.torque_limit: must be positive");
  for (int i = 0; i < 3; ++i) {
    if (!(joint_limits.lower[i] < joint_limits.upper[i])) {
      throw ConfigError("robot.joint_limits: lower must be below upper");
    }
  }
  if (symmetric) {
    // Front/rear mirrored in x, left/right mirrored in y.
    auto mirror_ok = [](const Vec3& a, const Vec3& b, double sx, double sy) {
      return (a - Vec3(sx * b.x(), sy * b.y(), b.z())).norm() < 1e-9;
    };
    if (!mirror_ok(hip_offsets[kFrontRight], hip_offsets[kFrontLeft], 1, -1) ||
        !mirror_ok(hip_offsets[kRearRight], hip_offsets[kRearLeft], 1, -1) ||
        !mirror_ok(hip_offsets[kFrontRight], hip_offsets[kRearRight], -1, 1)) {
      throw ConfigError("robot.hip_offsets: symmetry violated (set robot.symmetric=false to allow)");
    }
  }
}

RobotModel RobotModel::from_json(const Json& j) {
  RobotModel m;
  require_object(j, "robot");
  reject_unknown_keys(j, "robot",
                      {"mass", "payload_mass", "base_inertia", "hip_offsets", "link_lengths",
                       "joint_limits", "nominal_joint_angles", "friction_mu", "f_min", "f_max",
                       "torque_limit", "knee_backward", "symmetric"});
  m.mass = get_number(j, "mass", "robot", m.mass);
  m.payload_mass = get_number(j, "payload_mass", "robot", m.payload_mass);
  if (j.contains("base_inertia")) {
    const Json& bi = j.at("base_inertia");
    if (bi.is_array() && bi.size() == 3) {
      auto d = get_number_array(j, "base_inertia", "robot", 3, {});
      m.base_inertia = Vec3(d[0], d[1], d[2]).asDiagonal();
    } else if (bi.is_array() && bi.size() == 9) {
      auto d = get_number_array(j, "base_inertia", "robot", 9, {});
      m.base_inertia = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(d.data());
    } else {
      throw ConfigError("robot.base_inertia: expected 3 (diagonal) or 9 (row-major) numbers");
    }
  }
  if (j.contains("hip_offsets")) {
    const Json& ho = j.at("hip_offsets");
    if (!ho.is_array() || ho.size() != kNumLegs) {
      throw ConfigError("robot.hip_offsets: expected 4 [x,y,z] entries (FR, FL, RR, RL)");
    }
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const Json& e = ho.at(leg);
      if (!e.is_array() || e.size() != 3 || !e.at(0).is_number()) {
        throw ConfigError("robot.hip_offsets[" + std::to_string(leg) + "]: expected [x,y,z]");
      }
      m.hip_offsets[leg] = Vec3(e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>());
    }
  }
  if (j.contains("link_lengths")) {
    const Json& ll = j.at("link_lengths");
    require_object(ll, "robot.link_lengths");
    reject_unknown_keys(ll, "robot.link_lengths", {"hip_abduction", "thigh", "calf"});
    m.link_lengths.hip_abduction =
        get_number(ll, "hip_abduction", "robot.link_lengths", m.link_lengths.hip_abduction);
    m.link_lengths.thigh = get_number(ll, "thigh", "robot.link_lengths", m.link_lengths.thigh);
    m.link_lengths.calf = get_number(ll, "calf", "robot.link_lengths", m.link_lengths.calf);
  }
  if (j.contains("joint_limits")) {
    const Json& jl = j.at("joint_limits");
    require_object(jl, "robot.joint_limits");
    reject_unknown_keys(jl, "robot.joint_limits", {"lower", "upper"});
    m.joint_limits.lower = get_vec3(jl, "lower", "robot.joint_limits", m.joint_limits.lower);
    m.joint_limits.upper = get_vec3(jl, "upper", "robot.joint_limits", m.joint_limits.upper);
  }
  m.nominal_joint_angles = get_vec3(j, "nominal_joint_angles", "robot", m.nominal_joint_angles);
  m.friction_mu = get_number(j, "friction_mu", "robot", m.friction_mu);
  m.f_min = get_number(j, "f_min", "robot", m.f_min);
  m.f_max = get_number(j, "f_max", "robot", m.f_max);
  m.torque_limit = get_number(j, "torque_limit", "robot", m.torque_limit);
  m.knee_backward = get_bool(j, "knee_backward", "robot", m.knee_backward);
  m.symmetric = get_bool(j, "symmetric", "robot", m.symmetric);
  m.validate();
  return m;
}

Json RobotModel::to_json() const {
  Json j;
  j["mass"] = mass;
  j["payload_mass"] = payload_mass;
  j["base_inertia"] = {base_inertia(0, 0), base_inertia(0, 1), base_inertia(0, 2),
                       base_inertia(1, 0), base_inertia(1, 1), base_inertia(1, 2),
                       base_inertia(2, 0), base_inertia(2, 1), base_inertia(2, 2)};
  Json ho = Json::array();
  for (const Vec3& h : hip_offsets) ho.push_back({h.x(), h.y(), h.z()});
  j["hip_offsets"] = ho;
  j["link_lengths"] = {{"hip_abduction", link_lengths.hip_abduction},
                       {"thigh", link_lengths.thigh},
                       {"calf", link_lengths.calf}};
  j["joint_limits"] = {
      {"lower", {joint_limits.lower.x(), joint_limits.lower.y(), joint_limits.lower.z()}},
      {"upper", {joint_limits.upper.x(), joint_limits.upper.y(), joint_limits.upper.z()}}};
  j["nominal_joint_angles"] = {nominal_joint_angles.x(), nominal_joint_angles.y(),
                               nominal_joint_angles.z()};
  j["friction_mu"] = friction_mu;
  j["f_min"] = f_min;
  j["f_max"] = f_max;
  j["torque_limit"] = torque_limit;
  j["knee_backward"] = knee_backward;
  j["symmetric"] = symmetric;
  return j;
}

RobotModel apply_payload(const RobotModel& model, double payload_kg) {
  if (payload_kg < 0.0) throw ConfigError("payload: must be non-negative");
  RobotModel out = model;
  out.payload_mass = model.payload_mass + payload_kg;
  return out;
}

}  // namespace cajun
