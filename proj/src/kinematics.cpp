#include "cajun/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "cajun/rotation.hpp"

namespace cajun {
namespace {

// Sagittal (x,z) part of the chain, before the abduction roll is applied.
void planar_foot(const LinkLengths& links, double hip, double knee, double* x, double* z) {
  const double u = hip;
  const double v = hip + knee;
  *x = -links.thigh * std::sin(u) - links.calf * std::sin(v);
  *z = -links.thigh * std::cos(u) - links.calf * std::cos(v);
}

constexpr double kReachSlack = 1e-9;

}  // namespace

Vec3 forward_kinematics(const RobotModel& model, int leg, const Vec3& q) {
  const double d = model.side_sign(leg) * model.link_lengths.hip_abduction;
  double x, z;
  planar_foot(model.link_lengths, q[1], q[2], &x, &z);
  return model.hip_offsets[leg] + rot_x(q[0]) * Vec3(x, d, z);
}

Mat3 foot_jacobian(const RobotModel& model, int leg, const Vec3& q) {
  const double lt = model.link_lengths.thigh;
  const double lc = model.link_lengths.calf;
  const double d = model.side_sign(leg) * model.link_lengths.hip_abduction;
  const double u = q[1];
  const double v = q[1] + q[2];
  double x, z;
  planar_foot(model.link_lengths, q[1], q[2], &x, &z);
  const Vec3 w(x, d, z);
  const Mat3 rx = rot_x(q[0]);
  Mat3 jac;
  jac.col(0) = rx * Vec3(0.0, -w.z(), w.y());  // d(Rx(a)w)/da = Rx [e_x]x w
  jac.col(1) = rx * Vec3(-lt * std::cos(u) - lc * std::cos(v), 0.0,
                         lt * std::sin(u) + lc * std::sin(v));
  jac.col(2) = rx * Vec3(-lc * std::cos(v), 0.0, lc * std::sin(v));
  return jac;
}

std::optional<Vec3> inverse_kinematics(const RobotModel& model, int leg, const Vec3& target_base) {
  const Vec3 p = target_base - model.hip_offsets[leg];
  const double d = model.side_sign(leg) * model.link_lengths.hip_abduction;
  const double lt = model.link_lengths.thigh;
  const double lc = model.link_lengths.calf;

  const double yz_sq = p.y() * p.y() + p.z() * p.z();
  if (yz_sq + kReachSlack < d * d) return std::nullopt;
  const double yz = std::sqrt(yz_sq);

  double abduction = 0.0;
  if (yz < 1e-12) {
    if (std::abs(d) > 1e-12) return std::nullopt;
  } else {
    // Choose the branch that keeps the foot below the hip within the leg plane.
    const double c = std::clamp(d / yz, -1.0, 1.0);
    abduction = wrap_angle(std::atan2(p.z(), p.y()) + std::acos(c));
  }

  const double xp = p.x();
  const double zp = -std::sqrt(std::max(yz_sq - d * d, 0.0));
  const double r_sq = xp * xp + zp * zp;
  const double r = std::sqrt(r_sq);
  if (r > lt + lc + kReachSlack) return std::nullopt;
  if (r + kReachSlack < std::abs(lt - lc)) return std::nullopt;

  const double cos_knee = std::clamp((r_sq - lt * lt - lc * lc) / (2.0 * lt * lc), -1.0, 1.0);
  const double knee = model.knee_backward ? -std::acos(cos_knee) : std::acos(cos_knee);
  const double hip = wrap_angle(std::atan2(-xp, -zp) -
                                std::atan2(lc * std::sin(knee), lt + lc * std::cos(knee)));
  return Vec3(abduction, hip, knee);
}

Vec3 clamp_to_workspace(const RobotModel& model, int leg, const Vec3& target_base, bool* clamped) {
  const double d = model.side_sign(leg) * model.link_lengths.hip_abduction;
  const double lt = model.link_lengths.thigh;
  const double lc = model.link_lengths.calf;
  // Stay a hair inside full extension and clear of full fold.
  const double r_max = (lt + lc) * (1.0 - 1e-4);
  const double r_min = std::max(std::abs(lt - lc) + 1e-6, 0.02);

  bool touched = false;
  Vec3 p = target_base - model.hip_offsets[leg];

  double yz = std::hypot(p.y(), p.z());
  const double yz_min = std::abs(d) * (1.0 + 1e-6) + 1e-9;
  if (yz < yz_min) {
    if (yz < 1e-12) {
      p.y() = d;
      p.z() = -yz_min;
    } else {
      const double s = yz_min / yz;
      p.y() *= s;
      p.z() *= s;
    }
    yz = std::hypot(p.y(), p.z());
    touched = true;
  }

  double abduction = 0.0;
  if (yz >= 1e-12) {
    const double c = std::clamp(d / yz, -1.0, 1.0);
    abduction = wrap_angle(std::atan2(p.z(), p.y()) + std::acos(c));
  }
  double xp = p.x();
  double zp = -std::sqrt(std::max(yz * yz - d * d, 0.0));
  double r = std::hypot(xp, zp);
  if (r > r_max) {
    const double s = r_max / r;
    xp *= s;
    zp *= s;
    touched = true;
  } else if (r < r_min) {
    if (r < 1e-12) {
      xp = 0.0;
      zp = -r_min;
    } else {
      const double s = r_min / r;
      xp *= s;
      zp *= s;
    }
    touched = true;
  }

  if (clamped != nullptr) *clamped = touched;
  if (!touched) return target_base;
  return model.hip_offsets[leg] + rot_x(abduction) * Vec3(xp, d, zp);
}

TorqueResult torque_from_grf(const Mat3& jacobian, const Vec3& grf, double torque_limit) {
  TorqueResult out;
  out.torque = jacobian.transpose() * grf;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(out.torque[i]) > torque_limit) {
      out.torque[i] = std::clamp(out.torque[i], -torque_limit, torque_limit);
      out.saturated = true;
    }
  }
  return out;
}

TorqueResult torque_from_grf(const RobotModel& model, int leg, const Vec3& q, const Vec3& grf) {
  return torque_from_grf(foot_jacobian(model, leg, q), grf, model.torque_limit);
}

}  // namespace cajun
