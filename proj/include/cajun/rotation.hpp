#pragma once

#include <cmath>

#include "cajun/types.hpp"

// Z-Y-X Euler angle conventions shared by the whole stack.
// orientation = (roll, pitch, yaw); world_R_base = Rz(yaw) * Ry(pitch) * Rx(roll).
// Angular velocity is kept in the base (body) frame.

namespace cajun {

inline Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

inline Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return r;
}

inline Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, 0, s,
       0, 1, 0,
      -s, 0, c;
  return r;
}

inline Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return r;
}

inline Mat3 rotation_world_from_base(const Vec3& rpy) {
  return rot_z(rpy.z()) * rot_y(rpy.y()) * rot_x(rpy.x());
}

// Body rates from Euler-angle rates: omega_body = E(rpy) * d(rpy)/dt.
inline Mat3 euler_rate_to_body_rate(const Vec3& rpy) {
  const double cr = std::cos(rpy.x()), sr = std::sin(rpy.x());
  const double cp = std::cos(rpy.y()), sp = std::sin(rpy.y());
  Mat3 e;
  e << 1, 0, -sp,
       0, cr, cp * sr,
       0, -sr, cp * cr;
  return e;
}

// Inverse map; singular at |pitch| = pi/2, which the simulator guards against.
inline Mat3 body_rate_to_euler_rate(const Vec3& rpy) {
  const double cr = std::cos(rpy.x()), sr = std::sin(rpy.x());
  const double cp = std::cos(rpy.y()), tp = std::tan(rpy.y());
  Mat3 e;
  e << 1, sr * tp, cr * tp,
       0, cr, -sr,
       0, sr / cp, cr / cp;
  return e;
}

inline double wrap_angle(double a) {
  // (-pi, pi]
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

}  // namespace cajun
