#pragma once

#include <array>
#include <cstdint>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Dense>

namespace cajun {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using MatX = Eigen::MatrixXd;

inline constexpr int kNumLegs = 4;
inline constexpr double kGravity = 9.81;  // m/s^2
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Leg indexing used everywhere: 0 = front-right, 1 = front-left,
// 2 = rear-right, 3 = rear-left.
enum LegIndex : int {
  kFrontRight = 0,
  kFrontLeft = 1,
  kRearRight = 2,
  kRearLeft = 3,
};

inline bool is_front_leg(int leg) { return leg == kFrontRight || leg == kFrontLeft; }
inline bool is_right_leg(int leg) { return leg == kFrontRight || leg == kRearRight; }

}  // namespace cajun
