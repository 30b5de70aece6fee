#pragma once

#include <array>

#include "cajun/robot_model.hpp"
#include "cajun/state.hpp"
#include "cajun/types.hpp"

// Centroidal rigid-body dynamics with massless legs, written in the base
// frame with the acceleration vector ordered [angular; linear]:
//
//   qdd = A f + g,   A = [ I_base^-1 [r_i]x ... ;  (1/m) I_3 ... ]
//
// where f stacks the stance-foot reaction forces (base frame), r_i is the
// i-th stance foot position relative to the base origin expressed in the
// base frame, and g = [0; R^T g_world] rotates gravity through the full
// rotation matrix (no small-angle approximation).

namespace cajun {

struct CentroidalDynamics {
  MatX A;                                    // 6 x 3k, k = stance leg count
  Vec6 gravity = Vec6::Zero();               // [0; R^T g_world]
  std::array<int, kNumLegs> column_of_leg{-1, -1, -1, -1};  // leg -> stance slot, -1 if swing
  int num_stance = 0;

  // qdd = A f + g; with no stance legs the motion is ballistic.
  Vec6 apply(const VecX& f) const {
    if (num_stance == 0) return gravity;
    return A * f + gravity;
  }
};

CentroidalDynamics build_centroidal_dynamics(const RobotModel& model, const CentroidalState& state,
                                             const std::array<bool, kNumLegs>& stance);

}  // namespace cajun
