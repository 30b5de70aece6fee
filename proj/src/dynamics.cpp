#include "cajun/dynamics.hpp"

#include "cajun/rotation.hpp"

namespace cajun {

CentroidalDynamics build_centroidal_dynamics(const RobotModel& model, const CentroidalState& state,
                                             const std::array<bool, kNumLegs>& stance) {
  CentroidalDynamics dyn;
  const Mat3 r_wb = rotation_world_from_base(state.orientation);
  dyn.gravity.tail<3>() = r_wb.transpose() * Vec3(0.0, 0.0, -kGravity);

  int k = 0;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    if (stance[leg]) dyn.column_of_leg[leg] = k++;
  }
  dyn.num_stance = k;
  if (k == 0) return dyn;

  const Mat3 inertia_inv = model.base_inertia.inverse();
  const Mat3 mass_block = Mat3::Identity() / model.total_mass();
  dyn.A.resize(6, 3 * k);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const int slot = dyn.column_of_leg[leg];
    if (slot < 0) continue;
    const Vec3 r = r_wb.transpose() * (state.foot_positions_world[leg] - state.position);
    dyn.A.block<3, 3>(0, 3 * slot) = inertia_inv * skew(r);
    dyn.A.block<3, 3>(3, 3 * slot) = mass_block;
  }
  return dyn;
}

}  // namespace cajun
