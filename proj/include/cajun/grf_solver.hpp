#pragma once

#include <vector>

#include "cajun/active_set_qp.hpp"
#include "cajun/dynamics.hpp"
#include "cajun/types.hpp"

// Stance ground-reaction-force solvers. Both minimize
//
//   || A f + g - qdd_ref ||^2_U + || f ||^2_V
//
// over the stacked stance-foot forces f. The closed-form path solves the
// unconstrained ridge problem
//
//   f_hat = (A^T U A + V)^-1 A^T U (qdd_ref - g)
//
// and then projects each leg's force into the friction cone by clipping the
// normal component to [f_min, f_max] and scaling the tangential component to
// the (circular) cone boundary. The QP path enforces the bounds and a
// pyramidal cone |f_x| <= mu f_z, |f_y| <= mu f_z exactly via the in-repo
// active-set solver. The two deliberately use different cone shapes at the
// boundary (circle vs pyramid); on instances where no constraint is active
// they agree to solver precision.

namespace cajun {

struct SolverWeights {
  Mat6 u;    // 6x6 PD weight over [angular; linear] acceleration error
  Mat12 v;   // 12x12 PD force regularizer; sliced to the stance legs

  SolverWeights();
  void validate() const;  // throws ConfigError
};

// f_hat for the current stance set (size 3k, base frame).
VecX solve_grf_closed_form(const CentroidalDynamics& dyn, const Vec6& qdd_ref,
                           const SolverWeights& weights);

struct ConeClipResult {
  VecX f;
  std::vector<bool> normal_clipped;     // per stance slot
  std::vector<bool> tangential_scaled;  // per stance slot
};

// Per-leg projection described above. Idempotent; tangential components below
// 1e-9 N are returned unscaled.
ConeClipResult clip_to_friction_cone(const VecX& f_hat, double mu, double f_min, double f_max);

struct QpGrfResult {
  VecX f;
  std::vector<bool> normal_active;      // box constraint active per stance slot
  std::vector<bool> tangential_active;  // any cone face active per stance slot
  bool any_constraint_active = false;
  bool converged = true;
  int iterations = 0;
  double kkt_residual = 0.0;
};

QpGrfResult solve_grf_qp(const CentroidalDynamics& dyn, const Vec6& qdd_ref,
                         const SolverWeights& weights, double mu, double f_min, double f_max);

}  // namespace cajun
