#pragma once

#include "cajun/types.hpp"

// Dense primal active-set solver for small strictly convex QPs:
//
//   min  1/2 x^T H x + c^T x   s.t.  G x <= h
//
// H must be positive definite (the force regularizer guarantees this for the
// contact-force problems, <= 12 variables and <= 24 constraints). Blocking
// constraints resolve ties by lowest row index, so the iteration sequence is
// deterministic. Stationary points are certified over the full active set
// with a nonnegative least-squares fit of the gradient; degenerate vertices
// (dependent active rows, e.g. a friction cone pinched to its tip) therefore
// either terminate with clean multipliers or yield a strict descent escape
// direction instead of cycling.

namespace cajun {

enum class QpStatus { kOptimal, kIterationLimit };

struct QpSolution {
  VecX x;
  VecX multipliers;  // one per constraint row, >= 0, nonzero only on the active set
  QpStatus status = QpStatus::kOptimal;
  int iterations = 0;
};

QpSolution solve_qp_active_set(const MatX& hessian, const VecX& gradient,
                               const MatX& constraints, const VecX& upper,
                               const VecX& x_feasible, int max_iterations = 200);

// Max violation of stationarity, primal feasibility and complementary
// slackness; used to assert solution quality.
double qp_kkt_residual(const MatX& hessian, const VecX& gradient, const MatX& constraints,
                       const VecX& upper, const QpSolution& solution);

}  // namespace cajun
