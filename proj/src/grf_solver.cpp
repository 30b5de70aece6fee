#include "cajun/grf_solver.hpp"

#include <algorithm>
#include <cmath>

#include "cajun/errors.hpp"

namespace cajun {
namespace {

// V restricted to the force components of the active stance slots.
MatX slice_regularizer(const Mat12& v, const CentroidalDynamics& dyn) {
  const int k = dyn.num_stance;
  MatX out(3 * k, 3 * k);
  std::array<int, 12> index{};
  int n = 0;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    if (dyn.column_of_leg[leg] < 0) continue;
    for (int axis = 0; axis < 3; ++axis) index[n++] = 3 * leg + axis;
  }
  for (int r = 0; r < 3 * k; ++r) {
    for (int c = 0; c < 3 * k; ++c) out(r, c) = v(index[r], index[c]);
  }
  return out;
}

}  // namespace

SolverWeights::SolverWeights() {
  Vec6 u_diag;
  // Track pitch rate and vertical acceleration tightly; order [angular; linear].
  u_diag << 1.0, 10.0, 1.0, 1.0, 1.0, 10.0;
  u = u_diag.asDiagonal();
  v = 1e-4 * Mat12::Identity();
}

void SolverWeights::validate() const {
  if ((u - u.transpose()).norm() > 1e-9) throw ConfigError("solver.u: must be symmetric");
  if ((v - v.transpose()).norm() > 1e-9) throw ConfigError("solver.v: must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat6> eu(u);
  if (eu.eigenvalues().minCoeff() <= 0.0) throw ConfigError("solver.u: must be positive definite");
  Eigen::SelfAdjointEigenSolver<Mat12> ev(v);
  if (ev.eigenvalues().minCoeff() <= 0.0) throw ConfigError("solver.v: must be positive definite");
}

VecX solve_grf_closed_form(const CentroidalDynamics& dyn, const Vec6& qdd_ref,
                           const SolverWeights& weights) {
  if (dyn.num_stance == 0) return VecX();
  const MatX at_u = dyn.A.transpose() * weights.u;
  const MatX m = at_u * dyn.A + slice_regularizer(weights.v, dyn);
  return m.ldlt().solve(at_u * (qdd_ref - dyn.gravity));
}

ConeClipResult clip_to_friction_cone(const VecX& f_hat, double mu, double f_min, double f_max) {
  const int k = static_cast<int>(f_hat.size()) / 3;
  ConeClipResult out;
  out.f = f_hat;
  out.normal_clipped.assign(k, false);
  out.tangential_scaled.assign(k, false);
  for (int i = 0; i < k; ++i) {
    double& fx = out.f[3 * i];
    double& fy = out.f[3 * i + 1];
    double& fz = out.f[3 * i + 2];
    const double fz_clipped = std::clamp(fz, f_min, f_max);
    out.normal_clipped[i] = fz_clipped != fz;
    fz = fz_clipped;
    const double tangential = std::hypot(fx, fy);
    if (tangential < 1e-9) continue;
    const double scale = std::min(1.0, mu * fz / tangential);
    if (scale < 1.0) {
      fx *= scale;
      fy *= scale;
      out.tangential_scaled[i] = true;
    }
  }
  return out;
}

QpGrfResult solve_grf_qp(const CentroidalDynamics& dyn, const Vec6& qdd_ref,
                         const SolverWeights& weights, double mu, double f_min, double f_max) {
  QpGrfResult out;
  const int k = dyn.num_stance;
  if (k == 0) {
    out.f = VecX();
    return out;
  }
  const int n = 3 * k;
  const MatX at_u = dyn.A.transpose() * weights.u;
  const MatX hessian = 2.0 * (at_u * dyn.A + slice_regularizer(weights.v, dyn));
  const VecX gradient = 2.0 * (at_u * (dyn.gravity - qdd_ref));

  // Six rows per stance leg: normal box, then the four pyramid faces.
  const int m = 6 * k;
  MatX constraints = MatX::Zero(m, n);
  VecX upper(m);
  for (int i = 0; i < k; ++i) {
    const int x = 3 * i, y = 3 * i + 1, z = 3 * i + 2;
    int row = 6 * i;
    constraints(row, z) = -1.0;
    upper(row++) = -f_min;
    constraints(row, z) = 1.0;
    upper(row++) = f_max;
    constraints(row, x) = 1.0;
    constraints(row, z) = -mu;
    upper(row++) = 0.0;
    constraints(row, x) = -1.0;
    constraints(row, z) = -mu;
    upper(row++) = 0.0;
    constraints(row, y) = 1.0;
    constraints(row, z) = -mu;
    upper(row++) = 0.0;
    constraints(row, y) = -1.0;
    constraints(row, z) = -mu;
    upper(row++) = 0.0;
  }

  VecX x0 = VecX::Zero(n);
  for (int i = 0; i < k; ++i) x0[3 * i + 2] = 0.5 * (f_min + f_max);

  const QpSolution sol = solve_qp_active_set(hessian, gradient, constraints, upper, x0);
  out.f = sol.x;
  out.converged = sol.status == QpStatus::kOptimal;
  out.iterations = sol.iterations;
  out.kkt_residual = qp_kkt_residual(hessian, gradient, constraints, upper, sol);
  out.normal_active.assign(k, false);
  out.tangential_active.assign(k, false);
  constexpr double kActiveTol = 1e-7;
  for (int i = 0; i < k; ++i) {
    for (int row = 6 * i; row < 6 * i + 6; ++row) {
      if (sol.multipliers[row] > kActiveTol) {
        if (row < 6 * i + 2) {
          out.normal_active[i] = true;
        } else {
          out.tangential_active[i] = true;
        }
        out.any_constraint_active = true;
      }
    }
  }
  return out;
}

}  // namespace cajun
