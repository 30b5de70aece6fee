#include "cajun/active_set_qp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

namespace {
bool qp_trace_enabled() {
  static const bool enabled = std::getenv("CAJUN_QP_TRACE") != nullptr;
  return enabled;
}
}  // namespace

#define QP_TRACE(...) \
  do { if (qp_trace_enabled()) std::printf(__VA_ARGS__); } while (0)

namespace cajun {
namespace {

constexpr double kStepTolerance = 1e-10;        // ||p|| below this counts as a stationary point
constexpr double kActiveTolerance = 1e-9;       // slack below this counts as active
constexpr double kDirectionTolerance = 1e-13;   // G_j * p above this can block the step

// Equality-constrained step: min 1/2 p^T H p + g^T p s.t. G_W p = 0, via a
// null-space basis from a rank-revealing QR of G_W^T. Handles linearly
// dependent working sets.
VecX equality_step(const MatX& hessian, const VecX& grad, const MatX& constraints,
                   const std::vector<int>& working) {
  const int n = static_cast<int>(grad.size());
  if (working.empty()) {
    return hessian.ldlt().solve(-grad);
  }
  MatX gw_t(n, static_cast<int>(working.size()));
  for (size_t i = 0; i < working.size(); ++i) gw_t.col(i) = constraints.row(working[i]).transpose();
  Eigen::ColPivHouseholderQR<MatX> qr(gw_t);
  const int rank = static_cast<int>(qr.rank());
  if (rank >= n) return VecX::Zero(n);
  const MatX q = qr.householderQ();
  const MatX z = q.rightCols(n - rank);  // null-space basis of G_W
  const MatX hz = z.transpose() * hessian * z;
  const VecX rhs = -z.transpose() * grad;
  return z * hz.ldlt().solve(rhs);
}

// Lawson-Hanson nonnegative least squares: min ||M lambda - b|| s.t.
// lambda >= 0. The matrices here are tiny (<= 12 x 24), so the plain
// add-one/backtrack loop is plenty fast, and it terminates for any M.
VecX nnls(const MatX& m, const VecX& b, int max_passes = 200) {
  const int cols = static_cast<int>(m.cols());
  VecX lambda = VecX::Zero(cols);
  std::vector<char> passive(static_cast<size_t>(cols), 0);

  auto solve_passive = [&](const std::vector<int>& idx) {
    MatX mp(m.rows(), static_cast<int>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) mp.col(static_cast<int>(i)) = m.col(idx[i]);
    return mp.completeOrthogonalDecomposition().solve(b).eval();
  };

  for (int pass = 0; pass < max_passes; ++pass) {
    const VecX w = m.transpose() * (b - m * lambda);
    int best = -1;
    double best_w = 1e-11 * (1.0 + b.lpNorm<Eigen::Infinity>());
    for (int j = 0; j < cols; ++j) {
      if (!passive[static_cast<size_t>(j)] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) return lambda;
    passive[static_cast<size_t>(best)] = 1;

    for (;;) {
      std::vector<int> idx;
      for (int j = 0; j < cols; ++j) {
        if (passive[static_cast<size_t>(j)]) idx.push_back(j);
      }
      const VecX trial = solve_passive(idx);
      double alpha = 1.0;
      bool clipped = false;
      for (size_t i = 0; i < idx.size(); ++i) {
        const double t = trial[static_cast<int>(i)];
        if (t <= 0.0) {
          const double cur = lambda[idx[i]];
          const double a = cur / (cur - t);
          if (a < alpha) alpha = a;
          clipped = true;
        }
      }
      if (!clipped) {
        lambda.setZero();
        for (size_t i = 0; i < idx.size(); ++i) lambda[idx[i]] = trial[static_cast<int>(i)];
        break;
      }
      for (size_t i = 0; i < idx.size(); ++i) {
        const double t = trial[static_cast<int>(i)];
        lambda[idx[i]] += alpha * (t - lambda[idx[i]]);
        if (lambda[idx[i]] <= 1e-14) {
          lambda[idx[i]] = 0.0;
          passive[static_cast<size_t>(idx[i])] = 0;
        }
      }
    }
  }
  return lambda;
}

}  // namespace

QpSolution solve_qp_active_set(const MatX& hessian, const VecX& gradient, const MatX& constraints,
                               const VecX& upper, const VecX& x_feasible, int max_iterations) {
  const int m = static_cast<int>(upper.size());
  QpSolution sol;
  sol.x = x_feasible;
  sol.multipliers = VecX::Zero(m);

  std::vector<int> working;  // ascending constraint indices
  std::vector<char> in_working(m, 0);

  for (sol.iterations = 0; sol.iterations < max_iterations; ++sol.iterations) {
    const VecX grad = hessian * sol.x + gradient;
    VecX p = equality_step(hessian, grad, constraints, working);

    if (p.lpNorm<Eigen::Infinity>() <= kStepTolerance * (1.0 + sol.x.lpNorm<Eigen::Infinity>())) {
      // Stationary on the working set. Degenerate vertices (more active rows
      // than the working set can represent independently) make the plain
      // drop-one-multiplier rule cycle, so optimality is decided over the
      // full active set instead: -grad must lie in the cone of the active
      // rows. The NNLS residual either certifies that or yields a strictly
      // feasible descent direction.
      std::vector<int> active;
      for (int j = 0; j < m; ++j) {
        const double slack = upper[j] - constraints.row(j).dot(sol.x);
        if (slack <= kActiveTolerance * (1.0 + std::abs(upper[j]))) active.push_back(j);
      }
      if (active.empty()) {
        sol.status = QpStatus::kOptimal;
        return sol;
      }
      QP_TRACE("it=%d stationary |x|=%.3e active=%zu\n", sol.iterations,
               sol.x.lpNorm<Eigen::Infinity>(), active.size());
      MatX ga_t(gradient.size(), static_cast<int>(active.size()));
      for (size_t i = 0; i < active.size(); ++i) {
        ga_t.col(static_cast<int>(i)) = constraints.row(active[i]).transpose();
      }
      const VecX lambda = nnls(ga_t, -grad);
      const VecX rho = ga_t * lambda + grad;  // stationarity residual
      if (rho.lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + grad.lpNorm<Eigen::Infinity>())) {
        sol.multipliers.setZero();
        for (size_t i = 0; i < active.size(); ++i) {
          sol.multipliers[active[i]] = lambda[static_cast<int>(i)];
        }
        sol.status = QpStatus::kOptimal;
        return sol;
      }
      QP_TRACE("it=%d escape |rho|=%.3e grad=%.3e\n", sol.iterations,
               rho.lpNorm<Eigen::Infinity>(), grad.lpNorm<Eigen::Infinity>());
      // Escape step: d = -rho is a strictly feasible descent direction. The
      // NNLS support rows satisfy G_j d = 0, so they stay active along the
      // move and become the next working set -- linearly independent by the
      // NNLS construction, which is what the plain drop rule loses at
      // degenerate vertices.
      p = -rho;
      working.clear();
      std::fill(in_working.begin(), in_working.end(), 0);
      for (size_t i = 0; i < active.size(); ++i) {
        if (lambda[static_cast<int>(i)] > 0.0) {
          working.push_back(active[i]);
          in_working[active[i]] = 1;
        }
      }
      const double curvature = p.dot(hessian * p);
      double alpha = curvature > 0.0 ? -grad.dot(p) / curvature : 1.0;
      // Active rows see G_j p <= nnls tolerance; a relative guard keeps that
      // noise from zeroing the escape step.
      const double escape_guard = 1e-8 * (1.0 + p.lpNorm<Eigen::Infinity>());
      for (int j = 0; j < m; ++j) {
        if (in_working[j]) continue;
        const double gp = constraints.row(j).dot(p);
        if (gp <= escape_guard) continue;
        const double slack = upper[j] - constraints.row(j).dot(sol.x);
        alpha = std::min(alpha, std::max(slack, 0.0) / gp);
      }
      QP_TRACE("it=%d escape alpha=%.3e\n", sol.iterations, alpha);
      sol.x += alpha * p;
      continue;
    }

    // Longest feasible step along p; ties resolve to the lowest row index.
    double alpha = 1.0;
    int blocker = -1;
    for (int j = 0; j < m; ++j) {
      if (in_working[j]) continue;
      const double gp = constraints.row(j).dot(p);
      if (gp <= kDirectionTolerance) continue;
      const double slack = upper[j] - constraints.row(j).dot(sol.x);
      const double a = std::max(slack, 0.0) / gp;
      if (a < alpha - 1e-15) {
        alpha = a;
        blocker = j;
      }
    }
    QP_TRACE("it=%d step |p|=%.3e alpha=%.3e blocker=%d W=%zu\n", sol.iterations,
             p.lpNorm<Eigen::Infinity>(), alpha, blocker, working.size());
    sol.x += alpha * p;
    if (blocker >= 0) {
      working.insert(std::upper_bound(working.begin(), working.end(), blocker), blocker);
      in_working[blocker] = 1;
    }
  }
  sol.status = QpStatus::kIterationLimit;
  return sol;
}

double qp_kkt_residual(const MatX& hessian, const VecX& gradient, const MatX& constraints,
                       const VecX& upper, const QpSolution& solution) {
  const VecX stationarity =
      hessian * solution.x + gradient + constraints.transpose() * solution.multipliers;
  double residual = stationarity.lpNorm<Eigen::Infinity>();
  const VecX slack = upper - constraints * solution.x;
  for (int j = 0; j < slack.size(); ++j) {
    residual = std::max(residual, -slack[j]);                                // feasibility
    residual = std::max(residual, std::abs(solution.multipliers[j] * slack[j]));  // complementarity
    residual = std::max(residual, -solution.multipliers[j]);                 // dual feasibility
  }
  return residual;
}

}  // namespace cajun
