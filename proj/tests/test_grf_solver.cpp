#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "cajun/dynamics.hpp"
#include "cajun/grf_solver.hpp"
#include "cajun/leg_controller.hpp"
#include "cajun/robot_model.hpp"
#include "cajun/rotation.hpp"

using namespace cajun;

namespace {

CentroidalState four_leg_stance(const RobotModel& model, double height) {
  CentroidalState state;
  state.position = Vec3(0.0, 0.0, height);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    Vec3 foot = state.position + model.hip_offsets[static_cast<size_t>(leg)];
    foot.z() = 0.0;
    state.foot_positions_world[static_cast<size_t>(leg)] = foot;
    state.contact_flags[static_cast<size_t>(leg)] = true;
  }
  return state;
}

CentroidalState random_stance_state(std::mt19937_64& rng, int min_stance = 1) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CentroidalState state;
  state.position = Vec3(gauss(rng) * 0.3, gauss(rng) * 0.3, 0.2 + 0.15 * u01(rng));
  state.orientation = Vec3(0.25 * gauss(rng), 0.25 * gauss(rng), kPi * (2.0 * u01(rng) - 1.0));
  state.linear_velocity = Vec3(gauss(rng), gauss(rng), gauss(rng)) * 0.8;
  state.angular_velocity = Vec3(gauss(rng), gauss(rng), gauss(rng)) * 0.8;
  RobotModel model;
  int stance = 0;
  while (stance < min_stance) {
    stance = 0;
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const bool c = u01(rng) < 0.7;
      state.contact_flags[static_cast<size_t>(leg)] = c;
      stance += c ? 1 : 0;
    }
  }
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const Vec3 hip = state.position +
                     rotation_world_from_base(state.orientation) *
                         model.hip_offsets[static_cast<size_t>(leg)];
    state.foot_positions_world[static_cast<size_t>(leg)] =
        Vec3(hip.x() + 0.08 * gauss(rng), hip.y() + 0.08 * gauss(rng), 0.0);
  }
  return state;
}

// Weighted objective both solvers minimize (up to the shared constant).
double grf_objective(const CentroidalDynamics& dyn, const Vec6& qdd_ref,
                     const SolverWeights& weights, const VecX& f) {
  const Vec6 err = dyn.A * f + dyn.gravity - qdd_ref;
  // regularizer sliced to stance slots in leg order
  double reg = 0.0;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const int slot = dyn.column_of_leg[static_cast<size_t>(leg)];
    if (slot < 0) continue;
    for (int a = 0; a < 3; ++a) {
      const double fi = f[3 * slot + a];
      reg += weights.v(3 * leg + a, 3 * leg + a) * fi * fi;
    }
  }
  return err.dot(weights.u * err) + reg;
}

bool pyramid_feasible(const VecX& f, double mu, double f_min, double f_max, double tol) {
  for (int i = 0; i < f.size() / 3; ++i) {
    const double fx = f[3 * i], fy = f[3 * i + 1], fz = f[3 * i + 2];
    if (fz < f_min - tol || fz > f_max + tol) return false;
    if (std::abs(fx) > mu * fz + tol || std::abs(fy) > mu * fz + tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("base pd: roll error commands restoring angular acceleration") {
  CentroidalState state;
  state.position = Vec3(0, 0, 0.27);
  state.orientation = Vec3(0.1, 0.0, 0.0);
  const Vec6 qdd = com_pd(state, CentroidalAction{}, ComGains{});
  CHECK(qdd[0] == doctest::Approx(-5.0).epsilon(1e-12));  // kp_roll * (0 - 0.1)
  CHECK(std::abs(qdd[1]) < 1e-12);
  CHECK(std::abs(qdd[2]) < 1e-12);
}

TEST_CASE("base pd: velocity commands map through the damping gain") {
  CentroidalState state;
  state.position = Vec3(0, 0, 0.27);
  CentroidalAction action;
  action.v_x_ref = 1.0;
  Vec6 qdd = com_pd(state, action, ComGains{});
  CHECK(qdd[3] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(std::abs(qdd[4]) < 1e-12);
  CHECK(std::abs(qdd[5]) < 1e-12);

  action = CentroidalAction{};
  action.v_z_ref = -0.5;
  qdd = com_pd(state, action, ComGains{});
  CHECK(qdd[5] == doctest::Approx(-5.0).epsilon(1e-12));

  action = CentroidalAction{};
  action.omega_y_ref = 1.2;
  qdd = com_pd(state, action, ComGains{});
  CHECK(qdd[1] == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("base pd: forward command follows the heading, output in base frame") {
  CentroidalState state;
  state.position = Vec3(0, 0, 0.27);
  state.orientation = Vec3(0.0, 0.0, kPi / 2.0);
  CentroidalAction action;
  action.v_x_ref = 1.0;
  const Vec6 qdd = com_pd(state, action, ComGains{});
  // reference velocity points along world +y; base x axis points there too
  CHECK(qdd[3] == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(std::abs(qdd[4]) < 1e-9);
}

TEST_CASE("base pd: damping opposes current velocities") {
  CentroidalState state;
  state.position = Vec3(0, 0, 0.27);
  state.linear_velocity = Vec3(2.0, 0.0, 0.0);
  state.angular_velocity = Vec3(0.0, 0.5, 0.0);
  const Vec6 qdd = com_pd(state, CentroidalAction{}, ComGains{});
  CHECK(qdd[3] == doctest::Approx(-20.0).epsilon(1e-12));
  CHECK(qdd[1] == doctest::Approx(-5.0).epsilon(1e-12));
  // position offsets produce no restoring force with the default gains
  state.linear_velocity.setZero();
  state.angular_velocity.setZero();
  state.position += Vec3(5.0, -2.0, 1.0);
  CHECK(com_pd(state, CentroidalAction{}, ComGains{}).norm() < 1e-12);
}

TEST_CASE("closed form matches a stacked least-squares solve") {
  RobotModel model;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SolverWeights weights;
  // non-uniform regularizer so the stance slicing is exercised
  for (int i = 0; i < 12; ++i) weights.v(i, i) = 1e-4 * (1.0 + 0.5 * (i % 3));
  for (int trial = 0; trial < 500; ++trial) {
    const CentroidalState state = random_stance_state(rng);
    const CentroidalDynamics dyn = build_centroidal_dynamics(model, state, state.contact_flags);
    Vec6 qdd_ref;
    for (int i = 0; i < 6; ++i) qdd_ref[i] = 4.0 * gauss(rng);

    const VecX f = solve_grf_closed_form(dyn, qdd_ref, weights);
    REQUIRE(f.size() == 3 * dyn.num_stance);

    // oracle: minimize the same objective as one tall QR least-squares stack
    const int n = 3 * dyn.num_stance;
    MatX v_s = MatX::Zero(n, n);
    for (int leg = 0; leg < kNumLegs; ++leg) {
      const int slot = dyn.column_of_leg[static_cast<size_t>(leg)];
      if (slot < 0) continue;
      for (int a = 0; a < 3; ++a) v_s(3 * slot + a, 3 * slot + a) = weights.v(3 * leg + a, 3 * leg + a);
    }
    const Mat6 u_sqrt = Eigen::SelfAdjointEigenSolver<Mat6>(weights.u).operatorSqrt();
    MatX stacked(6 + n, n);
    stacked.topRows(6) = u_sqrt * dyn.A;
    stacked.bottomRows(n) = v_s.cwiseSqrt();
    VecX rhs = VecX::Zero(6 + n);
    rhs.head(6) = u_sqrt * (qdd_ref - dyn.gravity);
    const VecX expected = stacked.colPivHouseholderQr().solve(rhs);
    CHECK((f - expected).lpNorm<Eigen::Infinity>() <
          1e-8 * (1.0 + expected.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("hover statics: weight splits evenly across four legs") {
  RobotModel model;
  const CentroidalState state = four_leg_stance(model, 0.27);
  const CentroidalDynamics dyn = build_centroidal_dynamics(model, state, state.contact_flags);
  SolverWeights weights;
  weights.v = 1e-6 * Mat12::Identity();
  const VecX f = solve_grf_closed_form(dyn, Vec6::Zero(), weights);
  const double per_leg = model.total_mass() * kGravity / 4.0;  // 29.43 N
  for (int leg = 0; leg < 4; ++leg) {
    CHECK(f[3 * leg + 2] == doctest::Approx(per_leg).epsilon(0.005));
    CHECK(std::abs(f[3 * leg]) < 0.2);
    CHECK(std::abs(f[3 * leg + 1]) < 0.2);
  }
}

TEST_CASE("hover statics scale with an attached payload") {
  RobotModel model = apply_payload(RobotModel{}, 4.0);
  const CentroidalState state = four_leg_stance(model, 0.27);
  const CentroidalDynamics dyn = build_centroidal_dynamics(model, state, state.contact_flags);
  SolverWeights weights;
  weights.v = 1e-6 * Mat12::Identity();
  const VecX f = solve_grf_closed_form(dyn, Vec6::Zero(), weights);
  for (int leg = 0; leg < 4; ++leg) {
    CHECK(f[3 * leg + 2] == doctest::Approx(16.0 * kGravity / 4.0).epsilon(0.005));
  }
}

TEST_CASE("cone clip: tangential overflow scales back to the boundary") {
  VecX f(3);
  f << 30.0, 0.0, 20.0;
  const ConeClipResult r = clip_to_friction_cone(f, 0.6, 0.0, 120.0);
  CHECK(r.f[0] == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(r.f[1] == 0.0);
  CHECK(r.f[2] == 20.0);
  CHECK_FALSE(r.normal_clipped[0]);
  CHECK(r.tangential_scaled[0]);
}

TEST_CASE("cone clip: normal overflow clips first, tangential rechecked after") {
  VecX f(3);
  f << 5.0, 0.0, 200.0;
  const ConeClipResult r = clip_to_friction_cone(f, 0.6, 0.0, 120.0);
  CHECK(r.f[2] == 120.0);
  CHECK(r.f[0] == 5.0);  // 5 < 0.6 * 120, untouched
  CHECK(r.normal_clipped[0]);
  CHECK_FALSE(r.tangential_scaled[0]);

  // pulling force: normal goes to f_min and the tangential follows to zero
  f << 1.0, 1.0, -5.0;
  const ConeClipResult pull = clip_to_friction_cone(f, 0.6, 0.0, 120.0);
  CHECK(pull.f[2] == 0.0);
  CHECK(pull.f[0] == 0.0);
  CHECK(pull.f[1] == 0.0);
  CHECK(pull.normal_clipped[0]);
  CHECK(pull.tangential_scaled[0]);
}

TEST_CASE("cone clip: in-cone forces pass through untouched") {
  VecX f(6);
  f << 3.0, 4.0, 10.0, -1.0, 2.0, 50.0;
  const ConeClipResult r = clip_to_friction_cone(f, 0.6, 0.0, 120.0);
  CHECK((r.f - f).norm() == 0.0);
  CHECK_FALSE(r.tangential_scaled[0]);
  CHECK_FALSE(r.tangential_scaled[1]);
}

TEST_CASE("cone clip is idempotent") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> range(-250.0, 250.0);
  for (int trial = 0; trial < 2000; ++trial) {
    VecX f(12);
    for (int i = 0; i < 12; ++i) f[i] = range(rng);
    const ConeClipResult once = clip_to_friction_cone(f, 0.6, 0.0, 120.0);
    const ConeClipResult twice = clip_to_friction_cone(once.f, 0.6, 0.0, 120.0);
    // boundary rescaling may wobble by an ulp, nothing more
    CHECK((twice.f - once.f).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("cone clip output always satisfies the friction limits") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> range(-400.0, 400.0);
  const double mu = 0.6, f_min = 0.0, f_max = 120.0;
  int checked = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    VecX f(12);
    for (int i = 0; i < 12; ++i) f[i] = range(rng);
    const VecX clipped = clip_to_friction_cone(f, mu, f_min, f_max).f;
    for (int leg = 0; leg < 4; ++leg) {
      const double fz = clipped[3 * leg + 2];
      const double t = std::hypot(clipped[3 * leg], clipped[3 * leg + 1]);
      REQUIRE(fz >= f_min);
      REQUIRE(fz <= f_max);
      REQUIRE(t <= mu * fz + 1e-9);
      ++checked;
    }
  }
  CHECK(checked == 20000);
}

TEST_CASE("qp grf: force cap splits hover across saturated legs") {
  RobotModel model;
  const CentroidalState state = four_leg_stance(model, 0.27);
  const CentroidalDynamics dyn = build_centroidal_dynamics(model, state, state.contact_flags);
  SolverWeights weights;
  weights.v = 1e-6 * Mat12::Identity();
  // hover needs 29.43 N per leg; cap at 25 N and the optimum pins all four
  const QpGrfResult r = solve_grf_qp(dyn, Vec6::Zero(), weights, 0.6, 0.0, 25.0);
  REQUIRE(r.converged);
  CHECK(r.any_constraint_active);
  for (int leg = 0; leg < 4; ++leg) {
    CHECK(r.f[3 * leg + 2] == doctest::Approx(25.0).epsilon(1e-6));
    CHECK(r.normal_active[static_cast<size_t>(leg)]);
  }
}

TEST_CASE("qp grf agrees with the closed form on interior instances") {
  RobotModel model;
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const SolverWeights weights;
  int interior = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const CentroidalState state = random_stance_state(rng, 2);
    const CentroidalDynamics dyn = build_centroidal_dynamics(model, state, state.contact_flags);
    Vec6 qdd_ref;
    for (int i = 0; i < 6; ++i) qdd_ref[i] = 2.0 * gauss(rng);
    const QpGrfResult qp = solve_grf_qp(dyn, qdd_ref, weights, 0.6, 0.0, 120.0);
    REQUIRE(qp.converged);
    CHECK(qp.kkt_residual < 1e-8);
    if (qp.any_constraint_active) continue;
    ++interior;
    const VecX f_hat = solve_grf_closed_form(dyn, qdd_ref, weights);
    CHECK((f_hat - qp.f).lpNorm<Eigen::Infinity>() <
          1e-6 * (1.0 + qp.f.lpNorm<Eigen::Infinity>()));
  }
  CHECK(interior > 100);  // the distribution must actually exercise the comparison
}

TEST_CASE("qp grf dominates every feasible point it is compared against") {
  RobotModel model;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const SolverWeights weights;
  const double mu = 0.6, f_min = 0.0, f_max = 120.0;
  for (int trial = 0; trial < 100; ++trial) {
    const CentroidalState state = random_stance_state(rng, 1);
    const CentroidalDynamics dyn = build_centroidal_dynamics(model, state, state.contact_flags);
    Vec6 qdd_ref;
    for (int i = 0; i < 6; ++i) qdd_ref[i] = 8.0 * gauss(rng);  // often hits constraints
    const QpGrfResult qp = solve_grf_qp(dyn, qdd_ref, weights, mu, f_min, f_max);
    REQUIRE(qp.converged);
    REQUIRE(pyramid_feasible(qp.f, mu, f_min, f_max, 1e-7));
    const double qp_obj = grf_objective(dyn, qdd_ref, weights, qp.f);

    // the circular clip of the closed form is pyramid-feasible, so it is a
    // valid competitor
    const VecX clipped =
        clip_to_friction_cone(solve_grf_closed_form(dyn, qdd_ref, weights), mu, f_min, f_max).f;
    CHECK(qp_obj <= grf_objective(dyn, qdd_ref, weights, clipped) + 1e-7);

    for (int sample = 0; sample < 50; ++sample) {
      VecX cand(3 * dyn.num_stance);
      for (int i = 0; i < dyn.num_stance; ++i) {
        const double fz = f_min + (f_max - f_min) * u01(rng);
        cand[3 * i + 2] = fz;
        cand[3 * i] = mu * fz * (2.0 * u01(rng) - 1.0);
        cand[3 * i + 1] = mu * fz * (2.0 * u01(rng) - 1.0);
      }
      CHECK(qp_obj <= grf_objective(dyn, qdd_ref, weights, cand) + 1e-7);
    }
  }
}

TEST_CASE("weights validation rejects indefinite matrices") {
  SolverWeights w;
  w.validate();
  w.u(0, 0) = -1.0;
  CHECK_THROWS(w.validate());
  w = SolverWeights{};
  w.v(3, 4) = 1.0;  // asymmetric
  CHECK_THROWS(w.validate());
}

TEST_CASE("no stance legs yields an empty solve") {
  RobotModel model;
  CentroidalState state;
  state.position = Vec3(0, 0, 0.5);
  const CentroidalDynamics dyn = build_centroidal_dynamics(model, state, state.contact_flags);
  CHECK(solve_grf_closed_form(dyn, Vec6::Zero(), SolverWeights{}).size() == 0);
  const QpGrfResult qp = solve_grf_qp(dyn, Vec6::Zero(), SolverWeights{}, 0.6, 0.0, 120.0);
  CHECK(qp.f.size() == 0);
  CHECK(qp.converged);
}
