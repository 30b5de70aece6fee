#include "cajun/grf_benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include "cajun/dynamics.hpp"
#include "cajun/kinematics.hpp"
#include "cajun/leg_controller.hpp"
#include "cajun/rotation.hpp"
#include "cajun/state.hpp"

namespace cajun {
namespace {

struct Instance {
  CentroidalDynamics dyn;
  Vec6 qdd_ref;
};

Instance make_instance(const RobotModel& model, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-0.25, 0.25);
  std::uniform_real_distribution<double> height(0.2, 0.34);
  std::uniform_real_distribution<double> vel(-0.5, 0.5);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  std::uniform_int_distribution<int> mask_dist(1, 15);

  CentroidalState state;
  state.orientation = Vec3(angle(rng), angle(rng), angle(rng));
  state.position = Vec3(jitter(rng), jitter(rng), height(rng));
  state.linear_velocity = Vec3(vel(rng), vel(rng), vel(rng));
  state.angular_velocity = Vec3(vel(rng), vel(rng), vel(rng));

  const Mat3 rot = rotation_world_from_base(state.orientation);
  const int mask = mask_dist(rng);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const Vec3 hip_world = state.position + rot * model.hip_offsets[static_cast<size_t>(leg)];
    Vec3 foot = hip_world;
    foot.z() = 0.0;
    foot.x() += jitter(rng);
    foot.y() += jitter(rng);
    state.foot_positions_world[static_cast<size_t>(leg)] = foot;
    state.contact_flags[static_cast<size_t>(leg)] = (mask >> leg) & 1;
  }

  CentroidalAction action;
  std::uniform_real_distribution<double> vx(-1.0, 3.0);
  std::uniform_real_distribution<double> vz(-3.0, 3.0);
  std::uniform_real_distribution<double> wy(-3.0, 3.0);
  action.v_x_ref = vx(rng);
  action.v_z_ref = vz(rng);
  action.omega_y_ref = wy(rng);

  Instance inst;
  inst.dyn = build_centroidal_dynamics(model, state, state.contact_flags);
  inst.qdd_ref = com_pd(state, action, ComGains{});
  return inst;
}

SolverStats stats_from_samples(std::vector<double> us) {
  SolverStats s;
  if (us.empty()) return s;
  std::sort(us.begin(), us.end());
  double sum = 0.0;
  for (double v : us) sum += v;
  s.mean_us = sum / static_cast<double>(us.size());
  s.median_us = us[us.size() / 2];
  const size_t p99_idx =
      std::min(us.size() - 1, static_cast<size_t>(std::ceil(0.99 * us.size())) - 1);
  s.p99_us = us[p99_idx];
  s.total_ms = sum / 1000.0;
  return s;
}

double time_us(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

GrfBenchmarkReport run_grf_benchmark(const RobotModel& model, const SolverWeights& weights,
                                     const GrfBenchmarkConfig& config) {
  GrfBenchmarkReport report;
  report.seed = config.seed;
  std::mt19937_64 rng(config.seed);

  for (int batch_size : config.batch_sizes) {
    std::vector<Instance> instances;
    instances.reserve(static_cast<size_t>(batch_size + config.warmup));
    for (int i = 0; i < batch_size + config.warmup; ++i) {
      instances.push_back(make_instance(model, rng));
    }

    std::vector<double> cf_us, qp_us;
    cf_us.reserve(static_cast<size_t>(batch_size));
    qp_us.reserve(static_cast<size_t>(batch_size));
    for (int i = 0; i < batch_size + config.warmup; ++i) {
      const Instance& inst = instances[static_cast<size_t>(i)];
      const bool measured = i >= config.warmup;

      VecX f_cf;
      const double t_cf = time_us([&] {
        f_cf = solve_grf_closed_form(inst.dyn, inst.qdd_ref, weights);
        clip_to_friction_cone(f_cf, model.friction_mu, model.f_min, model.f_max);
      });

      QpGrfResult qp;
      const double t_qp = time_us([&] {
        qp = solve_grf_qp(inst.dyn, inst.qdd_ref, weights, model.friction_mu, model.f_min,
                          model.f_max);
      });

      if (!measured) continue;
      cf_us.push_back(t_cf);
      qp_us.push_back(t_qp);
      report.total_cases += 1;
      if (!qp.converged) report.qp_failures += 1;
      if (qp.converged && !qp.any_constraint_active) {
        report.interior_cases += 1;
        report.interior_max_divergence = std::max(
            report.interior_max_divergence, (f_cf - qp.f).cwiseAbs().maxCoeff());
      }
    }

    BatchTiming timing;
    timing.batch_size = batch_size;
    timing.closed_form = stats_from_samples(cf_us);
    timing.qp = stats_from_samples(qp_us);
    timing.median_speedup =
        timing.closed_form.median_us > 0.0 ? timing.qp.median_us / timing.closed_form.median_us
                                           : 0.0;
    report.batches.push_back(timing);
  }
  return report;
}

nlohmann::json GrfBenchmarkReport::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  nlohmann::json batches_json = nlohmann::json::array();
  for (const auto& b : batches) {
    nlohmann::json bj;
    bj["batch_size"] = b.batch_size;
    const auto stats_json = [](const SolverStats& s) {
      return nlohmann::json{{"mean_us", s.mean_us},
                            {"median_us", s.median_us},
                            {"p99_us", s.p99_us},
                            {"total_ms", s.total_ms}};
    };
    bj["closed_form"] = stats_json(b.closed_form);
    bj["qp"] = stats_json(b.qp);
    bj["median_speedup"] = b.median_speedup;
    batches_json.push_back(bj);
  }
  j["batches"] = batches_json;
  j["interior_cases"] = interior_cases;
  j["total_cases"] = total_cases;
  j["interior_max_divergence"] = interior_max_divergence;
  j["qp_failures"] = qp_failures;
  return j;
}

}  // namespace cajun
