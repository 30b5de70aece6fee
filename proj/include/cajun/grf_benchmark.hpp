#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "cajun/grf_solver.hpp"
#include "cajun/robot_model.hpp"
#include "cajun/types.hpp"

// Head-to-head timing of the closed-form and QP stance-force solvers over
// randomized but physically plausible instances (random base pose near
// standing, random stance sets, random tracking commands).

namespace cajun {

struct GrfBenchmarkConfig {
  std::vector<int> batch_sizes{1, 8, 64, 256, 1024};
  uint64_t seed = 0;
  int warmup = 16;  // unmeasured solves before each batch
};

struct SolverStats {
  double mean_us = 0.0;
  double median_us = 0.0;
  double p99_us = 0.0;
  double total_ms = 0.0;
};

struct BatchTiming {
  int batch_size = 0;
  SolverStats closed_form;
  SolverStats qp;
  double median_speedup = 0.0;  // qp median / closed-form median
};

struct GrfBenchmarkReport {
  uint64_t seed = 0;
  std::vector<BatchTiming> batches;
  // Over instances where the QP finished with no active constraint: the raw
  // (pre-clip) closed-form solution should match it to solver precision.
  int interior_cases = 0;
  int total_cases = 0;
  double interior_max_divergence = 0.0;  // max |f_cf - f_qp| component, N
  int qp_failures = 0;

  nlohmann::json to_json() const;
};

GrfBenchmarkReport run_grf_benchmark(const RobotModel& model, const SolverWeights& weights,
                                     const GrfBenchmarkConfig& config);

}  // namespace cajun
