#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cajun/environment.hpp"
#include "cajun/errors.hpp"
#include "cajun/grf_benchmark.hpp"
#include "cajun/logging.hpp"
#include "cajun/run_config.hpp"
#include "cajun/trajectory_log.hpp"

namespace {

using namespace cajun;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

struct GlobalOptions {
  std::string config_path;
  std::string log_dir;
  uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;
};

RunConfig load_config(const GlobalOptions& opts) {
  RunConfig config = opts.config_path.empty() ? RunConfig::defaults()
                                              : RunConfig::load_file(opts.config_path);
  if (opts.seed_set) config.seed = opts.seed;
  return config;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> items;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("report path not writable: " + path);
  out << j.dump(2) << "\n";
}

PolicyFn make_policy(const std::string& spec, const RunConfig& config) {
  if (spec == "heuristic") return make_heuristic_policy(config.env.heuristic);
  if (spec.rfind("replay:", 0) == 0) {
    const std::string path = spec.substr(7);
    auto log = std::make_shared<ActionLogFile>(read_action_csv(path));
    if (log->raw_actions.empty()) throw ConfigError("replay log is empty: " + path);
    if (!log->config_hash.empty() && log->config_hash != config.hash_string()) {
      log_warn("replay: action log was recorded under config " + log->config_hash +
               ", current config is " + config.hash_string());
    }
    return [log](const Observation&, const JumpingEnv&, int step) {
      const size_t i = std::min(static_cast<size_t>(step), log->raw_actions.size() - 1);
      return log->raw_actions[i];
    };
  }
  throw ConfigError("--policy: expected 'heuristic' or 'replay:<file>', got '" + spec + "'");
}

void print_episode_line(const EpisodeSummary& e, bool quiet) {
  if (quiet) return;
  std::printf(
      "episode seed=%llu steps=%d cycles=%lld reward=%.4f max_height=%.3f goal_dist=%.3f "
      "termination=%s\n",
      static_cast<unsigned long long>(e.seed), e.steps, e.cycles_completed, e.total_reward,
      e.max_base_height, e.final_goal_distance, termination_reason_string(e.reason));
}

int count_diverged(const BatchResult& batch) {
  int n = 0;
  for (const auto& e : batch.episodes) {
    if (e.reason == TerminationReason::kDiverged) n += 1;
  }
  return n;
}

int cmd_rollout(const GlobalOptions& opts, RunConfig config, const std::string& policy_spec,
                const std::string& gait_name, const std::string& solver_name,
                const std::string& ablation_variant, int episodes, int threads) {
  if (!gait_name.empty()) {
    config.gait = GaitConfig::preset(gait_name_from_string(gait_name));
  }
  if (!solver_name.empty()) {
    if (solver_name == "qp") {
      config.controller.mode = GrfSolverMode::kQp;
    } else if (solver_name == "closed_form") {
      config.controller.mode = GrfSolverMode::kClosedForm;
    } else {
      throw ConfigError("--grf-solver: expected 'closed_form' or 'qp'");
    }
  }
  config.finalize();
  if (!ablation_variant.empty()) config = apply_ablation(config, ablation_variant);

  const PolicyFn policy = make_policy(policy_spec, config);
  const std::string hash = config.hash_string();
  log_info("rollout: config " + hash + ", " + std::to_string(episodes) + " episode(s)");

  BatchResult batch;
  if (!opts.log_dir.empty()) {
    std::filesystem::create_directories(opts.log_dir);
    for (int i = 0; i < episodes; ++i) {
      const uint64_t seed = config.seed + static_cast<uint64_t>(i);
      std::vector<TickLog> ticks;
      std::vector<std::pair<VecX, CentroidalAction>> actions;
      EpisodeSummary summary = run_episode(config, seed, policy, &ticks, &actions);
      const std::string stem =
          (std::filesystem::path(opts.log_dir) / ("ep_" + std::to_string(seed))).string();
      write_tick_csv(stem + "_ticks.csv", ticks, hash, seed);
      write_action_csv(stem + "_actions.csv", actions, hash, seed);
      write_json_file(stem + "_summary.json", episode_summary_to_json(summary));
      batch.episodes.push_back(summary);
      batch.wall_time_s += summary.wall_time_s;
      print_episode_line(summary, opts.quiet);
    }
  } else {
    batch = batch_rollout(config, episodes, config.seed, policy, threads);
    for (const auto& e : batch.episodes) print_episode_line(e, opts.quiet);
  }

  double mean_reward = 0.0;
  for (const auto& e : batch.episodes) mean_reward += e.total_reward;
  if (!batch.episodes.empty()) mean_reward /= static_cast<double>(batch.episodes.size());
  std::printf("rollout: %zu episode(s), mean_reward=%.4f, wall=%.2fs, config=%s\n",
              batch.episodes.size(), mean_reward, batch.wall_time_s, hash.c_str());
  return count_diverged(batch) > 0 ? kExitDiverged : kExitOk;
}

int cmd_bench_grf(const GlobalOptions& opts, const RunConfig& config,
                  const std::string& batch_sizes_csv, const std::string& report_path) {
  GrfBenchmarkConfig bench;
  bench.seed = config.seed;
  if (!batch_sizes_csv.empty()) {
    bench.batch_sizes.clear();
    for (const auto& s : split_list(batch_sizes_csv)) bench.batch_sizes.push_back(std::stoi(s));
  }
  const GrfBenchmarkReport report =
      run_grf_benchmark(config.robot, config.controller.weights, bench);
  if (!opts.quiet) {
    std::printf("%8s  %26s  %26s  %8s\n", "batch", "closed-form us (med/mean/p99)",
                "qp us (med/mean/p99)", "speedup");
    for (const auto& b : report.batches) {
      std::printf("%8d  %8.2f/%8.2f/%8.2f  %8.2f/%8.2f/%8.2f  %7.2fx\n", b.batch_size,
                  b.closed_form.median_us, b.closed_form.mean_us, b.closed_form.p99_us,
                  b.qp.median_us, b.qp.mean_us, b.qp.p99_us, b.median_speedup);
    }
  }
  std::printf("bench-grf: %d/%d interior instances, max divergence %.3e N, qp_failures=%d\n",
              report.interior_cases, report.total_cases, report.interior_max_divergence,
              report.qp_failures);
  if (!report_path.empty()) write_json_file(report_path, report.to_json());
  return kExitOk;
}

int cmd_ablate(const GlobalOptions& opts, const RunConfig& config, const std::string& variants_csv,
               int episodes, int threads, const std::string& report_path) {
  const std::vector<std::string> variants =
      variants_csv.empty()
          ? std::vector<std::string>{"baseline", "no_gait", "no_swing", "no_swing_ref", "qp"}
          : split_list(variants_csv);
  nlohmann::json report;
  bool any_diverged = false;
  std::printf("%-14s %10s %10s %10s %10s\n", "variant", "reward", "height", "cycles", "diverged");
  for (const auto& variant : variants) {
    RunConfig variant_config = variant == "baseline" ? config : apply_ablation(config, variant);
    const PolicyFn policy = make_heuristic_policy(variant_config.env.heuristic);
    BatchResult batch = batch_rollout(variant_config, episodes, variant_config.seed, policy,
                                      threads);
    double mean_reward = 0.0, mean_height = 0.0, mean_cycles = 0.0;
    for (const auto& e : batch.episodes) {
      mean_reward += e.total_reward;
      mean_height += e.max_base_height;
      mean_cycles += static_cast<double>(e.cycles_completed);
    }
    const double n = std::max<size_t>(1, batch.episodes.size());
    mean_reward /= n;
    mean_height /= n;
    mean_cycles /= n;
    const int diverged = count_diverged(batch);
    any_diverged = any_diverged || diverged > 0;
    std::printf("%-14s %10.4f %10.3f %10.1f %10d\n", variant.c_str(), mean_reward, mean_height,
                mean_cycles, diverged);
    report[variant] = batch_result_to_json(batch, variant_config.hash_string());
    if (!opts.log_dir.empty()) {
      std::filesystem::create_directories(opts.log_dir);
      std::vector<TickLog> ticks;
      std::vector<std::pair<VecX, CentroidalAction>> actions;
      run_episode(variant_config, variant_config.seed, policy, &ticks, &actions);
      const std::string stem =
          (std::filesystem::path(opts.log_dir) / ("ablate_" + variant)).string();
      write_tick_csv(stem + "_ticks.csv", ticks, variant_config.hash_string(),
                     variant_config.seed);
      write_action_csv(stem + "_actions.csv", actions, variant_config.hash_string(),
                       variant_config.seed);
    }
  }
  if (!report_path.empty()) write_json_file(report_path, report);
  return any_diverged ? kExitDiverged : kExitOk;
}

int cmd_payload_sweep(const GlobalOptions&, const RunConfig& config,
                      const std::string& masses_csv, int episodes, int threads,
                      const std::string& report_path) {
  std::vector<double> masses{0.0, 2.0, 4.0, 6.0};
  if (!masses_csv.empty()) {
    masses.clear();
    for (const auto& s : split_list(masses_csv)) masses.push_back(std::stod(s));
  }
  nlohmann::json report = nlohmann::json::array();
  bool any_diverged = false;
  std::printf("%10s %10s %10s %10s %10s\n", "payload_kg", "reward", "height", "cycles",
              "diverged");
  for (double mass : masses) {
    RunConfig swept = config;
    swept.robot.payload_mass = mass;
    swept.finalize();
    const PolicyFn policy = make_heuristic_policy(swept.env.heuristic);
    BatchResult batch = batch_rollout(swept, episodes, swept.seed, policy, threads);
    double mean_reward = 0.0, mean_height = 0.0, mean_cycles = 0.0;
    for (const auto& e : batch.episodes) {
      mean_reward += e.total_reward;
      mean_height += e.max_base_height;
      mean_cycles += static_cast<double>(e.cycles_completed);
    }
    const double n = std::max<size_t>(1, batch.episodes.size());
    mean_reward /= n;
    mean_height /= n;
    mean_cycles /= n;
    const int diverged = count_diverged(batch);
    any_diverged = any_diverged || diverged > 0;
    std::printf("%10.2f %10.4f %10.3f %10.1f %10d\n", mass, mean_reward, mean_height, mean_cycles,
                diverged);
    nlohmann::json entry = batch_result_to_json(batch, swept.hash_string());
    entry["payload_mass"] = mass;
    report.push_back(entry);
  }
  if (!report_path.empty()) write_json_file(report_path, report);
  return any_diverged ? kExitDiverged : kExitOk;
}

int cmd_validate_config(const GlobalOptions& opts, const RunConfig& config) {
  if (!opts.quiet) std::printf("%s\n", config.to_json().dump(2).c_str());
  std::printf("config ok: hash=%s\n", config.hash_string().c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadruped jumping-control stack: rollouts, solver benchmarks, ablations"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may appear after the subcommand

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "JSON run configuration file");
  app.add_option("--seed", opts.seed, "override the config seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  app.add_option("--log-dir", opts.log_dir, "write per-episode CSV/JSON artifacts here");
  app.add_flag("--quiet", opts.quiet, "errors only");

  auto* rollout = app.add_subcommand("rollout", "run policy episodes in the simulator");
  std::string policy_spec = "heuristic";
  std::string gait_name, solver_name, ablation_variant;
  int episodes = 1, threads = 0;
  rollout->add_option("--policy", policy_spec, "heuristic | replay:<actions.csv>");
  rollout->add_option("--gait", gait_name,
                      "gait preset override (pronking, bounding, crawling, pacing, trotting, "
                      "fly_trotting)");
  rollout->add_option("--grf-solver", solver_name, "closed_form | qp");
  rollout->add_option("--ablation", ablation_variant,
                      "apply one ablation (no_gait, no_swing, no_swing_ref, qp)");
  rollout->add_option("--episodes", episodes, "episode count")->check(CLI::PositiveNumber);
  rollout->add_option("--threads", threads, "worker threads (0 = hardware)");

  auto* bench = app.add_subcommand("bench-grf", "time the closed-form solver against the QP");
  std::string batch_sizes_csv, bench_report;
  bench->add_option("--batch-sizes", batch_sizes_csv, "comma-separated batch sizes");
  bench->add_option("--report", bench_report, "write the JSON report here");

  auto* ablate = app.add_subcommand("ablate", "compare controller ablations");
  std::string variants_csv, ablate_report;
  int ablate_episodes = 8, ablate_threads = 0;
  ablate->add_option("--variants", variants_csv,
                     "comma-separated subset of baseline,no_gait,no_swing,no_swing_ref,qp");
  ablate->add_option("--episodes", ablate_episodes, "episodes per variant")
      ->check(CLI::PositiveNumber);
  ablate->add_option("--threads", ablate_threads, "worker threads (0 = hardware)");
  ablate->add_option("--report", ablate_report, "write the JSON report here");

  auto* payload = app.add_subcommand("payload-sweep", "rerun the task under added payload mass");
  std::string masses_csv, payload_report;
  int payload_episodes = 4, payload_threads = 0;
  payload->add_option("--masses", masses_csv, "comma-separated payload masses, kg");
  payload->add_option("--episodes", payload_episodes, "episodes per mass")
      ->check(CLI::PositiveNumber);
  payload->add_option("--threads", payload_threads, "worker threads (0 = hardware)");
  payload->add_option("--report", payload_report, "write the JSON report here");

  auto* validate = app.add_subcommand("validate-config", "parse, validate and echo the config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (opts.quiet) set_log_level(LogLevel::kError);
    const RunConfig config = load_config(opts);
    if (rollout->parsed()) {
      return cmd_rollout(opts, config, policy_spec, gait_name, solver_name, ablation_variant,
                         episodes, threads);
    }
    if (bench->parsed()) return cmd_bench_grf(opts, config, batch_sizes_csv, bench_report);
    if (ablate->parsed()) {
      return cmd_ablate(opts, config, variants_csv, ablate_episodes, ablate_threads,
                        ablate_report);
    }
    if (payload->parsed()) {
      return cmd_payload_sweep(opts, config, masses_csv, payload_episodes, payload_threads,
                               payload_report);
    }
    if (validate->parsed()) return cmd_validate_config(opts, config);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
