#include "cajun/trajectory_log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cajun/errors.hpp"

namespace cajun {
namespace {

void append_leg_columns(std::vector<std::string>& cols, const std::string& stem,
                        const std::vector<std::string>& axes) {
  for (int leg = 0; leg < kNumLegs; ++leg) {
    for (const auto& axis : axes) {
      cols.push_back(stem + "_" + std::to_string(leg) + "_" + axis);
    }
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, const std::string& path) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("action log " + path + ": bad number '" + s + "'");
  }
}

void write_header(std::ofstream& out, const std::string& config_hash, uint64_t seed) {
  out << "# config_hash=" << config_hash << " seed=" << seed << "\n";
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<std::string> tick_csv_columns() {
  std::vector<std::string> cols = {"time", "phase", "pos_x", "pos_y", "pos_z",
                                   "roll", "pitch", "yaw", "vel_x", "vel_y", "vel_z",
                                   "omega_x", "omega_y", "omega_z"};
  for (int leg = 0; leg < kNumLegs; ++leg) cols.push_back("contact_" + std::to_string(leg));
  for (int leg = 0; leg < kNumLegs; ++leg) {
    cols.push_back("desired_contact_" + std::to_string(leg));
  }
  append_leg_columns(cols, "grf", {"x", "y", "z"});
  append_leg_columns(cols, "foot", {"x", "y", "z"});
  append_leg_columns(cols, "torque", {"abd", "hip", "knee"});
  for (int leg = 0; leg < kNumLegs; ++leg) cols.push_back("clip_" + std::to_string(leg));
  cols.insert(cols.end(), {"act_f_step", "act_v_x", "act_v_z", "act_omega_y"});
  return cols;
}

void write_tick_csv(const std::string& path, const std::vector<TickLog>& ticks,
                    const std::string& config_hash, uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw ConfigError("log path not writable: " + path);
  write_header(out, config_hash, seed);
  const auto cols = tick_csv_columns();
  for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const TickLog& t : ticks) {
    std::vector<double> row;
    row.reserve(cols.size());
    row.push_back(t.time);
    row.push_back(t.phase);
    for (int i = 0; i < 3; ++i) row.push_back(t.state.position[i]);
    for (int i = 0; i < 3; ++i) row.push_back(t.state.orientation[i]);
    for (int i = 0; i < 3; ++i) row.push_back(t.state.linear_velocity[i]);
    for (int i = 0; i < 3; ++i) row.push_back(t.state.angular_velocity[i]);
    for (int leg = 0; leg < kNumLegs; ++leg) {
      row.push_back(t.state.contact_flags[static_cast<size_t>(leg)] ? 1.0 : 0.0);
    }
    for (int leg = 0; leg < kNumLegs; ++leg) {
      row.push_back(t.desired_contacts[static_cast<size_t>(leg)] ? 1.0 : 0.0);
    }
    for (int leg = 0; leg < kNumLegs; ++leg) {
      for (int i = 0; i < 3; ++i) row.push_back(t.grf.forces[static_cast<size_t>(leg)][i]);
    }
    for (int leg = 0; leg < kNumLegs; ++leg) {
      for (int i = 0; i < 3; ++i) {
        row.push_back(t.state.foot_positions_world[static_cast<size_t>(leg)][i]);
      }
    }
    for (int leg = 0; leg < kNumLegs; ++leg) {
      for (int i = 0; i < 3; ++i) row.push_back(t.torques[static_cast<size_t>(leg)][i]);
    }
    for (int leg = 0; leg < kNumLegs; ++leg) {
      row.push_back(t.clip_flags[static_cast<size_t>(leg)] ? 1.0 : 0.0);
    }
    row.push_back(t.action.f_step);
    row.push_back(t.action.v_x_ref);
    row.push_back(t.action.v_z_ref);
    row.push_back(t.action.omega_y_ref);
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

void write_action_csv(const std::string& path,
                      const std::vector<std::pair<VecX, CentroidalAction>>& actions,
                      const std::string& config_hash, uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw ConfigError("log path not writable: " + path);
  write_header(out, config_hash, seed);
  out << "step";
  for (int i = 0; i < kActionDim; ++i) out << ",raw_" << i;
  out << ",eff_f_step,eff_v_x,eff_v_z,eff_omega_y";
  for (int leg = 0; leg < kNumLegs; ++leg) {
    out << ",eff_res_" << leg << "_x,eff_res_" << leg << "_y,eff_res_" << leg << "_z";
  }
  out << "\n";
  for (size_t step = 0; step < actions.size(); ++step) {
    const auto& [raw, eff] = actions[step];
    out << step;
    for (int i = 0; i < kActionDim; ++i) out << "," << format_double(raw[i]);
    out << "," << format_double(eff.f_step) << "," << format_double(eff.v_x_ref) << ","
        << format_double(eff.v_z_ref) << "," << format_double(eff.omega_y_ref);
    for (int leg = 0; leg < kNumLegs; ++leg) {
      for (int i = 0; i < 3; ++i) {
        out << "," << format_double(eff.swing_residuals[static_cast<size_t>(leg)][i]);
      }
    }
    out << "\n";
  }
}

ActionLogFile read_action_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("action log not readable: " + path);
  ActionLogFile file;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto hash_pos = line.find("config_hash=");
      if (hash_pos != std::string::npos) {
        std::stringstream ss(line.substr(hash_pos + 12));
        ss >> file.config_hash;
      }
      const auto seed_pos = line.find("seed=");
      if (seed_pos != std::string::npos) {
        file.seed = std::stoull(line.substr(seed_pos + 5));
      }
      continue;
    }
    if (!saw_header) {  // column names
      saw_header = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    const size_t expected = 1 + kActionDim + 4 + 3 * kNumLegs;
    if (fields.size() != expected) {
      throw ConfigError("action log " + path + ": expected " + std::to_string(expected) +
                        " fields, got " + std::to_string(fields.size()));
    }
    VecX raw(kActionDim);
    for (int i = 0; i < kActionDim; ++i) {
      raw[i] = parse_double(fields[static_cast<size_t>(1 + i)], path);
    }
    file.raw_actions.push_back(raw);
    CentroidalAction eff;
    size_t k = 1 + kActionDim;
    eff.f_step = parse_double(fields[k++], path);
    eff.v_x_ref = parse_double(fields[k++], path);
    eff.v_z_ref = parse_double(fields[k++], path);
    eff.omega_y_ref = parse_double(fields[k++], path);
    for (int leg = 0; leg < kNumLegs; ++leg) {
      for (int i = 0; i < 3; ++i) {
        eff.swing_residuals[static_cast<size_t>(leg)][i] = parse_double(fields[k++], path);
      }
    }
    file.effective_actions.push_back(eff);
  }
  return file;
}

nlohmann::json episode_summary_to_json(const EpisodeSummary& summary) {
  nlohmann::json j;
  j["seed"] = summary.seed;
  j["steps"] = summary.steps;
  j["total_reward"] = summary.total_reward;
  j["per_cycle_rewards"] = summary.per_cycle_rewards;
  nlohmann::json terms;
  const auto& names = RewardBreakdown::term_names();
  for (size_t i = 0; i < names.size(); ++i) terms[names[i]] = summary.term_sums[i];
  j["term_sums"] = terms;
  j["cycles_completed"] = summary.cycles_completed;
  j["termination"] = termination_reason_string(summary.reason);
  j["final_goal_distance"] = summary.final_goal_distance;
  j["max_base_height"] = summary.max_base_height;
  j["workspace_clamp_count"] = summary.workspace_clamp_count;
  j["wall_time_s"] = summary.wall_time_s;
  return j;
}

nlohmann::json batch_result_to_json(const BatchResult& result, const std::string& config_hash) {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["wall_time_s"] = result.wall_time_s;
  j["num_episodes"] = result.episodes.size();
  nlohmann::json eps = nlohmann::json::array();
  double reward_sum = 0.0;
  long long diverged = 0;
  for (const auto& e : result.episodes) {
    eps.push_back(episode_summary_to_json(e));
    reward_sum += e.total_reward;
    if (e.reason == TerminationReason::kDiverged) diverged += 1;
  }
  j["episodes"] = eps;
  j["mean_total_reward"] =
      result.episodes.empty() ? 0.0 : reward_sum / static_cast<double>(result.episodes.size());
  j["diverged_episodes"] = diverged;
  return j;
}

}  // namespace cajun
