#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cajun/environment.hpp"
#include "cajun/simulator.hpp"
#include "cajun/types.hpp"

// CSV / JSON artifacts for rollouts. Every file starts with a comment line
//
//   # config_hash=<16 hex digits> seed=<n>
//
// and doubles are printed with 17 significant digits so a replay from the
// action log reproduces the original trajectory bit for bit.

namespace cajun {

std::string format_double(double value);  // %.17g

// One row per simulator tick.
std::vector<std::string> tick_csv_columns();
void write_tick_csv(const std::string& path, const std::vector<TickLog>& ticks,
                    const std::string& config_hash, uint64_t seed);

// One row per high-level step: the raw policy action followed by the
// effective (clamped, ablated) command the simulator saw.
void write_action_csv(const std::string& path,
                      const std::vector<std::pair<VecX, CentroidalAction>>& actions,
                      const std::string& config_hash, uint64_t seed);

struct ActionLogFile {
  std::string config_hash;
  uint64_t seed = 0;
  std::vector<VecX> raw_actions;
  std::vector<CentroidalAction> effective_actions;
};

// Throws ConfigError on malformed files.
ActionLogFile read_action_csv(const std::string& path);

nlohmann::json episode_summary_to_json(const EpisodeSummary& summary);
nlohmann::json batch_result_to_json(const BatchResult& result, const std::string& config_hash);

}  // namespace cajun
