#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "cajun/env_config.hpp"
#include "cajun/gait.hpp"
#include "cajun/robot_model.hpp"
#include "cajun/simulator.hpp"

namespace cajun {

// Everything one run needs, loadable from a single JSON file. Unknown keys are
// rejected everywhere. The "training" section is a recorded-only hyperparameter
// block so configs for learned policies stay loadable even though no trainer
// ships here.
struct RunConfig {
  RobotModel robot;
  GaitConfig gait = GaitConfig::preset(GaitName::kPronking);
  ControllerConfig controller;
  SimConfig sim;
  EnvConfig env;
  AblationFlags ablation;
  uint64_t seed = 0;
  nlohmann::json training;  // opaque, schema-checked hyperparameter record

  // Re-derives coupled defaults (action f_step bounds from the gait) and
  // validates every section.
  void finalize();

  static RunConfig defaults();
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load_file(const std::string& path);
  nlohmann::json to_json() const;

  // FNV-1a over the canonical serialization; embedded in every output artifact.
  uint64_t hash() const;
  std::string hash_string() const;
};

// Applies one named ablation ("no_gait", "no_swing", "no_swing_ref", "qp") to
// a copy of the config. Throws ConfigError for unknown variants.
RunConfig apply_ablation(const RunConfig& config, const std::string& variant);

}  // namespace cajun
