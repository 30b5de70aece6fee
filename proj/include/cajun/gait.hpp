#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cajun/types.hpp"

// Phase-driven gait generation. A single scalar phase advances as
// phi += 2*pi*f*dt and wraps on [0, 2*pi); each leg is in stance whenever the
// wrapped phase falls inside one of its configured stance windows.

namespace cajun {

struct PhaseWindow {
  double start = 0.0;  // inclusive
  double end = 0.0;    // exclusive, start < end <= 2*pi
  double width() const { return end - start; }
  bool contains(double phi) const { return phi >= start && phi < end; }
};

enum class GaitName {
  kPronking,
  kBounding,
  kCrawling,
  kPacing,
  kTrotting,
  kFlyTrotting,
  kCustom,
};

const char* gait_name_string(GaitName name);
GaitName gait_name_from_string(const std::string& s);

struct GaitConfig {
  GaitName name = GaitName::kPronking;
  std::array<std::vector<PhaseWindow>, kNumLegs> stance_windows;
  double default_frequency = 2.0;                    // Hz
  std::pair<double, double> frequency_bounds{1.0, 4.0};

  static GaitConfig preset(GaitName name);
  void validate() const;  // throws ConfigError
  static GaitConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Phase is stored unwrapped so the cycle count stays exact; readers see the
// wrapped value.
struct PhaseState {
  double unwrapped = 0.0;
  double frequency = 2.0;  // last commanded stepping frequency after clamping

  double phase() const;                 // [0, 2*pi)
  long long cycle_count() const;        // completed cycles
};

// One tick of phase advance; f_step is clamped to the configured bounds.
PhaseState advance_phase(const PhaseState& state, const GaitConfig& config, double f_step,
                         double dt);

std::array<bool, kNumLegs> desired_contact_state(const GaitConfig& config, double phi);

// Fraction of the current swing interval elapsed, in [0, 1); empty if the leg
// is in stance at phi. Swing intervals that straddle the 2*pi wrap are treated
// as one contiguous interval.
std::optional<double> swing_progress(const GaitConfig& config, double phi, int leg);

// Stance time per cycle for one leg: (total stance width / 2*pi) / f.
double estimate_stance_duration(const GaitConfig& config, double f_step, int leg);

}  // namespace cajun
