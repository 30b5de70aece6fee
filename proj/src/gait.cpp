#include "cajun/gait.hpp"

#include <algorithm>
#include <cmath>

#include "cajun/errors.hpp"
#include "cajun/json_util.hpp"

namespace cajun {
namespace {

std::vector<PhaseWindow> sorted_windows(const std::vector<PhaseWindow>& windows) {
  std::vector<PhaseWindow> out = windows;
  std::sort(out.begin(), out.end(),
            [](const PhaseWindow& a, const PhaseWindow& b) { return a.start < b.start; });
  return out;
}

}  // namespace

const char* gait_name_string(GaitName name) {
  switch (name) {
    case GaitName::kPronking: return "pronking";
    case GaitName::kBounding: return "bounding";
    case GaitName::kCrawling: return "crawling";
    case GaitName::kPacing: return "pacing";
    case GaitName::kTrotting: return "trotting";
    case GaitName::kFlyTrotting: return "fly_trotting";
    case GaitName::kCustom: return "custom";
  }
  return "?";
}

GaitName gait_name_from_string(const std::string& s) {
  if (s == "pronking") return GaitName::kPronking;
  if (s == "bounding") return GaitName::kBounding;
  if (s == "crawling") return GaitName::kCrawling;
  if (s == "pacing") return GaitName::kPacing;
  if (s == "trotting") return GaitName::kTrotting;
  if (s == "fly_trotting") return GaitName::kFlyTrotting;
  if (s == "custom") return GaitName::kCustom;
  throw ConfigError("gait.name: unknown gait '" + s + "'");
}

GaitConfig GaitConfig::preset(GaitName name) {
  GaitConfig g;
  g.name = name;
  auto all = [&](PhaseWindow w) {
    for (auto& leg : g.stance_windows) leg = {w};
  };
  switch (name) {
    case GaitName::kPronking:
      all({0.0, kPi});
      break;
    case GaitName::kBounding:
      // Front pair touches down first; two flight gaps per cycle.
      g.stance_windows[kFrontRight] = {{0.0, 0.7 * kPi}};
      g.stance_windows[kFrontLeft] = {{0.0, 0.7 * kPi}};
      g.stance_windows[kRearRight] = {{0.9 * kPi, 1.6 * kPi}};
      g.stance_windows[kRearLeft] = {{0.9 * kPi, 1.6 * kPi}};
      break;
    case GaitName::kCrawling:
      // One leg swings at a time, 3/4 duty, order FL, RR, FR, RL.
      g.stance_windows[kFrontLeft] = {{0.5 * kPi, kTwoPi}};
      g.stance_windows[kRearRight] = {{0.0, 0.5 * kPi}, {kPi, kTwoPi}};
      g.stance_windows[kFrontRight] = {{0.0, kPi}, {1.5 * kPi, kTwoPi}};
      g.stance_windows[kRearLeft] = {{0.0, 1.5 * kPi}};
      break;
    case GaitName::kPacing:
      g.stance_windows[kFrontLeft] = {{0.0, kPi}};
      g.stance_windows[kRearLeft] = {{0.0, kPi}};
      g.stance_windows[kFrontRight] = {{kPi, kTwoPi}};
      g.stance_windows[kRearRight] = {{kPi, kTwoPi}};
      break;
    case GaitName::kTrotting:
      g.stance_windows[kFrontRight] = {{0.0, kPi}};
      g.stance_windows[kRearLeft] = {{0.0, kPi}};
      g.stance_windows[kFrontLeft] = {{kPi, kTwoPi}};
      g.stance_windows[kRearRight] = {{kPi, kTwoPi}};
      break;
    case GaitName::kFlyTrotting:
      // Trot with 0.2*pi flight gaps between the diagonal pairs.
      g.stance_windows[kFrontRight] = {{0.0, 0.8 * kPi}};
      g.stance_windows[kRearLeft] = {{0.0, 0.8 * kPi}};
      g.stance_windows[kFrontLeft] = {{kPi, 1.8 * kPi}};
      g.stance_windows[kRearRight] = {{kPi, 1.8 * kPi}};
      break;
    case GaitName::kCustom:
      all({0.0, kPi});
      break;
  }
  g.validate();
  return g;
}

void GaitConfig::validate() const {
  if (!(frequency_bounds.first > 0.0) || !(frequency_bounds.second >= frequency_bounds.first)) {
    throw ConfigError("gait.frequency_bounds: need 0 < lo <= hi");
  }
  if (default_frequency < frequency_bounds.first || default_frequency > frequency_bounds.second) {
    throw ConfigError("gait.default_frequency: outside frequency_bounds");
  }
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const auto windows = sorted_windows(stance_windows[leg]);
    for (size_t i = 0; i < windows.size(); ++i) {
      const PhaseWindow& w = windows[i];
      if (!(w.start >= 0.0 && w.start < w.end && w.end <= kTwoPi + 1e-12)) {
        throw ConfigError("gait.stance_windows[" + std::to_string(leg) +
                          "]: windows must satisfy 0 <= start < end <= 2*pi");
      }
      if (i > 0 && w.start < windows[i - 1].end) {
        throw ConfigError("gait.stance_windows[" + std::to_string(leg) +
                          "]: windows must not overlap");
      }
    }
  }
  auto same = [](const std::vector<PhaseWindow>& a, const std::vector<PhaseWindow>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i].start - b[i].start) > 1e-12 || std::abs(a[i].end - b[i].end) > 1e-12) {
        return false;
      }
    }
    return true;
  };
  if (name == GaitName::kPronking) {
    for (int leg = 1; leg < kNumLegs; ++leg) {
      if (!same(stance_windows[0], stance_windows[leg])) {
        throw ConfigError("gait.stance_windows: pronking requires identical windows on all legs");
      }
    }
  }
  if (name == GaitName::kBounding) {
    if (!same(stance_windows[kFrontRight], stance_windows[kFrontLeft]) ||
        !same(stance_windows[kRearRight], stance_windows[kRearLeft])) {
      throw ConfigError("gait.stance_windows: bounding requires paired front and rear windows");
    }
    for (const PhaseWindow& f : stance_windows[kFrontRight]) {
      for (const PhaseWindow& r : stance_windows[kRearRight]) {
        if (f.start < r.end && r.start < f.end) {
          throw ConfigError("gait.stance_windows: bounding front/rear windows must be disjoint");
        }
      }
    }
  }
}

GaitConfig GaitConfig::from_json(const Json& j) {
  require_object(j, "gait");
  reject_unknown_keys(j, "gait",
                      {"name", "default_frequency", "frequency_bounds", "stance_windows"});
  GaitConfig g = GaitConfig::preset(gait_name_from_string(get_string(j, "name", "gait", "pronking")));
  g.default_frequency = get_number(j, "default_frequency", "gait", g.default_frequency);
  if (j.contains("frequency_bounds")) {
    auto b = get_number_array(j, "frequency_bounds", "gait", 2, {});
    g.frequency_bounds = {b[0], b[1]};
  }
  if (j.contains("stance_windows")) {
    const Json& sw = j.at("stance_windows");
    if (!sw.is_array() || sw.size() != kNumLegs) {
      throw ConfigError("gait.stance_windows: expected 4 per-leg window lists (FR, FL, RR, RL)");
    }
    for (int leg = 0; leg < kNumLegs; ++leg) {
      g.stance_windows[leg].clear();
      for (const auto& w : sw.at(leg)) {
        if (!w.is_array() || w.size() != 2 || !w.at(0).is_number() || !w.at(1).is_number()) {
          throw ConfigError("gait.stance_windows[" + std::to_string(leg) +
                            "]: expected [start, end] pairs");
        }
        g.stance_windows[leg].push_back({w.at(0).get<double>(), w.at(1).get<double>()});
      }
    }
  }
  g.validate();
  return g;
}

Json GaitConfig::to_json() const {
  Json j;
  j["name"] = gait_name_string(name);
  j["default_frequency"] = default_frequency;
  j["frequency_bounds"] = {frequency_bounds.first, frequency_bounds.second};
  Json sw = Json::array();
  for (int leg = 0; leg < kNumLegs; ++leg) {
    Json leg_windows = Json::array();
    for (const PhaseWindow& w : stance_windows[leg]) leg_windows.push_back({w.start, w.end});
    sw.push_back(leg_windows);
  }
  j["stance_windows"] = sw;
  return j;
}

double PhaseState::phase() const {
  double p = std::fmod(unwrapped, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  return p;
}

long long PhaseState::cycle_count() const {
  return static_cast<long long>(std::floor(unwrapped / kTwoPi));
}

PhaseState advance_phase(const PhaseState& state, const GaitConfig& config, double f_step,
                         double dt) {
  const double f = std::clamp(f_step, config.frequency_bounds.first, config.frequency_bounds.second);
  PhaseState next;
  next.unwrapped = state.unwrapped + kTwoPi * f * dt;
  next.frequency = f;
  return next;
}

std::array<bool, kNumLegs> desired_contact_state(const GaitConfig& config, double phi) {
  std::array<bool, kNumLegs> contact{};
  for (int leg = 0; leg < kNumLegs; ++leg) {
    for (const PhaseWindow& w : config.stance_windows[leg]) {
      if (w.contains(phi)) {
        contact[leg] = true;
        break;
      }
    }
  }
  return contact;
}

std::optional<double> swing_progress(const GaitConfig& config, double phi, int leg) {
  const auto windows = sorted_windows(config.stance_windows[leg]);
  if (windows.empty()) return phi / kTwoPi;  // leg never in stance
  for (const PhaseWindow& w : windows) {
    if (w.contains(phi)) return std::nullopt;
  }
  // Interior gaps between consecutive stance windows.
  for (size_t i = 0; i + 1 < windows.size(); ++i) {
    const double lo = windows[i].end;
    const double hi = windows[i + 1].start;
    if (phi >= lo && phi < hi) return (phi - lo) / (hi - lo);
  }
  // Remaining swing straddles the wrap: [last.end, 2*pi) U [0, first.start).
  const double lo = windows.back().end;
  const double hi = windows.front().start;
  const double width = (kTwoPi - lo) + hi;
  if (width <= 0.0) return std::nullopt;  // full-circle stance
  const double elapsed = phi >= lo ? phi - lo : (kTwoPi - lo) + phi;
  return elapsed / width;
}

double estimate_stance_duration(const GaitConfig& config, double f_step, int leg) {
  const double f = std::clamp(f_step, config.frequency_bounds.first, config.frequency_bounds.second);
  double width = 0.0;
  for (const PhaseWindow& w : config.stance_windows[leg]) width += w.width();
  return width / kTwoPi / f;
}

}  // namespace cajun
