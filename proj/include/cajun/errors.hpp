#pragma once

#include <stdexcept>
#include <string>

namespace cajun {

// Malformed or inconsistent configuration input. The message always starts
// with the offending field path (e.g. "robot.mass: must be positive").
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The integrator left the model's validity envelope (base speed above
// 50 m/s, or pitch too close to the Euler-angle singularity). This signals
// instability, not a recoverable state.
class SimDivergedError : public std::runtime_error {
 public:
  explicit SimDivergedError(const std::string& what) : std::runtime_error(what) {}
};

class SteppedAfterDoneError : public std::logic_error {
 public:
  SteppedAfterDoneError() : std::logic_error("step() called on a finished episode") {}
};

}  // namespace cajun
