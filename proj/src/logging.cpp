#include "cajun/logging.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace cajun {
namespace {

LogLevel level_from_env() {
  const char* env = std::getenv("CAJUN_LOG_LEVEL");
  if (env == nullptr) return LogLevel::kInfo;
  if (std::strcmp(env, "error") == 0) return LogLevel::kError;
  if (std::strcmp(env, "warn") == 0) return LogLevel::kWarn;
  if (std::strcmp(env, "info") == 0) return LogLevel::kInfo;
  if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
  std::fprintf(stderr, "[warn] CAJUN_LOG_LEVEL '%s' not recognized, using info\n", env);
  return LogLevel::kInfo;
}

std::atomic<int>& level_storage() {
  static std::atomic<int> level{static_cast<int>(level_from_env())};
  return level;
}

const char* level_tag(LogLevel level) {
  switch (level) {
    case LogLevel::kError: return "error";
    case LogLevel::kWarn: return "warn";
    case LogLevel::kInfo: return "info";
    case LogLevel::kDebug: return "debug";
  }
  return "?";
}

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_storage().load()); }

void set_log_level(LogLevel level) { level_storage().store(static_cast<int>(level)); }

void log_message(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) > level_storage().load()) return;
  std::fprintf(stderr, "[%s] %s\n", level_tag(level), msg.c_str());
}

void log_error(const std::string& msg) { log_message(LogLevel::kError, msg); }
void log_warn(const std::string& msg) { log_message(LogLevel::kWarn, msg); }
void log_info(const std::string& msg) { log_message(LogLevel::kInfo, msg); }
void log_debug(const std::string& msg) { log_message(LogLevel::kDebug, msg); }

}  // namespace cajun
