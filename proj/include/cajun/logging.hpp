#pragma once

#include <string>

namespace cajun {

enum class LogLevel : int { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Initialized lazily from the CAJUN_LOG_LEVEL environment variable
// (error|warn|info|debug, default info). --quiet drops it to error.
LogLevel log_level();
void set_log_level(LogLevel level);

void log_message(LogLevel level, const std::string& msg);
void log_error(const std::string& msg);
void log_warn(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace cajun
