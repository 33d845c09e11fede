#pragma once

#include <string_view>

namespace npsvor {

enum class LogLevel { quiet = 0, warning = 1, info = 2 };

void set_log_level(LogLevel level);
LogLevel log_level();

// Single-line messages to standard error.
void log_info(std::string_view message);
void log_warning(std::string_view message);

}  // namespace npsvor
