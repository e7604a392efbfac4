#pragma once

#include <string>

namespace rwb {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

/// Level from ROBUST_WB_LOG (error|info|debug), read once; default error.
LogLevel log_level();
void set_log_level(LogLevel level);

void log_message(LogLevel level, const std::string& msg);
inline void log_info(const std::string& msg) { log_message(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log_message(LogLevel::Debug, msg); }
inline void log_error(const std::string& msg) { log_message(LogLevel::Error, msg); }

}  // namespace rwb
