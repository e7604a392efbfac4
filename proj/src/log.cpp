#include "rwb/log.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>

namespace rwb {

namespace {

LogLevel from_env() {
  const char* v = std::getenv("ROBUST_WB_LOG");
  if (!v) return LogLevel::Error;
  if (std::strcmp(v, "debug") == 0) return LogLevel::Debug;
  if (std::strcmp(v, "info") == 0) return LogLevel::Info;
  return LogLevel::Error;
}

std::atomic<int>& level_ref() {
  static std::atomic<int> level{static_cast<int>(from_env())};
  return level;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_ref().load()); }

void set_log_level(LogLevel level) { level_ref().store(static_cast<int>(level)); }

void log_message(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) > level_ref().load()) return;
  static const char* names[] = {"error", "info", "debug"};
  std::lock_guard<std::mutex> lock(sink_mutex());
  std::cerr << "[robust-wb " << names[static_cast<int>(level)] << "] " << msg << '\n';
}

}  // namespace rwb
