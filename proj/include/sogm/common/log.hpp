#pragma once

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace sogm {

enum class LogLevel : int { quiet = 0, warn = 1, info = 2, debug = 3 };

// Verbosity comes from the SOGM_LOG environment variable
// (quiet|warn|info|debug); default is warn.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SOGM_LOG");
    if (env == nullptr) return LogLevel::warn;
    const std::string_view v(env);
    if (v == "quiet") return LogLevel::quiet;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::warn;
  }();
  return level;
}

inline void log_warn(const std::string& msg) {
  if (log_level() >= LogLevel::warn) std::cerr << "[sogm] warning: " << msg << "\n";
}

inline void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[sogm] " << msg << "\n";
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) std::cerr << "[sogm] debug: " << msg << "\n";
}

}  // namespace sogm
