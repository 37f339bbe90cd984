#pragma once

#include <cstdlib>
#include <ostream>
#include <string>

#include "higcn/errors.hpp"

namespace higcn {

enum class LogLevel { kQuiet = 0, kError = 1, kWarn = 2, kInfo = 3, kDebug = 4 };

inline LogLevel parse_log_level(const std::string& s) {
  if (s == "quiet" || s == "off") return LogLevel::kQuiet;
  if (s == "error") return LogLevel::kError;
  if (s == "warn" || s.empty()) return LogLevel::kWarn;
  if (s == "info") return LogLevel::kInfo;
  if (s == "debug") return LogLevel::kDebug;
  throw UsageError("FP_LOG must be one of quiet, error, warn, info, debug (got '" + s + "')");
}

// Verbosity comes from the FP_LOG environment variable; default warn.
inline LogLevel log_level_from_env() {
  const char* v = std::getenv("FP_LOG");
  return parse_log_level(v ? v : "");
}

// Diagnostics sink; never touches the JSON output stream.
class Logger {
 public:
  Logger(std::ostream& sink, LogLevel level) : sink_(&sink), level_(level) {}

  LogLevel level() const noexcept { return level_; }
  bool enabled(LogLevel l) const noexcept { return static_cast<int>(l) <= static_cast<int>(level_); }

  void error(const std::string& msg) const { write(LogLevel::kError, "error", msg); }
  void warn(const std::string& msg) const { write(LogLevel::kWarn, "warn", msg); }
  void info(const std::string& msg) const { write(LogLevel::kInfo, "info", msg); }
  void debug(const std::string& msg) const { write(LogLevel::kDebug, "debug", msg); }

 private:
  void write(LogLevel l, const char* tag, const std::string& msg) const {
    if (enabled(l)) *sink_ << "[" << tag << "] " << msg << '\n';
  }

  std::ostream* sink_;
  LogLevel level_;
};

}  // namespace higcn
