#include "rankforge/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace rankforge {

namespace {

LogLevel parse_level(const char* value) {
  if (value == nullptr) return LogLevel::kWarn;
  std::string v(value);
  if (v == "debug") return LogLevel::kDebug;
  if (v == "info") return LogLevel::kInfo;
  if (v == "warn" || v == "warning") return LogLevel::kWarn;
  if (v == "error") return LogLevel::kError;
  if (v == "off" || v == "none") return LogLevel::kOff;
  return LogLevel::kWarn;
}

std::mutex& log_mutex() {
  static std::mutex m;
  return m;
}

void emit(LogLevel level, std::string_view tag, std::string_view msg) {
  if (level < log_level()) return;
  std::lock_guard<std::mutex> lock(log_mutex());
  std::cerr << "[" << tag << "] " << msg << "\n";
}

}  // namespace

LogLevel log_level() {
  static const LogLevel level = parse_level(std::getenv("RANKFORGE_LOG"));
  return level;
}

void log_debug(std::string_view msg) { emit(LogLevel::kDebug, "debug", msg); }
void log_info(std::string_view msg) { emit(LogLevel::kInfo, "info", msg); }
void log_warn(std::string_view msg) { emit(LogLevel::kWarn, "warn", msg); }
void log_error(std::string_view msg) { emit(LogLevel::kError, "error", msg); }

}  // namespace rankforge
