#ifndef RANKFORGE_LOG_HPP
#define RANKFORGE_LOG_HPP

#include <string_view>

namespace rankforge {

enum class LogLevel { kDebug = 0, kInfo, kWarn, kError, kOff };

// Level comes from the RANKFORGE_LOG environment variable
// (debug|info|warn|error|off), default warn. Read once.
LogLevel log_level();

void log_debug(std::string_view msg);
void log_info(std::string_view msg);
void log_warn(std::string_view msg);
void log_error(std::string_view msg);

}  // namespace rankforge

#endif  // RANKFORGE_LOG_HPP
