// Copyright 2026 The smallaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SMALLAUG_LOG_HPP_
#define SMALLAUG_LOG_HPP_

#include <optional>
#include <string>
#include <string_view>

namespace smallaug {

enum class LogLevel { Debug = 0, Info, Warn, Error, Off };

void set_log_level(LogLevel level);
LogLevel log_level();

/// "debug" | "info" | "warn" | "error" | "off"
std::optional<LogLevel> parse_log_level(std::string_view name);

/// Writes "[level] message" to stderr when `level` passes the global filter.
void log_message(LogLevel level, const std::string& message);

inline void log_debug(const std::string& m) { log_message(LogLevel::Debug, m); }
inline void log_info(const std::string& m) { log_message(LogLevel::Info, m); }
inline void log_warn(const std::string& m) { log_message(LogLevel::Warn, m); }
inline void log_error(const std::string& m) { log_message(LogLevel::Error, m); }

}  // namespace smallaug

#endif  // SMALLAUG_LOG_HPP_
