#pragma once

#include <cstdlib>
#include <memory>
#include <mutex>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace sfn {

/// Library-wide logger. Level comes from the SFN_LOG environment variable
/// (trace, debug, info, warn, error, off); the default is warn.
inline std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> instance;
  std::call_once(once, [] {
    instance = spdlog::get("sfn");
    if (!instance) instance = spdlog::stderr_color_mt("sfn");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("SFN_LOG"); env != nullptr && *env != '\0') {
      level = spdlog::level::from_str(env);
    }
    instance->set_level(level);
    instance->set_pattern("[%l] %v");
  });
  return instance;
}

}  // namespace sfn
