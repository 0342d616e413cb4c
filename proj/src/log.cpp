#include "wavefuse/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <mutex>

namespace wavefuse::log {

namespace {

spdlog::logger& logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> instance;
  std::call_once(once, [] {
    instance = spdlog::stderr_logger_mt("wavefuse");
    instance->set_pattern("[%H:%M:%S.%e] [%l] %v");
    instance->set_level(spdlog::level::off);
    if (const char* env = std::getenv("WAVEFUSE_LOG")) {
      if (std::string(env) == "info") instance->set_level(spdlog::level::info);
      if (std::string(env) == "debug") instance->set_level(spdlog::level::debug);
    }
  });
  return *instance;
}

}  // namespace

void init_from_env() { (void)logger(); }

void set_level(const std::string& level) {
  if (level == "debug") {
    logger().set_level(spdlog::level::debug);
  } else if (level == "info") {
    logger().set_level(spdlog::level::info);
  } else {
    logger().set_level(spdlog::level::off);
  }
}

void info(const std::string& msg) { logger().info(msg); }
void debug(const std::string& msg) { logger().debug(msg); }
void warn(const std::string& msg) { logger().warn(msg); }

}  // namespace wavefuse::log
