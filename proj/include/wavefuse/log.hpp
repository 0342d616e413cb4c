#pragma once

#include <string>

namespace wavefuse::log {

// Thin front over spdlog so only one translation unit pulls in its headers.
// Verbosity comes from WAVEFUSE_LOG (off|info|debug); unset means off.
void init_from_env();
void set_level(const std::string& level);

void info(const std::string& msg);
void debug(const std::string& msg);
void warn(const std::string& msg);

}  // namespace wavefuse::log
