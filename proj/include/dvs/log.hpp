#pragma once

#include <string_view>

// Diagnostics on stderr, controlled by DVS_LOG={quiet,info,trace}.
// Unset or unknown values mean quiet.

namespace dvs::log {

enum class Level { Quiet = 0, Info = 1, Trace = 2 };

Level level();
void set_level(Level l);

void info(std::string_view msg);
void trace(std::string_view msg);

}  // namespace dvs::log
