#include "fsmkit/timer.hpp"

#include "fsmkit/errors.hpp"

#include <string>

namespace fsmkit {

TimerConfig TimerConfig::make(std::int64_t short_ticks, std::int64_t long_ticks) {
    if (short_ticks <= 0)
        throw ConfigError("short_ticks must be positive");
    if (short_ticks >= long_ticks)
        throw ConfigError("short_ticks must be < long_ticks");
    if (long_ticks > 0x7fffffff)
        throw ConfigError("long_ticks too large: " + std::to_string(long_ticks));
    return {static_cast<std::uint32_t>(short_ticks), static_cast<std::uint32_t>(long_ticks)};
}

} // namespace fsmkit
