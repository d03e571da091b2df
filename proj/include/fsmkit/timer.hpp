#pragma once

#include <cstdint>

namespace fsmkit {

/// Thresholds of the interval timer, in clock ticks since the last restart.
struct TimerConfig {
    std::uint32_t short_ticks = 4;
    std::uint32_t long_ticks = 16;

    /// Throws ConfigError unless 0 < short_ticks < long_ticks.
    static TimerConfig make(std::int64_t short_ticks, std::int64_t long_ticks);

    friend bool operator==(const TimerConfig&, const TimerConfig&) = default;
};

/// Ticks since the last restart, saturating at long_ticks.
struct TimerState {
    std::uint32_t count = 0;

    friend bool operator==(const TimerState&, const TimerState&) = default;
};

struct TimerOutputs {
    bool ts;
    bool tl;

    friend bool operator==(const TimerOutputs&, const TimerOutputs&) = default;
};

// ts and tl are levels: once up they stay up until the next restart.
constexpr TimerOutputs timer_outputs(const TimerConfig& cfg, TimerState t) {
    return {t.count >= cfg.short_ticks, t.count >= cfg.long_ticks};
}

constexpr TimerState timer_commit(const TimerConfig& cfg, TimerState t, bool st) {
    if (st)
        return {0};
    return {t.count < cfg.long_ticks ? t.count + 1 : cfg.long_ticks};
}

} // namespace fsmkit
