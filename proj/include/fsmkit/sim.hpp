#pragma once

#include "fsmkit/model.hpp"
#include "fsmkit/timer.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fsmkit {

/// Inputs driven from outside the closed loop for one tick.
struct ExternalInputs {
    bool c = false;
    bool reset = false;

    friend bool operator==(const ExternalInputs&, const ExternalInputs&) = default;
};

struct Stimulus {
    std::vector<ExternalInputs> ticks; // one entry per tick; size is the horizon

    friend bool operator==(const Stimulus&, const Stimulus&) = default;
};

class StimulusError : public std::runtime_error {
public:
    StimulusError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// `horizon <n>` then `<tick> c=<bit> [reset=<bit>]` lines in strictly
/// increasing tick order. Values hold until the next listed tick; both start at 0.
/// Throws StimulusError.
Stimulus parse_stimulus(std::string_view text);

/// One clock cycle. Bit i of inputs/outputs/pulses refers to the trace's
/// input_names/moore_names/pulse_names[i]. `outputs` are the current state's
/// Moore outputs; `pulses` fire on the transition taken from this state.
struct TickRecord {
    std::size_t tick = 0;
    std::uint32_t state = 0;
    std::uint32_t inputs = 0;
    std::uint32_t outputs = 0;
    std::uint32_t pulses = 0;
    std::optional<std::uint32_t> timer_count; // before this tick's commit; closed loop only

    friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

struct Trace {
    std::string spec_name;
    std::vector<std::string> state_names;
    std::vector<std::string> input_names;
    std::vector<std::string> moore_names;
    std::vector<std::string> pulse_names;
    std::optional<TimerConfig> timer;
    std::vector<TickRecord> records;

    const std::string& state_name(const TickRecord& r) const { return state_names[r.state]; }
    /// Throws std::out_of_range for names the trace does not carry.
    bool input(const TickRecord& r, std::string_view name) const;
    bool output(const TickRecord& r, std::string_view name) const;
    bool pulse(const TickRecord& r, std::string_view name) const;

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// Closed-loop kernel: the machine's st pulse restarts the interval timer whose
/// ts/tl feed back as inputs. Each tick, in order: read c/reset, derive ts/tl
/// from the timer, step, record with the current state's outputs, then commit
/// state and timer.
class ClosedLoop {
public:
    /// Throws ConfigError unless the machine's inputs are exactly
    /// {reset, c, ts, tl} and it declares an `st` pulse.
    ClosedLoop(const CompiledFsm& fsm, const TimerConfig& cfg);

    const TickRecord& tick(const ExternalInputs& in);

    std::uint32_t state() const { return state_; }
    TimerState timer() const { return timer_; }
    const CompiledFsm& fsm() const { return *fsm_; }
    const Trace& trace() const { return trace_; }
    Trace take_trace() && { return std::move(trace_); }

private:
    const CompiledFsm* fsm_;
    TimerConfig cfg_;
    std::uint32_t state_;
    TimerState timer_;
    std::size_t bit_reset_, bit_c_, bit_ts_, bit_tl_, bit_st_;
    Trace trace_;
};

/// Throws ConfigError for an empty stimulus or an incompatible/unvalidated spec.
Trace simulate(const FsmSpec& spec, const TimerConfig& cfg, const Stimulus& stim);
Trace simulate(const CompiledFsm& fsm, const TimerConfig& cfg, const Stimulus& stim);

/// Every input, timer levels included, supplied externally per tick.
Trace simulate_open_loop(const FsmSpec& spec, std::span<const InputValuation> inputs);

/// Value change dump at 1 ns per tick. Identifier codes are assigned from '!'
/// in the order inputs, pulses, moore outputs, state.
std::string write_vcd(const Trace& trace);

/// One line per tick: `<tick> <state> c=<b> ts=<b> tl=<b> st=<b> <lights>`,
/// lights in the order mg my mr sg sy sr (or every moore output in declaration
/// order when the machine lacks those six).
std::string format_tick_log(const Trace& trace);

} // namespace fsmkit
