#pragma once

#include "fsmkit/model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

// The four-phase traffic light controller: a hand-written transition table
// plus the same machine shipped as DSL text (designs/itlc.fsm). Tests keep the
// two in lockstep.
namespace fsmkit::itlc {

enum class ControllerState : std::uint8_t { S0, S1, S2, S3 };

inline constexpr std::array<ControllerState, 4> kAllStates{ControllerState::S0, ControllerState::S1,
                                                           ControllerState::S2, ControllerState::S3};

std::string_view to_string(ControllerState s);
std::optional<ControllerState> parse_state(std::string_view name);

struct ItlcInputs {
    bool reset = false;
    bool c = false;  // side-road presence
    bool ts = false; // short interval elapsed
    bool tl = false; // long interval elapsed

    InputValuation to_valuation() const;
    friend bool operator==(const ItlcInputs&, const ItlcInputs&) = default;
};

struct LightOutputs {
    bool mg = false, my = false, mr = false;
    bool sg = false, sy = false, sr = false;

    /// One lamp per road and at least one road held at red.
    bool safe() const;
    /// Six characters in the order mg my mr sg sy sr.
    std::string bits() const;

    static LightOutputs from(const OutputValues& moore);
    friend bool operator==(const LightOutputs&, const LightOutputs&) = default;
};

struct ReferenceStep {
    ControllerState next;
    bool st;

    friend bool operator==(const ReferenceStep&, const ReferenceStep&) = default;
};

ReferenceStep reference_next(ControllerState state, const ItlcInputs& in);
LightOutputs reference_output(ControllerState state);

/// Contents of designs/itlc.fsm, compiled into the library.
std::string_view bundled_source();

/// Parsed and validated once; throws std::logic_error if the embedded text is broken.
const FsmSpec& bundled_spec();

} // namespace fsmkit::itlc
