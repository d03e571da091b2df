#pragma once

#include "fsmkit/model.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fsmkit {

enum class PinKind { Input, Output };

struct PinAssignment {
    std::string signal;
    std::string location;
    PinKind kind;

    friend bool operator==(const PinAssignment&, const PinAssignment&) = default;
};

struct PinMap {
    std::vector<PinAssignment> entries;

    friend bool operator==(const PinMap&, const PinMap&) = default;
};

/// Spartan-3E starter board mapping: sensor and timer levels on slide switches,
/// lamps on LEDs. st is left unmapped because the controller drives it.
PinMap default_itlc_pins();

/// `<signal> <pin> <input|output>` per line, `#` comments. Throws ConfigError
/// with the line number on malformed lines or repeated signals.
PinMap parse_pins(std::string_view text);

/// Throws ConfigError if a mapped signal is missing from the spec or its
/// direction disagrees with the spec.
void check_pins(const PinMap& pins, const FsmSpec& spec);

/// `NET "<signal>" LOC = "<pin>";` per entry, in map order.
std::string emit_ucf(const PinMap& pins);

enum class StateEncoding { Binary, OneHot };

struct EmitOptions {
    StateEncoding encoding = StateEncoding::Binary;
    std::string module_name; // empty: use the spec name
};

class EmitError : public std::runtime_error {
public:
    explicit EmitError(std::vector<std::string> offenders);
    const std::vector<std::string>& offenders() const { return offenders_; }

private:
    std::vector<std::string> offenders_;
};

/// Verilog-2001 module: ports clk, inputs, moore outputs, pulse outputs; a
/// state register with synchronous reset to the initial state; a combinational
/// next-state/pulse block; continuous assigns for the moore outputs.
/// Throws ContractViolation if validate(spec) has findings and EmitError when
/// names collide with HDL keywords or the generated internals.
std::string emit_verilog(const FsmSpec& spec, const EmitOptions& opts = {});

/// Register width used for the given encoding.
std::size_t state_register_width(std::size_t states, StateEncoding encoding);

} // namespace fsmkit
