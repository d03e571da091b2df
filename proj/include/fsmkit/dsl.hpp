#pragma once

#include "fsmkit/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fsmkit {

// Text format for FsmSpec. Line oriented, `#` starts a comment:
//
//   fsm <name>
//   inputs <name>...
//   outputs <name>...
//   pulses <name>...
//   initial <state>
//   reset <input>
//   state <Name> { <out>=<bit> ... }
//   trans <Src> -> <Dst> when <expr> [emit <pulse>...]
//
// Guard expressions use `!` > `&` > `|`, parentheses and the literals 0/1.

struct SourceSpan {
    int line = 1;   // 1-based
    int column = 1; // 1-based, in bytes
    int length = 1;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class ParseErrorKind { Syntax, UnknownSignal, DuplicateName, BadBit };

std::string_view to_string(ParseErrorKind kind);

struct ParseError {
    SourceSpan span;
    ParseErrorKind kind;
    std::string message;
};

struct ParseResult {
    std::optional<FsmSpec> spec;
    std::vector<ParseError> errors; // in source order

    bool ok() const { return spec.has_value(); }
};

/// Never throws on malformed text. Recovers at line granularity, so one call
/// can report several errors. Does not check determinism; see validate().
ParseResult parse_fsm(std::string_view text);

/// Canonical text; parse_fsm of the result yields a spec equal to `spec`.
/// Empty signal lists and an absent reset are omitted.
std::string serialize_fsm(const FsmSpec& spec);

/// `<origin>:<line>:<col>: <kind>: <message>`
std::string format_parse_error(const ParseError& error, std::string_view origin = "<input>");

} // namespace fsmkit
