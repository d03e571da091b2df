#include "fsmkit/itlc.hpp"

#include "fsmkit/dsl.hpp"
#include "fsmkit/itlc_source.hpp"

#include <stdexcept>

namespace fsmkit::itlc {

std::string_view to_string(ControllerState s) {
    switch (s) {
    case ControllerState::S0:
        return "S0";
    case ControllerState::S1:
        return "S1";
    case ControllerState::S2:
        return "S2";
    case ControllerState::S3:
        return "S3";
    }
    return "?";
}

std::optional<ControllerState> parse_state(std::string_view name) {
    for (auto s : kAllStates)
        if (to_string(s) == name)
            return s;
    return std::nullopt;
}

InputValuation ItlcInputs::to_valuation() const {
    return {{"reset", reset}, {"c", c}, {"ts", ts}, {"tl", tl}};
}

bool LightOutputs::safe() const {
    const int main_lit = mg + my + mr;
    const int side_lit = sg + sy + sr;
    return main_lit == 1 && side_lit == 1 && (mr || sr);
}

std::string LightOutputs::bits() const {
    std::string s;
    for (bool b : {mg, my, mr, sg, sy, sr})
        s += b ? '1' : '0';
    return s;
}

LightOutputs LightOutputs::from(const OutputValues& moore) {
    auto get = [&](const char* name) {
        auto it = moore.find(name);
        if (it == moore.end())
            throw std::invalid_argument(std::string("moore outputs lack '") + name + "'");
        return it->second;
    };
    return {get("mg"), get("my"), get("mr"), get("sg"), get("sy"), get("sr")};
}

ReferenceStep reference_next(ControllerState state, const ItlcInputs& in) {
    using enum ControllerState;
    if (in.reset)
        return {S0, false};
    switch (state) {
    case S0:
        if (in.tl && in.c)
            return {S1, true};
        return {S0, false};
    case S1:
        if (in.ts)
            return {S2, true};
        return {S1, false};
    case S2:
        if (in.tl || !in.c)
            return {S3, true};
        return {S2, false};
    case S3:
        if (in.ts)
            return {S0, true};
        return {S3, false};
    }
    return {S0, false};
}

LightOutputs reference_output(ControllerState state) {
    LightOutputs out;
    switch (state) {
    case ControllerState::S0:
        out.mg = out.sr = true;
        break;
    case ControllerState::S1:
        out.my = out.sr = true;
        break;
    case ControllerState::S2:
        out.mr = out.sg = true;
        break;
    case ControllerState::S3:
        out.mr = out.sy = true;
        break;
    }
    return out;
}

std::string_view bundled_source() { return kItlcSource; }

const FsmSpec& bundled_spec() {
    static const FsmSpec spec = [] {
        auto parsed = parse_fsm(bundled_source());
        if (!parsed.ok())
            throw std::logic_error("embedded itlc.fsm: " + format_parse_error(parsed.errors.front(), "itlc.fsm"));
        if (!validate(*parsed.spec).ok())
            throw std::logic_error("embedded itlc.fsm does not validate");
        return std::move(*parsed.spec);
    }();
    return spec;
}

} // namespace fsmkit::itlc
