#include "fsmkit/model.hpp"

#include "fsmkit/errors.hpp"

#include <algorithm>

namespace fsmkit {

const StateDef* FsmSpec::find_state(std::string_view state) const {
    auto it = std::find_if(states.begin(), states.end(), [&](const StateDef& s) { return s.name == state; });
    return it == states.end() ? nullptr : &*it;
}

std::optional<std::size_t> FsmSpec::state_index(std::string_view state) const {
    auto it = std::find_if(states.begin(), states.end(), [&](const StateDef& s) { return s.name == state; });
    if (it == states.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - states.begin());
}

std::string_view to_string(FindingKind kind) {
    switch (kind) {
    case FindingKind::Overlap:
        return "overlap";
    case FindingKind::Gap:
        return "gap";
    case FindingKind::Structural:
        return "structural";
    }
    return "?";
}

bool is_identifier(std::string_view text) {
    if (text.empty())
        return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(text.front()))
        return false;
    return std::all_of(text.begin() + 1, text.end(), [&](char c) { return alpha(c) || digit(c); });
}

namespace {

bool contains(const std::vector<std::string>& names, const std::string& name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

InputValuation unpack(const std::vector<std::string>& inputs, std::uint32_t mask) {
    InputValuation v;
    for (std::size_t i = 0; i < inputs.size(); ++i)
        v[inputs[i]] = ((mask >> i) & 1u) != 0;
    return v;
}

// Returns true when every guard of `state` only mentions declared inputs.
bool check_state_structure(const FsmSpec& spec, const StateDef& state, std::vector<Finding>& out) {
    auto structural = [&](std::string detail) {
        out.push_back({FindingKind::Structural, state.name, std::nullopt, std::move(detail)});
    };
    for (const auto& [output, bit] : state.moore_assignments) {
        (void)bit;
        if (!contains(spec.moore_outputs, output))
            structural("assigns undeclared moore output '" + output + "'");
    }
    bool guards_clean = true;
    for (const auto& t : state.transitions) {
        if (!spec.find_state(t.destination))
            structural("transition to undeclared state '" + t.destination + "'");
        for (const auto& p : t.pulses)
            if (!contains(spec.pulse_outputs, p))
                structural("transition emits undeclared pulse '" + p + "'");
        for (const auto& var : guard_variables(t.guard)) {
            if (!contains(spec.inputs, var)) {
                structural("guard references undeclared input '" + var + "'");
                guards_clean = false;
            }
        }
    }
    return guards_clean;
}

} // namespace

ValidationReport validate(const FsmSpec& spec) {
    ValidationReport report;
    auto& out = report.findings;
    auto machine = [&](std::string detail) {
        out.push_back({FindingKind::Structural, {}, std::nullopt, std::move(detail)});
    };

    if (!is_identifier(spec.name))
        machine("machine name '" + spec.name + "' is not an identifier");

    std::set<std::string> signals;
    for (const auto* list : {&spec.inputs, &spec.moore_outputs, &spec.pulse_outputs}) {
        for (const auto& s : *list) {
            if (!is_identifier(s))
                machine("signal name '" + s + "' is not an identifier");
            if (!signals.insert(s).second)
                machine("duplicate signal '" + s + "'");
        }
    }
    std::set<std::string> state_names;
    for (const auto& s : spec.states) {
        if (!is_identifier(s.name))
            machine("state name '" + s.name + "' is not an identifier");
        if (!state_names.insert(s.name).second)
            machine("duplicate state '" + s.name + "'");
    }
    if (spec.states.empty())
        machine("no states declared");
    if (!spec.find_state(spec.initial_state))
        machine("initial state '" + spec.initial_state + "' is not declared");
    if (spec.reset_input && !contains(spec.inputs, *spec.reset_input))
        machine("reset input '" + *spec.reset_input + "' is not a declared input");
    const bool enumerable = spec.inputs.size() <= kMaxEnumeratedInputs;
    if (!enumerable)
        machine("more than " + std::to_string(kMaxEnumeratedInputs) + " inputs; exhaustive check refused");
    if (spec.moore_outputs.size() > 32 || spec.pulse_outputs.size() > 32)
        machine("more than 32 moore or pulse outputs");

    std::optional<std::size_t> reset_bit;
    if (spec.reset_input) {
        auto it = std::find(spec.inputs.begin(), spec.inputs.end(), *spec.reset_input);
        if (it != spec.inputs.end())
            reset_bit = static_cast<std::size_t>(it - spec.inputs.begin());
    }

    for (const auto& state : spec.states) {
        if (!check_state_structure(spec, state, out) || !enumerable)
            continue;
        const std::uint32_t count = 1u << spec.inputs.size();
        for (std::uint32_t mask = 0; mask < count; ++mask) {
            if (reset_bit && ((mask >> *reset_bit) & 1u))
                continue;
            std::size_t enabled = 0;
            for (const auto& t : state.transitions)
                enabled += eval_guard(t.guard, spec.inputs, mask) ? 1 : 0;
            if (enabled == 0)
                out.push_back({FindingKind::Gap, state.name, unpack(spec.inputs, mask), "no transition enabled"});
            else if (enabled > 1)
                out.push_back({FindingKind::Overlap, state.name, unpack(spec.inputs, mask),
                               std::to_string(enabled) + " transitions enabled"});
        }
    }
    return report;
}

std::string format_valuation(const FsmSpec& spec, const InputValuation& v) {
    std::string out = "{";
    bool first = true;
    for (const auto& name : spec.inputs) {
        auto it = v.find(name);
        if (it == v.end())
            continue;
        if (!first)
            out += ',';
        first = false;
        out += name + '=' + (it->second ? '1' : '0');
    }
    return out + '}';
}

std::string format_finding(const FsmSpec& spec, const Finding& f) {
    std::string line(to_string(f.kind));
    line += ' ';
    line += f.state.empty() ? "-" : f.state;
    if (f.valuation)
        line += ' ' + format_valuation(spec, *f.valuation);
    return line + ' ' + f.detail;
}

StepResult step_spec(const FsmSpec& spec, std::string_view current, const InputValuation& v) {
    const StateDef* state = spec.find_state(current);
    if (!state)
        throw StructuralError("unknown state '" + std::string(current) + "'");
    if (spec.reset_input) {
        auto it = v.find(*spec.reset_input);
        if (it == v.end())
            throw StructuralError("valuation lacks reset input '" + *spec.reset_input + "'");
        if (it->second)
            return {spec.initial_state, {}};
    }
    const Transition* chosen = nullptr;
    for (const auto& t : state->transitions) {
        if (!eval_guard(t.guard, v))
            continue;
        if (chosen)
            throw ContractViolation("state '" + state->name + "': more than one transition enabled for " +
                                    format_valuation(spec, v));
        chosen = &t;
    }
    if (!chosen)
        throw ContractViolation("state '" + state->name + "': no transition enabled for " +
                                format_valuation(spec, v));
    return {chosen->destination, chosen->pulses};
}

OutputValues moore_output(const FsmSpec& spec, std::string_view state) {
    const StateDef* def = spec.find_state(state);
    if (!def)
        throw StructuralError("unknown state '" + std::string(state) + "'");
    OutputValues out;
    for (const auto& name : spec.moore_outputs) {
        auto it = def->moore_assignments.find(name);
        out[name] = it != def->moore_assignments.end() && it->second;
    }
    return out;
}

CompiledFsm::CompiledFsm(const FsmSpec& spec) : spec_(spec) {
    const auto report = validate(spec_);
    if (!report.ok())
        throw ContractViolation("cannot compile '" + spec_.name + "': " + format_finding(spec_, report.findings.front()));

    initial_ = static_cast<std::uint32_t>(*spec_.state_index(spec_.initial_state));
    std::optional<std::size_t> reset_bit;
    if (spec_.reset_input)
        reset_bit = input_index(*spec_.reset_input);

    const std::uint32_t count = 1u << spec_.inputs.size();
    table_.resize(spec_.states.size() * count);
    moore_.resize(spec_.states.size());
    for (std::size_t s = 0; s < spec_.states.size(); ++s) {
        const auto& state = spec_.states[s];
        for (std::size_t i = 0; i < spec_.moore_outputs.size(); ++i) {
            auto it = state.moore_assignments.find(spec_.moore_outputs[i]);
            if (it != state.moore_assignments.end() && it->second)
                moore_[s] |= 1u << i;
        }
        for (std::uint32_t mask = 0; mask < count; ++mask) {
            Step& entry = table_[(s << spec_.inputs.size()) | mask];
            if (reset_bit && ((mask >> *reset_bit) & 1u)) {
                entry = {initial_, 0};
                continue;
            }
            for (const auto& t : state.transitions) {
                if (!eval_guard(t.guard, spec_.inputs, mask))
                    continue;
                entry.next = static_cast<std::uint32_t>(*spec_.state_index(t.destination));
                entry.pulses = 0;
                for (const auto& p : t.pulses)
                    entry.pulses |= 1u << *pulse_index(p);
                break;
            }
        }
    }
}

namespace {
std::optional<std::size_t> index_of(const std::vector<std::string>& names, std::string_view name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}
} // namespace

std::optional<std::size_t> CompiledFsm::input_index(std::string_view name) const {
    return index_of(spec_.inputs, name);
}

std::optional<std::size_t> CompiledFsm::moore_index(std::string_view name) const {
    return index_of(spec_.moore_outputs, name);
}

std::optional<std::size_t> CompiledFsm::pulse_index(std::string_view name) const {
    return index_of(spec_.pulse_outputs, name);
}

} // namespace fsmkit
