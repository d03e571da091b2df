#pragma once

#include "fsmkit/guard.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fsmkit {

using OutputValues = std::map<std::string, bool>;

struct Transition {
    Guard guard;
    std::string destination;
    std::set<std::string> pulses;

    friend bool operator==(const Transition&, const Transition&) = default;
};

struct StateDef {
    std::string name;
    // Outputs not listed here are 0 in this state.
    std::map<std::string, bool> moore_assignments;
    std::vector<Transition> transitions;

    friend bool operator==(const StateDef&, const StateDef&) = default;
};

/// Clocked Moore machine whose transitions may additionally carry one-cycle pulses.
struct FsmSpec {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> moore_outputs;
    std::vector<std::string> pulse_outputs;
    std::vector<StateDef> states;
    std::string initial_state;
    // When set and high, forces the initial state with no pulses, ahead of all guards.
    std::optional<std::string> reset_input;

    const StateDef* find_state(std::string_view state) const;
    std::optional<std::size_t> state_index(std::string_view state) const;

    friend bool operator==(const FsmSpec&, const FsmSpec&) = default;
};

enum class FindingKind { Overlap, Gap, Structural };

std::string_view to_string(FindingKind kind);

struct Finding {
    FindingKind kind;
    std::string state; // empty for machine-level findings
    std::optional<InputValuation> valuation;
    std::string detail;

    friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const { return findings.empty(); }
};

/// Exhaustive inputs above this count are reported as a structural finding.
inline constexpr std::size_t kMaxEnumeratedInputs = 20;

bool is_identifier(std::string_view text);

/// Structural checks, then per-state enumeration of every input valuation:
/// each must enable exactly one transition. Valuations with reset high are
/// skipped since the reset override decides them.
ValidationReport validate(const FsmSpec& spec);

/// `{a=1,b=0}` in the spec's input declaration order.
std::string format_valuation(const FsmSpec& spec, const InputValuation& v);

/// One line: `<kind> <state|-> [valuation] <detail>`.
std::string format_finding(const FsmSpec& spec, const Finding& f);

struct StepResult {
    std::string next;
    std::set<std::string> pulses;

    friend bool operator==(const StepResult&, const StepResult&) = default;
};

StepResult step_spec(const FsmSpec& spec, std::string_view current, const InputValuation& v);

/// Depends on the state alone; unassigned outputs read 0.
OutputValues moore_output(const FsmSpec& spec, std::string_view state);

/// A validated spec lowered to dense tables indexed by (state, packed input mask).
/// Bit i of an input mask is spec.inputs[i]; bit i of a pulse mask is
/// spec.pulse_outputs[i]; bit i of a moore mask is spec.moore_outputs[i].
class CompiledFsm {
public:
    struct Step {
        std::uint32_t next;
        std::uint32_t pulses;
    };

    /// Throws ContractViolation if validate(spec) reports findings.
    explicit CompiledFsm(const FsmSpec& spec);

    const FsmSpec& spec() const { return spec_; }
    std::size_t state_count() const { return spec_.states.size(); }
    std::uint32_t initial() const { return initial_; }

    Step step(std::uint32_t state, std::uint32_t input_mask) const {
        return table_[(static_cast<std::size_t>(state) << spec_.inputs.size()) | input_mask];
    }
    std::uint32_t moore_mask(std::uint32_t state) const { return moore_[state]; }

    std::optional<std::size_t> input_index(std::string_view name) const;
    std::optional<std::size_t> moore_index(std::string_view name) const;
    std::optional<std::size_t> pulse_index(std::string_view name) const;

private:
    FsmSpec spec_;
    std::uint32_t initial_ = 0;
    std::vector<Step> table_;
    std::vector<std::uint32_t> moore_;
};

} // namespace fsmkit
